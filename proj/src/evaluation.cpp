#include "fade/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <json.hpp>

namespace fade {

MatchResult match_events(const std::vector<FallEvent>& detected, const std::vector<TruthEvent>& truth, double tol) {
  std::vector<std::size_t> order(detected.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return detected[a].t < detected[b].t; });

  MatchResult out;
  std::vector<bool> used(truth.size(), false);
  for (std::size_t d : order) {
    const double t = detected[d].t;
    std::optional<std::size_t> best;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < truth.size(); ++k) {
      const TruthEvent& ev = truth[k];
      if (used[k] || ev.kind != ActivityKind::Fall) continue;
      if (t < ev.fall_start_t - tol || t > ev.impact_t + tol) continue;
      const double gap = t < ev.fall_start_t ? ev.fall_start_t - t : (t > ev.impact_t ? t - ev.impact_t : 0.0);
      if (gap < best_gap) {
        best_gap = gap;
        best = k;
      }
    }
    if (best) {
      used[*best] = true;
      out.pairs.emplace_back(d, *best);
      ++out.tp;
    } else {
      ++out.fp;
    }
  }
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if (truth[k].kind == ActivityKind::Fall && !used[k]) ++out.fn;
  }
  return out;
}

Metrics metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  Metrics m{tp, fp, fn, std::nullopt, std::nullopt, std::nullopt};
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  return m;
}

Metrics& Metrics::operator+=(const MatchResult& r) {
  *this = metrics(tp + r.tp, fp + r.fp, fn + r.fn);
  return *this;
}

TimingSummary summarize_timing(std::vector<double> ms) {
  TimingSummary s;
  s.frames = ms.size();
  if (ms.empty()) return s;
  s.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  std::sort(ms.begin(), ms.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(ms.size())));
  s.p95_ms = ms[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

namespace {

nlohmann::ordered_json to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["fn"] = m.fn;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("precision", m.precision);
  put("recall", m.recall);
  put("f1", m.f1);
  return j;
}

}  // namespace

std::string metrics_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j = to_json(report.overall);
  nlohmann::ordered_json users = nlohmann::ordered_json::object();
  for (const auto& [n, m] : report.by_user_count) users[std::to_string(n)] = to_json(m);
  j["by_user_count"] = users;
  if (report.timing) {
    j["timing"] = {{"frames", report.timing->frames},
                   {"mean_ms", report.timing->mean_ms},
                   {"p95_ms", report.timing->p95_ms}};
  }
  return j.dump(2);
}

std::size_t actor_count(const std::vector<TruthEvent>& truth) {
  std::set<int> ids;
  for (const auto& ev : truth) ids.insert(ev.actor);
  return ids.size();
}

}  // namespace fade
