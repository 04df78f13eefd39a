#include "fade/detector.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fade {

void DetectorConfig::validate() const {
  if (window < 1) throw std::invalid_argument("detector.window must be >= 1");
  if (!(p_thre > 0.0 && p_thre < 1.0)) throw std::invalid_argument("detector.p_thre must lie in (0, 1)");
  if (refractory < 0.0) throw std::invalid_argument("detector.refractory must be non-negative");
}

std::optional<FallEvent> threshold_decide(const std::deque<FeatureSample>& history, const DetectorConfig& cfg,
                                          std::int64_t track_id, std::optional<double> last_event_t) {
  if (history.empty()) return std::nullopt;
  const double now = history.back().t;
  if (last_event_t && now - *last_event_t < cfg.refractory) return std::nullopt;

  const std::size_t n = std::min(history.size(), cfg.window);
  double min_v = std::numeric_limits<double>::infinity();
  double min_a = std::numeric_limits<double>::infinity();
  double max_p = 0.0;
  for (auto it = history.end() - static_cast<std::ptrdiff_t>(n); it != history.end(); ++it) {
    min_v = std::min(min_v, it->v_hat);
    if (it->a_hat < 0.0) min_a = std::min(min_a, it->a_hat);
    max_p = std::max(max_p, it->mu_ca);
  }

  if (min_v <= cfg.v_thre && min_a <= cfg.a_thre && max_p >= cfg.p_thre) {
    return FallEvent{track_id, now, min_v, min_a, max_p};
  }
  return std::nullopt;
}

FallDetector::FallDetector(const ImmConfig& imm, const DetectorConfig& det) : imm_(imm), det_(det) {
  imm_.validate();
  det_.validate();
}

const ImmState* FallDetector::state_of(std::int64_t track_id) const {
  auto it = channels_.find(track_id);
  return it == channels_.end() ? nullptr : &it->second.filter.state();
}

std::vector<FallEvent> FallDetector::process(double t, const TrackerStep& step, std::vector<FeatureRow>* trace) {
  for (std::int64_t id : step.deleted_confirmed) channels_.erase(id);

  std::vector<FallEvent> events;
  for (const TrackOutput& out : step.confirmed) {
    auto it = channels_.find(out.id);
    const ImmState* state = nullptr;
    if (it == channels_.end()) {
      const double z0 = out.z_measured.value_or(out.filtered.z);
      it = channels_.emplace(out.id, Channel{ImmFilter(imm_, z0, out.vz, t), {}, std::nullopt}).first;
      state = &it->second.filter.state();
    } else {
      state = &it->second.filter.step(t, out.z_measured);
    }

    Channel& ch = it->second;
    ch.window.push_back({t, state->x(0), state->x(1), state->x(2), state->probability(MotionModel::CA)});
    while (ch.window.size() > det_.window) ch.window.pop_front();

    auto ev = threshold_decide(ch.window, det_, out.id, ch.last_event_t);
    if (ev) {
      ch.last_event_t = ev->t;
      events.push_back(*ev);
    }
    if (trace) {
      trace->push_back({t, out.id, out.z_measured, state->x(0), state->x(1), state->x(2),
                        state->probability(MotionModel::CA), ev.has_value()});
    }
  }
  return events;
}

}  // namespace fade
