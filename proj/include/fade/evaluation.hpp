#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fade/events.hpp"

namespace fade {

inline constexpr double kDefaultMatchTolerance = 2.0;  // s

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  /// (detection index, truth index) for every true positive.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Greedy one-to-one matching in detection-time order. A detection may
/// claim an unmatched truth fall whose [fall_start - tol, impact + tol]
/// window contains it; among several, the one whose [fall_start, impact]
/// interval is closest wins. ADL truth entries are ignored.
MatchResult match_events(const std::vector<FallEvent>& detected, const std::vector<TruthEvent>& truth,
                         double tol = kDefaultMatchTolerance);

struct Metrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::optional<double> precision;  // absent when undefined
  std::optional<double> recall;
  std::optional<double> f1;

  Metrics& operator+=(const MatchResult& m);
};

Metrics metrics(std::size_t tp, std::size_t fp, std::size_t fn);

struct TimingSummary {
  std::size_t frames = 0;
  double mean_ms = 0.0;
  double p95_ms = 0.0;
};

/// Nearest-rank 95th percentile.
TimingSummary summarize_timing(std::vector<double> frame_ms);

struct MetricsReport {
  Metrics overall;
  std::map<std::size_t, Metrics> by_user_count;
  std::optional<TimingSummary> timing;
};

std::string metrics_to_json(const MetricsReport& report);

/// Number of distinct actors that appear in the truth file.
std::size_t actor_count(const std::vector<TruthEvent>& truth);

}  // namespace fade
