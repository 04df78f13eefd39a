#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fade {

enum class ActivityKind { Fall, Adl };

/// Ground-truth label written by the simulator. For ADL entries the two
/// times bracket the activity instead of a fall.
struct TruthEvent {
  int actor = 0;
  ActivityKind kind = ActivityKind::Fall;
  double fall_start_t = 0.0;
  double impact_t = 0.0;

  bool operator==(const TruthEvent&) const = default;
};

/// A detected fall. The peak values are the extreme features inside the
/// decision window at trigger time.
struct FallEvent {
  std::int64_t track_id = 0;
  double t = 0.0;
  double peak_v = 0.0;
  double peak_a = 0.0;
  double peak_p_ca = 0.0;

  bool operator==(const FallEvent&) const = default;
};

std::vector<TruthEvent> parse_truth_events(std::istream& in);
std::vector<TruthEvent> read_truth_events(const std::filesystem::path& path);
void write_truth_events(std::ostream& out, const std::vector<TruthEvent>& events);
void write_truth_events(const std::filesystem::path& path, const std::vector<TruthEvent>& events);

std::vector<FallEvent> parse_fall_events(std::istream& in);
std::vector<FallEvent> read_fall_events(const std::filesystem::path& path);
void write_fall_events(std::ostream& out, const std::vector<FallEvent>& events);
void write_fall_events(const std::filesystem::path& path, const std::vector<FallEvent>& events);

}  // namespace fade
