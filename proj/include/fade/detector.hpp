#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "fade/events.hpp"
#include "fade/imm.hpp"
#include "fade/tracking.hpp"

namespace fade {

struct DetectorConfig {
  double v_thre = -3.0;     // m/s, downward
  double a_thre = -5.0;     // m/s^2, downward
  double p_thre = 0.5;      // CA model probability
  std::size_t window = 20;  // frames
  double refractory = 2.0;  // s between events of one track

  void validate() const;
};

struct FeatureSample {
  double t = 0.0;
  double z_hat = 0.0;
  double v_hat = 0.0;
  double a_hat = 0.0;
  double mu_ca = 0.0;
};

/// Sliding-window decision: the velocity, acceleration and model-probability
/// lines must each be crossed somewhere in the window, not necessarily at
/// the same frame. Only decelerating frames (a < 0) count for the
/// acceleration line, so rising after a fall does not trigger. Returns
/// nothing while inside the refractory period after last_event_t.
std::optional<FallEvent> threshold_decide(const std::deque<FeatureSample>& history, const DetectorConfig& cfg,
                                          std::int64_t track_id, std::optional<double> last_event_t);

/// One row of the per-frame feature trace.
struct FeatureRow {
  double t = 0.0;
  std::int64_t track_id = 0;
  std::optional<double> z_meas;
  double z_hat = 0.0;
  double v_hat = 0.0;
  double a_hat = 0.0;
  double mu_ca = 0.0;
  bool decision = false;
};

/// Runs one IMM filter and decision window per confirmed track.
class FallDetector {
 public:
  FallDetector(const ImmConfig& imm, const DetectorConfig& det);

  /// Consumes one frame of tracker output. Feature rows for the frame are
  /// appended to trace when given.
  std::vector<FallEvent> process(double t, const TrackerStep& step, std::vector<FeatureRow>* trace = nullptr);

  std::size_t active_tracks() const { return channels_.size(); }
  const ImmState* state_of(std::int64_t track_id) const;

 private:
  struct Channel {
    ImmFilter filter;
    std::deque<FeatureSample> window;
    std::optional<double> last_event_t;
  };

  ImmConfig imm_;
  DetectorConfig det_;
  std::map<std::int64_t, Channel> channels_;
};

}  // namespace fade
