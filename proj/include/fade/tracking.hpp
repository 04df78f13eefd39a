#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fade/clustering.hpp"

namespace fade {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Chi-square quantile: the normalized-distance threshold whose gate holds a
/// model-consistent measurement with the given probability.
double gate_threshold(double probability, int dof = 3);

struct TrackerConfig {
  double v_min = 0.1;               // m/s, direct-start lower speed bound
  double v_max = 4.0;               // m/s, direct-start upper speed bound
  double t_s = kDefaultFramePeriod; // s
  int m_confirm = 3;                // hits needed among the first n_window frames
  int n_window = 4;
  int m_delete = 1;                 // confirmed tracks need this many hits ...
  int delete_window = 10;           // ... in the last delete_window frames
  double gate_probability = 0.99;
  double process_noise = 20.0;      // (m/s^2)^2 per Hz, white acceleration
  double measurement_noise = 0.01;  // m^2 per axis

  double gamma() const { return gate_threshold(gate_probability, 3); }
  void validate() const;
};

enum class TrackStatus { Test, Confirmed };

/// Most recent association flags, newest at the back.
class HitHistory {
 public:
  explicit HitHistory(std::size_t capacity = 10) : capacity_(capacity) {}

  void push(bool hit);
  std::size_t size() const { return flags_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// Hits among the last n entries (or fewer if the history is shorter).
  int hits(std::size_t n) const;
  bool operator[](std::size_t k) const { return flags_[k]; }

 private:
  std::size_t capacity_;
  std::deque<bool> flags_;
};

struct Track {
  std::int64_t id = 0;
  TrackStatus status = TrackStatus::Test;
  HitHistory history;
  Vector6d x = Vector6d::Zero();  // x, y, z, vx, vy, vz
  Matrix6d P = Matrix6d::Identity();
  Centroid last_centroid;
  double birth_t = 0.0;
  double last_update_t = 0.0;
};

struct Prediction {
  Eigen::Vector3d z_hat = Eigen::Vector3d::Zero();
  Eigen::Matrix3d S = Eigen::Matrix3d::Identity();
};

struct Association {
  std::optional<std::size_t> index;
  double distance = 0.0;  // normalized innovation distance of the chosen centroid
  bool singular = false;  // S could not be inverted; gate treated as empty
};

enum class MnDecision { Promote, Keep, Delete };

/// Inter-frame starting: pairs unclaimed centroids of consecutive frames
/// whose displacement is consistent with a walking speed. Greedy by the
/// shortest displacement; each centroid joins at most one new track.
/// prev_claimed / cur_claimed are updated with the centroids consumed.
std::vector<Track> direct_start(const std::vector<Centroid>& prev, const std::vector<Centroid>& cur,
                                const TrackerConfig& cfg, std::vector<bool>& prev_claimed,
                                std::vector<bool>& cur_claimed, std::int64_t& next_id, double t);

/// Propagates the track to the next frame with a constant-velocity plant
/// and returns the predicted position with its innovation covariance.
Prediction kf_predict(Track& track, const TrackerConfig& cfg);

/// Elliptic gate followed by nearest-neighbour choice among unclaimed
/// centroids.
Association gate_and_associate(const Prediction& pred, const std::vector<Centroid>& centroids,
                               const std::vector<bool>& claimed, double gamma);

void kf_update(Track& track, const Centroid& z, const TrackerConfig& cfg, double t);

/// Decision from the hit history (already containing this frame's flag).
MnDecision mn_update(const HitHistory& history, TrackStatus status, const TrackerConfig& cfg);

struct TrackOutput {
  std::int64_t id = 0;
  Centroid filtered;
  double vz = 0.0;                   // filtered vertical velocity
  std::optional<double> z_measured;  // raw centroid z when associated this frame
  bool newly_confirmed = false;
};

struct TrackerStep {
  std::vector<TrackOutput> confirmed;
  std::vector<std::int64_t> deleted_confirmed;
};

/// Per-frame track management: prediction, gated association (confirmed
/// tracks before test tracks, older ids first), update, M/N bookkeeping and
/// direct starting on whatever centroids remain.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {});

  TrackerStep step(double t, const std::vector<Centroid>& centroids);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return cfg_; }
  std::size_t singular_innovations() const { return singular_; }

 private:
  TrackerConfig cfg_;
  double gamma_;
  std::vector<Track> tracks_;
  std::vector<Centroid> leftover_;
  bool have_prev_ = false;
  std::int64_t next_id_ = 1;
  std::size_t singular_ = 0;
};

}  // namespace fade
