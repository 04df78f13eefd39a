#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fade/events.hpp"
#include "fade/frame_io.hpp"

namespace fade {

inline constexpr double kGravity = 9.81;

class InvalidScript : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ActionKind { Walk, Stand, Sit, Squat, StandUp, Fall };

/// One scripted activity. Only the fields relevant to the kind are read.
struct Action {
  ActionKind kind = ActionKind::Stand;
  double start_t = 0.0;

  double duration = 1.0;  // stand

  double to_x = 0.0;      // walk target
  double to_y = 0.0;
  double speed = 1.0;     // walk speed, m/s

  double drop = 0.45;     // sit / squat vertical travel, m
  double peak_speed = 1.0;  // sit / squat / stand-up vertical speed cap, m/s
  double hold = 0.5;      // squat: time at the bottom before rising

  double a_fall = -7.0;   // fall phase acceleration, m/s^2 (negative)
  double rest_height = 0.3;
  double pre_fall_duration = 0.2;
  double pre_fall_drop = 0.03;
  double dir_x = 0.0;     // horizontal fall direction (normalized internally)
  double dir_y = 0.0;
  double reach = 0.4;     // horizontal torso travel during the fall phase, m
};

struct ActorScript {
  int id = 0;
  double x0 = 0.0;
  double y0 = 3.0;
  double torso_height = 1.3;  // standing torso centroid, m
  std::vector<Action> actions;

  /// Throws InvalidScript for overlapping actions, ADL speeds above the
  /// 1.2 m/s cap, a fall acceleration outside (-g, 0) or a rest shorter
  /// than one second.
  void validate() const;
};

struct WallPlane {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitY();
};

struct NoiseSpec {
  double position_sigma = 0.02;      // m
  double doppler_sigma = 0.05;       // m/s
  double detection_probability = 1.0;  // per body point
  double clutter_rate = 0.0;         // Poisson mean, points per frame
  std::optional<WallPlane> ghost_wall;
  double ghost_detection_probability = 0.3;  // per mirrored point
  std::size_t torso_points = 12;
  std::size_t limb_points = 4;
  double limb_doppler_sigma = 0.15;  // m/s, limb swing relative to the torso

  void validate() const;
};

struct Scenario {
  std::uint64_t seed = 0;
  double duration = 10.0;
  double t_frame = kDefaultFramePeriod;
  std::vector<ActorScript> actors;
  NoiseSpec noise;
  SensorPose pose{2.0, 0.1745};
};

struct TruthSample {
  double t = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
};

struct ActorTrajectory {
  int actor = 0;
  std::vector<TruthSample> samples;  // one per frame
  std::vector<TruthEvent> events;
};

struct Dataset {
  StreamHeader header;
  std::vector<PointFrame> frames;  // sensor-frame points
  std::vector<TruthEvent> truth;   // time-ordered
  std::vector<ActorTrajectory> trajectories;
};

std::size_t frame_count(double duration, double t_frame);

/// Torso-centroid kinematics sampled at every frame plus activity labels.
/// Falls follow pre-fall, constant-acceleration fall, instant impact stop
/// and rest at rest_height.
ActorTrajectory synth_trajectory(const ActorScript& script, double t_frame, std::size_t n_frames);

/// Scatters body points around each actor's torso, adds clutter and
/// wall-mirror ghosts, and returns sensor-frame frames. Each actor, its
/// ghost and the clutter draw from separate streams derived from the seed,
/// so adding an actor leaves the others' points unchanged.
std::vector<PointFrame> synth_pointcloud(const std::vector<ActorTrajectory>& truth, const NoiseSpec& noise,
                                         const SensorPose& pose, std::uint64_t seed, std::size_t n_frames,
                                         double t_frame);

Dataset simulate(const Scenario& scenario);

void write_dataset(const Dataset& data, const std::filesystem::path& frames_path,
                   const std::filesystem::path& truth_path);

Scenario parse_scenario(const std::string& json_text);
Scenario read_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);

/// Radial speed seen by a radar at `radar` for a point at p moving with v.
double radial_speed(const Eigen::Vector3d& p, const Eigen::Vector3d& v, const Eigen::Vector3d& radar);

Eigen::Vector3d mirror_point(const Eigen::Vector3d& p, const WallPlane& wall);
Eigen::Vector3d mirror_direction(const Eigen::Vector3d& v, const WallPlane& wall);

}  // namespace fade
