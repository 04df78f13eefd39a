#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <optional>
#include <span>

#include <Eigen/Core>

namespace fade {

/// Vertical motion models. CV describes daily activity, CA describes the
/// fall phase. Interfaces use the names; the numeric value is only the slot.
enum class MotionModel : std::size_t { CV = 0, CA = 1 };

inline constexpr std::size_t kModelCount = 2;

constexpr std::size_t slot(MotionModel m) { return static_cast<std::size_t>(m); }

struct ImmConfig {
  double t = 0.05;  // sampling interval, s
  /// Row-stochastic Markov switching matrix: entry (i, j) is the
  /// probability of moving from model i to model j in one step.
  Eigen::Matrix2d transition = (Eigen::Matrix2d() << 0.97, 0.03, 0.01, 0.99).finished();
  Eigen::Matrix3d q_cv = Eigen::Vector3d(1e-4, 1e-2, 0.0).asDiagonal();
  Eigen::Matrix3d q_ca = Eigen::Vector3d(1e-4, 1e-2, 100.0).asDiagonal();
  double r = 0.001225;  // m^2, (0.035 m)^2
  std::size_t u_fit_window = 6;
  Eigen::Vector2d mu_init = Eigen::Vector2d(0.9, 0.1);
  /// mu_CA crossing this level from below counts as a CV -> CA switch and
  /// triggers the least-squares input estimate.
  double switch_threshold = 0.5;

  void validate() const;
};

/// [z, v, a] in m, m/s, m/s^2; downward is negative.
struct ModelEstimate {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Eigen::Matrix3d P = Eigen::Matrix3d::Identity();
};

struct ImmState {
  std::array<ModelEstimate, kModelCount> models;
  Eigen::Vector2d mu = Eigen::Vector2d(0.9, 0.1);
  Eigen::Vector3d x = Eigen::Vector3d::Zero();  // combined estimate
  Eigen::Matrix3d P = Eigen::Matrix3d::Identity();
  Eigen::Vector3d u = Eigen::Vector3d::Zero();  // input applied on the next step

  const ModelEstimate& model(MotionModel m) const { return models[slot(m)]; }
  ModelEstimate& model(MotionModel m) { return models[slot(m)]; }
  double probability(MotionModel m) const { return mu(static_cast<Eigen::Index>(slot(m))); }
};

struct MixResult {
  std::array<ModelEstimate, kModelCount> mixed;
  Eigen::Vector2d c = Eigen::Vector2d::Zero();  // predicted model probabilities
  bool degenerate = false;                      // mu was reset to mu_init
};

struct ImmDiagnostics {
  std::size_t degenerate_resets = 0;
  std::size_t underflows = 0;
};

Eigen::Matrix3d transition_matrix(MotionModel m, double t);

/// Input interaction: predicted model probabilities and per-model mixed
/// initial conditions.
MixResult imm_mix(const ImmState& state, const Eigen::Matrix2d& transition,
                  const Eigen::Vector2d& mu_init = Eigen::Vector2d(0.9, 0.1));

/// One full cycle: mixing, per-model predict/update, probability update and
/// output combination. With no measurement only the prediction is kept and
/// the model probabilities follow the Markov chain. The pending input is
/// applied and cleared.
ImmState imm_step(const ImmState& state, std::optional<double> y, const ImmConfig& cfg,
                  ImmDiagnostics* diag = nullptr);

/// Least-squares quadratic fit of the recent z samples, evaluated at t_eval,
/// minus the CA propagation of x_ca. Adding the result to F_CA * x_ca puts
/// the CA branch on the fitted kinematics. Zero when fewer than three
/// distinct times are available.
Eigen::Vector3d estimate_input_u(std::span<const double> times, std::span<const double> ys,
                                 double t_eval, const Eigen::Vector3d& x_ca, double t);

ImmState make_imm_state(double z, double v, const ImmConfig& cfg);

/// Stateful wrapper for one track: owns the ImmState plus the measurement
/// window used for the input estimate.
class ImmFilter {
 public:
  ImmFilter(const ImmConfig& cfg, double z0, double v0, double t0);

  const ImmState& step(double t, std::optional<double> y);

  const ImmState& state() const { return state_; }
  const ImmDiagnostics& diagnostics() const { return diag_; }
  std::size_t input_estimates() const { return input_estimates_; }

 private:
  ImmConfig cfg_;
  ImmState state_;
  ImmDiagnostics diag_;
  std::deque<double> times_;
  std::deque<double> ys_;
  std::size_t input_estimates_ = 0;
};

/// Plain constant-velocity Kalman filter on [z, v] used as the single-model
/// reference in comparisons.
class CvKalman {
 public:
  CvKalman(double t, double q_pos, double q_vel, double r, double z0, double v0);
  void step(std::optional<double> y);
  double z() const { return x_(0); }
  double v() const { return x_(1); }

 private:
  double r_;
  Eigen::Matrix2d F_, Q_, P_;
  Eigen::Vector2d x_;
};

}  // namespace fade
