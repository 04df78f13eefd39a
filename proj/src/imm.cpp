#include "fade/imm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include <Eigen/QR>

namespace fade {

namespace {

constexpr double kTinyProbability = 1e-30;
const double kLogUnderflow = std::log(1e-300);

Eigen::Matrix3d symmetrize(const Eigen::Matrix3d& m) { return 0.5 * (m + m.transpose()); }

const Eigen::Matrix3d& process_noise(const ImmConfig& cfg, std::size_t j) {
  return j == slot(MotionModel::CV) ? cfg.q_cv : cfg.q_ca;
}

void combine(ImmState& s) {
  s.x.setZero();
  for (std::size_t j = 0; j < kModelCount; ++j) s.x += s.mu(static_cast<Eigen::Index>(j)) * s.models[j].x;
  s.P.setZero();
  for (std::size_t j = 0; j < kModelCount; ++j) {
    const Eigen::Vector3d d = s.models[j].x - s.x;
    s.P += s.mu(static_cast<Eigen::Index>(j)) * (s.models[j].P + d * d.transpose());
  }
  s.P = symmetrize(s.P);
}

}  // namespace

void ImmConfig::validate() const {
  if (!(t > 0.0)) throw std::invalid_argument("imm: sampling interval must be positive");
  for (Eigen::Index i = 0; i < 2; ++i) {
    if ((transition.row(i).array() < 0.0).any()) throw std::invalid_argument("imm: negative switching probability");
    if (std::abs(transition.row(i).sum() - 1.0) > 1e-12) {
      throw std::invalid_argument("imm: switching matrix rows must sum to 1");
    }
  }
  if ((mu_init.array() < 0.0).any() || std::abs(mu_init.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("imm: mu_init must be a probability vector");
  }
  if (!(r > 0.0)) throw std::invalid_argument("imm: r must be positive");
  if (u_fit_window < 3) throw std::invalid_argument("imm: u_fit_window must be at least 3");
}

Eigen::Matrix3d transition_matrix(MotionModel m, double t) {
  Eigen::Matrix3d F;
  if (m == MotionModel::CV) {
    F << 1, t, 0,
         0, 1, 0,
         0, 0, 0;
  } else {
    F << 1, t, t * t / 2,
         0, 1, t,
         0, 0, 1;
  }
  return F;
}

MixResult imm_mix(const ImmState& state, const Eigen::Matrix2d& transition, const Eigen::Vector2d& mu_init) {
  MixResult out;
  Eigen::Vector2d mu = state.mu;
  out.c = transition.transpose() * mu;
  if ((out.c.array() < kTinyProbability).all()) {
    out.degenerate = true;
    mu = mu_init;
    out.c = transition.transpose() * mu;
  }

  for (std::size_t j = 0; j < kModelCount; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    Eigen::Vector2d w;
    if (out.c(jj) < kTinyProbability) {
      // nothing flows into j; seed it from the current posterior instead
      w = mu;
    } else {
      for (Eigen::Index i = 0; i < 2; ++i) w(i) = transition(i, jj) * mu(i) / out.c(jj);
    }
    ModelEstimate& m = out.mixed[j];
    m.x.setZero();
    for (std::size_t i = 0; i < kModelCount; ++i) m.x += w(static_cast<Eigen::Index>(i)) * state.models[i].x;
    m.P.setZero();
    for (std::size_t i = 0; i < kModelCount; ++i) {
      const Eigen::Vector3d d = state.models[i].x - m.x;
      m.P += w(static_cast<Eigen::Index>(i)) * (state.models[i].P + d * d.transpose());
    }
    m.P = symmetrize(m.P);
  }
  return out;
}

ImmState imm_step(const ImmState& state, std::optional<double> y, const ImmConfig& cfg, ImmDiagnostics* diag) {
  const MixResult mix = imm_mix(state, cfg.transition, cfg.mu_init);
  if (mix.degenerate && diag) ++diag->degenerate_resets;

  ImmState next;
  std::array<double, kModelCount> log_lik{};
  for (std::size_t j = 0; j < kModelCount; ++j) {
    const auto model = static_cast<MotionModel>(j);
    const Eigen::Matrix3d F = transition_matrix(model, cfg.t);
    ModelEstimate& m = next.models[j];
    m.x = F * mix.mixed[j].x;
    if (model == MotionModel::CA) m.x += state.u;
    m.P = symmetrize(F * mix.mixed[j].P * F.transpose() + process_noise(cfg, j));

    if (y) {
      const double s = m.P(0, 0) + cfg.r;
      const double nu = *y - m.x(0);
      const Eigen::Vector3d k = m.P.col(0) / s;
      m.x += k * nu;
      // Joseph form with H = [1 0 0]
      Eigen::Matrix3d ikh = Eigen::Matrix3d::Identity();
      ikh.col(0) -= k;
      m.P = symmetrize(ikh * m.P * ikh.transpose() + cfg.r * k * k.transpose());
      log_lik[j] = -0.5 * (std::log(2.0 * std::numbers::pi * s) + nu * nu / s);
    }
  }

  if (y) {
    const double peak = *std::max_element(log_lik.begin(), log_lik.end());
    if (peak < kLogUnderflow && diag) ++diag->underflows;
    double total = 0.0;
    for (std::size_t j = 0; j < kModelCount; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      next.mu(jj) = std::exp(log_lik[j] - peak) * mix.c(jj);
      total += next.mu(jj);
    }
    if (total > 0.0 && std::isfinite(total)) {
      next.mu /= total;
    } else {
      next.mu = mix.c / mix.c.sum();
    }
  } else {
    next.mu = mix.c / mix.c.sum();
  }

  next.u.setZero();
  combine(next);
  return next;
}

Eigen::Vector3d estimate_input_u(std::span<const double> times, std::span<const double> ys,
                                 double t_eval, const Eigen::Vector3d& x_ca, double t) {
  if (times.size() != ys.size()) throw std::invalid_argument("estimate_input_u: size mismatch");
  std::set<double> distinct(times.begin(), times.end());
  if (distinct.size() < 3) return Eigen::Vector3d::Zero();

  const auto n = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double tau = times[static_cast<std::size_t>(k)] - t_eval;
    A(k, 0) = 1.0;
    A(k, 1) = tau;
    A(k, 2) = tau * tau;
    b(k) = ys[static_cast<std::size_t>(k)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 3) return Eigen::Vector3d::Zero();
  const Eigen::Vector3d c = qr.solve(b);
  const Eigen::Vector3d fitted(c(0), c(1), 2.0 * c(2));
  return fitted - transition_matrix(MotionModel::CA, t) * x_ca;
}

ImmState make_imm_state(double z, double v, const ImmConfig& cfg) {
  ImmState s;
  for (std::size_t j = 0; j < kModelCount; ++j) {
    ModelEstimate& m = s.models[j];
    m.x = Eigen::Vector3d(z, v, 0.0);
    const double var_a = static_cast<MotionModel>(j) == MotionModel::CA ? 1.0 : 0.0;
    m.P = Eigen::Vector3d(cfg.r, 0.25, var_a).asDiagonal();
  }
  s.mu = cfg.mu_init;
  combine(s);
  return s;
}

ImmFilter::ImmFilter(const ImmConfig& cfg, double z0, double v0, double t0)
    : cfg_(cfg), state_(make_imm_state(z0, v0, cfg)) {
  cfg_.validate();
  times_.push_back(t0);
  ys_.push_back(z0);
}

const ImmState& ImmFilter::step(double t, std::optional<double> y) {
  const double mu_ca_before = state_.probability(MotionModel::CA);
  state_ = imm_step(state_, y, cfg_, &diag_);

  if (y) {
    times_.push_back(t);
    ys_.push_back(*y);
    while (times_.size() > cfg_.u_fit_window) {
      times_.pop_front();
      ys_.pop_front();
    }
  }

  const double mu_ca = state_.probability(MotionModel::CA);
  if (mu_ca_before < cfg_.switch_threshold && mu_ca >= cfg_.switch_threshold &&
      times_.size() >= cfg_.u_fit_window) {
    const std::vector<double> ts(times_.begin(), times_.end());
    const std::vector<double> zs(ys_.begin(), ys_.end());
    state_.u = estimate_input_u(ts, zs, t + cfg_.t, state_.model(MotionModel::CA).x, cfg_.t);
    ++input_estimates_;
  }
  return state_;
}

CvKalman::CvKalman(double t, double q_pos, double q_vel, double r, double z0, double v0) : r_(r) {
  F_ << 1, t, 0, 1;
  Q_ << q_pos, 0, 0, q_vel;
  P_ << r, 0, 0, 0.25;
  x_ << z0, v0;
}

void CvKalman::step(std::optional<double> y) {
  x_ = F_ * x_;
  P_ = F_ * P_ * F_.transpose() + Q_;
  if (!y) return;
  const double s = P_(0, 0) + r_;
  const Eigen::Vector2d k = P_.col(0) / s;
  x_ += k * (*y - x_(0));
  Eigen::Matrix2d ikh = Eigen::Matrix2d::Identity();
  ikh.col(0) -= k;
  P_ = ikh * P_ * ikh.transpose() + r_ * k * k.transpose();
}

}  // namespace fade
