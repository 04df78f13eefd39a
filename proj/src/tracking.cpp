#include "fade/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <boost/math/distributions/chi_squared.hpp>

namespace fade {

double gate_threshold(double probability, int dof) {
  if (!(probability > 0.0 && probability < 1.0)) {
    throw std::invalid_argument("gate probability must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::chi_squared(dof), probability);
}

void TrackerConfig::validate() const {
  if (!(v_min >= 0.0 && v_min < v_max)) throw std::invalid_argument("tracker: need 0 <= v_min < v_max");
  if (!(t_s > 0.0)) throw std::invalid_argument("tracker: t_s must be positive");
  if (m_confirm < 1 || m_confirm > n_window) throw std::invalid_argument("tracker: need 1 <= m_confirm <= n_window");
  if (n_window < 2) throw std::invalid_argument("tracker: n_window must cover the two starting frames");
  if (m_delete < 1 || m_delete > delete_window) throw std::invalid_argument("tracker: need 1 <= m_delete <= delete_window");
  if (!(gate_probability > 0.0 && gate_probability < 1.0)) {
    throw std::invalid_argument("tracker: gate_probability must lie in (0, 1)");
  }
  if (process_noise < 0.0 || !(measurement_noise > 0.0)) {
    throw std::invalid_argument("tracker: noise intensities must be non-negative (measurement positive)");
  }
}

void HitHistory::push(bool hit) {
  flags_.push_back(hit);
  while (flags_.size() > capacity_) flags_.pop_front();
}

int HitHistory::hits(std::size_t n) const {
  n = std::min(n, flags_.size());
  return static_cast<int>(std::count(flags_.end() - static_cast<std::ptrdiff_t>(n), flags_.end(), true));
}

namespace {

Eigen::Vector3d as_vector(const Centroid& c) { return {c.x, c.y, c.z}; }

double distance(const Centroid& a, const Centroid& b) {
  return (as_vector(a) - as_vector(b)).norm();
}

}  // namespace

std::vector<Track> direct_start(const std::vector<Centroid>& prev, const std::vector<Centroid>& cur,
                                const TrackerConfig& cfg, std::vector<bool>& prev_claimed,
                                std::vector<bool>& cur_claimed, std::int64_t& next_id, double t) {
  prev_claimed.resize(prev.size(), false);
  cur_claimed.resize(cur.size(), false);
  const double lo = cfg.v_min * cfg.t_s;
  const double hi = cfg.v_max * cfg.t_s;

  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    if (cur_claimed[i]) continue;
    for (std::size_t j = 0; j < prev.size(); ++j) {
      if (prev_claimed[j]) continue;
      const double d = distance(cur[i], prev[j]);
      if (d >= lo && d <= hi) pairs.emplace_back(d, i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  const double r = cfg.measurement_noise;
  const double var_v = 2.0 * r / (cfg.t_s * cfg.t_s);
  std::vector<Track> born;
  for (const auto& [d, i, j] : pairs) {
    if (cur_claimed[i] || prev_claimed[j]) continue;
    cur_claimed[i] = true;
    prev_claimed[j] = true;

    Track tr;
    tr.id = next_id++;
    tr.status = TrackStatus::Test;
    tr.history = HitHistory(static_cast<std::size_t>(std::max(cfg.n_window, cfg.delete_window)));
    tr.history.push(true);
    tr.history.push(true);
    const Eigen::Vector3d p = as_vector(cur[i]);
    tr.x.head<3>() = p;
    tr.x.tail<3>() = (p - as_vector(prev[j])) / cfg.t_s;
    tr.P.setZero();
    tr.P.diagonal() << r, r, r, var_v, var_v, var_v;
    tr.last_centroid = cur[i];
    tr.birth_t = t;
    tr.last_update_t = t;
    born.push_back(std::move(tr));
  }
  return born;
}

Prediction kf_predict(Track& track, const TrackerConfig& cfg) {
  const double T = cfg.t_s;
  Matrix6d F = Matrix6d::Identity();
  F.topRightCorner<3, 3>() = T * Eigen::Matrix3d::Identity();

  Matrix6d Q = Matrix6d::Zero();
  const double q = cfg.process_noise;
  const Eigen::Matrix3d I3 = Eigen::Matrix3d::Identity();
  Q.topLeftCorner<3, 3>() = q * T * T * T / 3.0 * I3;
  Q.topRightCorner<3, 3>() = q * T * T / 2.0 * I3;
  Q.bottomLeftCorner<3, 3>() = q * T * T / 2.0 * I3;
  Q.bottomRightCorner<3, 3>() = q * T * I3;

  track.x = F * track.x;
  track.P = F * track.P * F.transpose() + Q;
  track.P = 0.5 * (track.P + track.P.transpose());

  Prediction pred;
  pred.z_hat = track.x.head<3>();
  pred.S = track.P.topLeftCorner<3, 3>() + cfg.measurement_noise * I3;
  return pred;
}

Association gate_and_associate(const Prediction& pred, const std::vector<Centroid>& centroids,
                               const std::vector<bool>& claimed, double gamma) {
  Association out;
  Eigen::LLT<Eigen::Matrix3d> llt(pred.S);
  if (llt.info() != Eigen::Success) {
    out.singular = true;
    return out;
  }
  for (std::size_t k = 0; k < centroids.size(); ++k) {
    if (k < claimed.size() && claimed[k]) continue;
    const Eigen::Vector3d v = as_vector(centroids[k]) - pred.z_hat;
    const double d = v.dot(llt.solve(v));
    if (d <= gamma && (!out.index || d < out.distance)) {
      out.index = k;
      out.distance = d;
    }
  }
  return out;
}

void kf_update(Track& track, const Centroid& z, const TrackerConfig& cfg, double t) {
  Eigen::Matrix<double, 3, 6> H = Eigen::Matrix<double, 3, 6>::Zero();
  H.leftCols<3>().setIdentity();
  const Eigen::Matrix3d R = cfg.measurement_noise * Eigen::Matrix3d::Identity();

  const Eigen::Matrix3d S = H * track.P * H.transpose() + R;
  const Eigen::Matrix<double, 6, 3> K = track.P * H.transpose() * S.inverse();
  track.x += K * (as_vector(z) - H * track.x);

  const Matrix6d IKH = Matrix6d::Identity() - K * H;
  track.P = IKH * track.P * IKH.transpose() + K * R * K.transpose();
  track.P = 0.5 * (track.P + track.P.transpose());

  track.last_centroid = {track.x(0), track.x(1), track.x(2)};
  track.last_update_t = t;
}

MnDecision mn_update(const HitHistory& history, TrackStatus status, const TrackerConfig& cfg) {
  if (status == TrackStatus::Test) {
    const auto n = static_cast<std::size_t>(cfg.n_window);
    if (history.size() < n) return MnDecision::Keep;
    return history.hits(n) >= cfg.m_confirm ? MnDecision::Promote : MnDecision::Delete;
  }
  const auto n = static_cast<std::size_t>(cfg.delete_window);
  if (history.size() >= n && history.hits(n) < cfg.m_delete) return MnDecision::Delete;
  return MnDecision::Keep;
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  gamma_ = cfg_.gamma();
}

TrackerStep Tracker::step(double t, const std::vector<Centroid>& centroids) {
  TrackerStep out;
  const std::size_t n_tracks = tracks_.size();

  std::vector<Prediction> preds;
  preds.reserve(n_tracks);
  for (auto& tr : tracks_) preds.push_back(kf_predict(tr, cfg_));

  std::vector<bool> claimed(centroids.size(), false);
  std::vector<std::optional<std::size_t>> assoc(n_tracks);
  auto associate_all = [&](TrackStatus status) {
    // tracks_ is kept in creation order, so this visits older ids first
    for (std::size_t k = 0; k < n_tracks; ++k) {
      if (tracks_[k].status != status) continue;
      const Association a = gate_and_associate(preds[k], centroids, claimed, gamma_);
      if (a.singular) ++singular_;
      if (a.index) {
        claimed[*a.index] = true;
        assoc[k] = a.index;
      }
    }
  };
  associate_all(TrackStatus::Confirmed);
  associate_all(TrackStatus::Test);

  std::vector<Track> kept;
  kept.reserve(n_tracks);
  for (std::size_t k = 0; k < n_tracks; ++k) {
    Track& tr = tracks_[k];
    if (assoc[k]) kf_update(tr, centroids[*assoc[k]], cfg_, t);
    tr.history.push(assoc[k].has_value());

    const MnDecision d = mn_update(tr.history, tr.status, cfg_);
    if (d == MnDecision::Delete) {
      if (tr.status == TrackStatus::Confirmed) out.deleted_confirmed.push_back(tr.id);
      continue;
    }
    bool promoted = false;
    if (d == MnDecision::Promote) {
      tr.status = TrackStatus::Confirmed;
      promoted = true;
    }
    if (tr.status == TrackStatus::Confirmed) {
      TrackOutput o;
      o.id = tr.id;
      o.filtered = {tr.x(0), tr.x(1), tr.x(2)};
      o.vz = tr.x(5);
      if (assoc[k]) o.z_measured = centroids[*assoc[k]].z;
      o.newly_confirmed = promoted;
      out.confirmed.push_back(o);
    }
    kept.push_back(std::move(tr));
  }
  tracks_ = std::move(kept);

  if (have_prev_) {
    std::vector<bool> prev_claimed(leftover_.size(), false);
    auto born = direct_start(leftover_, centroids, cfg_, prev_claimed, claimed, next_id_, t);
    for (auto& tr : born) tracks_.push_back(std::move(tr));
  }

  leftover_.clear();
  for (std::size_t k = 0; k < centroids.size(); ++k) {
    if (!claimed[k]) leftover_.push_back(centroids[k]);
  }
  have_prev_ = true;
  return out;
}

}  // namespace fade
