#include "fade/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fade {

void ClusterConfig::validate() const {
  if (!(cell_size > 0.0)) throw std::invalid_argument("clustering.cell_size must be positive");
  if (thre_starter < 1) throw std::invalid_argument("clustering.thre_starter must be >= 1");
  if (thre_final < thre_starter) throw std::invalid_argument("clustering.thre_final must be >= thre_starter");
  if (beta_gap < 0.0) throw std::invalid_argument("clustering.beta_gap must be non-negative");
}

CellIndex cell_of(double x, double y, double cell_size) {
  return {static_cast<std::int64_t>(std::floor(x / cell_size)),
          static_cast<std::int64_t>(std::floor(y / cell_size))};
}

GridMap build_grid(const PointFrame& frame, const ClusterConfig& cfg) {
  GridMap grid;
  for (std::size_t k = 0; k < frame.points.size(); ++k) {
    const auto& p = frame.points[k];
    grid[cell_of(p.x, p.y, cfg.cell_size)].push_back(k);
  }
  return grid;
}

namespace {

GridMap::iterator most_populated(GridMap& grid) {
  auto best = grid.end();
  for (auto it = grid.begin(); it != grid.end(); ++it) {
    // strict > keeps the lowest index among equal counts
    if (best == grid.end() || it->second.size() > best->second.size()) best = it;
  }
  return best;
}

}  // namespace

std::vector<Cluster> grid_cluster(GridMap grid, const ClusterConfig& cfg) {
  std::vector<Cluster> clusters;
  for (auto seed = most_populated(grid);
       seed != grid.end() && seed->second.size() >= cfg.thre_starter;
       seed = most_populated(grid)) {
    Cluster cluster;
    std::vector<CellIndex> frontier{seed->first};
    cluster.points = std::move(seed->second);
    grid.erase(seed);

    while (!frontier.empty()) {
      const CellIndex c = frontier.back();
      frontier.pop_back();
      for (std::int64_t di = -1; di <= 1; ++di) {
        for (std::int64_t dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          auto it = grid.find({c.i + di, c.j + dj});
          if (it == grid.end()) continue;
          cluster.points.insert(cluster.points.end(), it->second.begin(), it->second.end());
          frontier.push_back(it->first);
          grid.erase(it);
        }
      }
    }

    if (cluster.points.size() >= cfg.thre_final) {
      std::sort(cluster.points.begin(), cluster.points.end());
      clusters.push_back(std::move(cluster));
    }
  }
  return clusters;
}

Cluster torso_extract(Cluster cluster, const PointFrame& frame, const ClusterConfig& cfg) {
  if (cluster.points.empty()) throw std::invalid_argument("torso_extract: empty cluster");

  std::vector<std::size_t> order = cluster.points;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = frame.points[a].doppler;
    const double db = frame.points[b].doppler;
    return da < db || (da == db && a < b);
  });

  struct Group {
    std::size_t begin, end;
    double mean_speed, mean_z;
  };
  std::vector<Group> groups;
  std::size_t start = 0;
  auto close_group = [&](std::size_t end) {
    double speed = 0.0, z = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      speed += std::abs(frame.points[order[k]].doppler);
      z += frame.points[order[k]].z;
    }
    const double n = static_cast<double>(end - start);
    groups.push_back({start, end, speed / n, z / n});
    start = end;
  };
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (frame.points[order[k]].doppler - frame.points[order[k - 1]].doppler > cfg.beta_gap) close_group(k);
  }
  close_group(order.size());

  const Group* best = &groups.front();
  for (const auto& g : groups) {
    const std::size_t size = g.end - g.begin;
    const std::size_t best_size = best->end - best->begin;
    if (g.mean_speed > best->mean_speed ||
        (g.mean_speed == best->mean_speed &&
         (size > best_size || (size == best_size && g.mean_z < best->mean_z)))) {
      best = &g;
    }
  }

  cluster.torso.assign(order.begin() + static_cast<std::ptrdiff_t>(best->begin),
                       order.begin() + static_cast<std::ptrdiff_t>(best->end));
  std::sort(cluster.torso.begin(), cluster.torso.end());

  Centroid c;
  double doppler = 0.0;
  for (std::size_t k : cluster.torso) {
    const auto& p = frame.points[k];
    c.x += p.x;
    c.y += p.y;
    c.z += p.z;
    doppler += p.doppler;
  }
  const double n = static_cast<double>(cluster.torso.size());
  cluster.centroid = {c.x / n, c.y / n, c.z / n};
  cluster.mean_doppler = doppler / n;
  return cluster;
}

std::vector<Cluster> cluster_frame(const PointFrame& frame, const ClusterConfig& cfg) {
  auto clusters = grid_cluster(build_grid(frame, cfg), cfg);
  for (auto& c : clusters) c = torso_extract(std::move(c), frame, cfg);
  return clusters;
}

}  // namespace fade
