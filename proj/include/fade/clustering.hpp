#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "fade/frame_io.hpp"

namespace fade {

struct ClusterConfig {
  double cell_size = 0.25;       // m, grid edge in x-y
  std::size_t thre_starter = 5;  // min points in the seed cell
  std::size_t thre_final = 15;   // min points in a kept cluster
  double alpha = 0.0;            // z weight; the grid works in x-y only
  double beta_gap = 0.5;         // m/s, Doppler gap that splits sub-groups

  void validate() const;
};

struct CellIndex {
  std::int64_t i = 0;
  std::int64_t j = 0;

  auto operator<=>(const CellIndex&) const = default;
};

/// Occupied cells only, ordered lexicographically by (i, j).
using GridMap = std::map<CellIndex, std::vector<std::size_t>>;

struct Centroid {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct Cluster {
  std::vector<std::size_t> points;  // indices into the frame, ascending
  std::vector<std::size_t> torso;   // subset of points
  Centroid centroid;
  double mean_doppler = 0.0;        // over torso points
};

CellIndex cell_of(double x, double y, double cell_size);

GridMap build_grid(const PointFrame& frame, const ClusterConfig& cfg);

/// Seed-and-expand clustering over the occupied cells. The grid is consumed.
/// Clusters come out in seed order: most populated seed cell first, ties by
/// lowest cell index.
std::vector<Cluster> grid_cluster(GridMap grid, const ClusterConfig& cfg);

/// Splits the cluster's points into Doppler sub-groups and fills the torso
/// subset and centroid from the fastest group.
Cluster torso_extract(Cluster cluster, const PointFrame& frame, const ClusterConfig& cfg);

/// build_grid + grid_cluster + torso_extract on one frame.
std::vector<Cluster> cluster_frame(const PointFrame& frame, const ClusterConfig& cfg);

}  // namespace fade
