#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "fade/clustering.hpp"
#include "fade/frame_io.hpp"

namespace fade::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline double normal(Rng& rng, double sigma = 1.0) { return std::normal_distribution<double>(0.0, sigma)(rng); }
inline std::size_t below(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

inline RadarPoint random_point(Rng& rng, double extent) {
  return {uniform(rng, -extent, extent), uniform(rng, -extent, extent), uniform(rng, 0.0, 2.0),
          uniform(rng, -2.0, 2.0), uniform(rng, 0.0, 30.0)};
}

/// Mix of tight blobs and loose scatter so both merged and split components occur.
inline PointFrame random_frame(Rng& rng, std::size_t max_points) {
  PointFrame f;
  const std::size_t n = below(rng, max_points + 1);
  const std::size_t blobs = 1 + below(rng, 4);
  std::vector<std::pair<double, double>> centres;
  for (std::size_t b = 0; b < blobs; ++b) centres.emplace_back(uniform(rng, -3, 3), uniform(rng, -3, 3));
  for (std::size_t k = 0; k < n; ++k) {
    RadarPoint p = random_point(rng, 3.0);
    if (uniform(rng, 0, 1) < 0.7) {
      const auto& c = centres[below(rng, blobs)];
      p.x = c.first + normal(rng, 0.25);
      p.y = c.second + normal(rng, 0.25);
    }
    f.points.push_back(p);
  }
  return f;
}

/// Brute-force 8-connected components over occupied cells with the seed and
/// size thresholds applied afterwards, in the expected output order.
inline std::vector<std::vector<std::size_t>> components_oracle(const PointFrame& frame, const ClusterConfig& cfg) {
  std::vector<std::pair<long long, long long>> cell_of_point;
  for (const auto& p : frame.points) {
    cell_of_point.emplace_back(static_cast<long long>(std::floor(p.x / cfg.cell_size)),
                               static_cast<long long>(std::floor(p.y / cfg.cell_size)));
  }
  std::vector<std::pair<long long, long long>> cells(cell_of_point);
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  std::vector<std::size_t> parent(cells.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      if (std::llabs(cells[a].first - cells[b].first) <= 1 && std::llabs(cells[a].second - cells[b].second) <= 1) {
        parent[find(a)] = find(b);
      }
    }
  }

  auto cell_id = [&](const std::pair<long long, long long>& c) {
    return static_cast<std::size_t>(std::lower_bound(cells.begin(), cells.end(), c) - cells.begin());
  };
  std::vector<std::size_t> count(cells.size(), 0);
  for (const auto& c : cell_of_point) ++count[cell_id(c)];

  struct Comp {
    std::vector<std::size_t> points;
    std::size_t max_count = 0;
    std::size_t max_cell = 0;  // lowest cell reaching max_count
  };
  std::map<std::size_t, Comp> comps;
  for (std::size_t k = 0; k < frame.points.size(); ++k) comps[find(cell_id(cell_of_point[k]))].points.push_back(k);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    Comp& comp = comps[find(c)];
    if (count[c] > comp.max_count) {
      comp.max_count = count[c];
      comp.max_cell = c;
    }
  }

  std::vector<Comp> kept;
  for (auto& [root, comp] : comps) {
    if (comp.max_count >= cfg.thre_starter && comp.points.size() >= cfg.thre_final) kept.push_back(comp);
  }
  std::sort(kept.begin(), kept.end(), [](const Comp& a, const Comp& b) {
    return a.max_count > b.max_count || (a.max_count == b.max_count && a.max_cell < b.max_cell);
  });
  std::vector<std::vector<std::size_t>> out;
  for (const auto& c : kept) out.push_back(c.points);
  return out;
}

/// Regularized lower incomplete gamma for k = 3/2, the chi-square CDF with
/// three degrees of freedom.
inline double chi2_cdf_3(double x) {
  return std::erf(std::sqrt(x / 2.0)) - std::sqrt(2.0 * x / M_PI) * std::exp(-x / 2.0);
}

inline double chi2_quantile_3(double p) {
  double lo = 0.0, hi = 100.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (chi2_cdf_3(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("fade-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

}  // namespace fade::test
