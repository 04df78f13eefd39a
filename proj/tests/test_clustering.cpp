#include <doctest.h>

#include <set>

#include "fade/clustering.hpp"
#include "support.hpp"

using namespace fade;
using fade::test::Rng;

namespace {

PointFrame frame_of(std::initializer_list<RadarPoint> pts) {
  PointFrame f;
  f.points = pts;
  return f;
}

void add_blob(PointFrame& f, Rng& rng, double cx, double cy, std::size_t n, double spread, double doppler = 0.0) {
  for (std::size_t k = 0; k < n; ++k) {
    f.points.push_back({cx + test::uniform(rng, -spread, spread), cy + test::uniform(rng, -spread, spread),
                        1.0 + test::uniform(rng, -0.3, 0.3), doppler + test::normal(rng, 0.05), 10});
  }
}

}  // namespace

TEST_SUITE("clustering") {

TEST_CASE("build_grid floors coordinates") {
  ClusterConfig cfg;
  cfg.cell_size = 0.3;
  auto g = build_grid(frame_of({{0.1, 0.1, 0, 0, 0}, {0.15, 0.12, 0, 0, 0}}), cfg);
  REQUIRE(g.size() == 1);
  CHECK(g.begin()->first == CellIndex{0, 0});
  CHECK(g.begin()->second.size() == 2);

  g = build_grid(frame_of({{0.31, 0.0, 0, 0, 0}}), cfg);
  CHECK(g.begin()->first == CellIndex{1, 0});
  CHECK(cell_of(-0.01, -0.3, 0.3) == CellIndex{-1, -1});
}

TEST_CASE("build_grid partitions every point") {
  Rng rng(1);
  PointFrame f;
  for (int k = 0; k < 100; ++k) f.points.push_back(test::random_point(rng, 3.0));
  const auto g = build_grid(f, {});
  std::size_t total = 0;
  std::set<std::size_t> seen;
  for (const auto& [cell, idx] : g) {
    total += idx.size();
    for (auto i : idx) {
      CHECK(cell_of(f.points[i].x, f.points[i].y, 0.25) == cell);
      seen.insert(i);
    }
  }
  CHECK(total == 100);
  CHECK(seen.size() == 100);
}

TEST_CASE("one dense blob gives one cluster") {
  Rng rng(2);
  PointFrame f;
  add_blob(f, rng, 1.0, 3.0, 40, 0.2);
  ClusterConfig cfg;
  cfg.thre_final = 20;
  const auto oracle = test::components_oracle(f, cfg);
  const auto got = grid_cluster(build_grid(f, cfg), cfg);
  REQUIRE(oracle.size() == 1);
  REQUIRE(got.size() == 1);
  CHECK(got[0].points.size() == 40);
  CHECK(got[0].points == oracle[0]);
}

TEST_CASE("separated blobs give two clusters") {
  Rng rng(3);
  PointFrame f;
  add_blob(f, rng, 0.0, 3.0, 30, 0.15);
  add_blob(f, rng, 1.5, 3.0, 20, 0.15);
  ClusterConfig cfg;
  const auto oracle = test::components_oracle(f, cfg);
  const auto got = grid_cluster(build_grid(f, cfg), cfg);
  REQUIRE(oracle.size() == 2);
  REQUIRE(got.size() == 2);
  CHECK(got[0].points == oracle[0]);
  CHECK(got[1].points == oracle[1]);
}

TEST_CASE("isolated points are outliers") {
  ClusterConfig cfg;
  auto f = frame_of({{0, 0, 1, 0, 1}, {2, 2, 1, 0, 1}, {-2, 4, 1, 0, 1}});
  CHECK(grid_cluster(build_grid(f, cfg), cfg).empty());
}

TEST_CASE("equal seed cells resolve to the lowest index") {
  ClusterConfig cfg;
  cfg.thre_starter = 2;
  cfg.thre_final = 2;
  auto f = frame_of({{2.1, 2.1, 1, 0, 1}, {2.2, 2.2, 1, 0, 1}, {0.1, 0.1, 1, 0, 1}, {0.2, 0.2, 1, 0, 1}});
  const auto got = grid_cluster(build_grid(f, cfg), cfg);
  REQUIRE(got.size() == 2);
  CHECK(got[0].points == std::vector<std::size_t>{2, 3});
  CHECK(got[1].points == std::vector<std::size_t>{0, 1});
}

TEST_CASE("grid_cluster equals the connected-components oracle") {
  Rng rng(4);
  for (int c = 0; c < 1000; ++c) {
    const PointFrame f = test::random_frame(rng, 200);
    ClusterConfig cfg;
    cfg.thre_starter = 1 + test::below(rng, 6);
    cfg.thre_final = cfg.thre_starter + test::below(rng, 20);
    const auto oracle = test::components_oracle(f, cfg);
    const auto got = grid_cluster(build_grid(f, cfg), cfg);
    REQUIRE(got.size() == oracle.size());
    for (std::size_t k = 0; k < got.size(); ++k) REQUIRE(got[k].points == oracle[k]);
  }
}

TEST_CASE("torso_extract with a single Doppler group keeps everything") {
  Rng rng(5);
  PointFrame f;
  for (int k = 0; k < 10; ++k) f.points.push_back({0.1 * k, 3, 1.0 + 0.01 * k, 1.0 + test::uniform(rng, -0.01, 0.01), 5});
  Cluster c;
  for (std::size_t k = 0; k < 10; ++k) c.points.push_back(k);
  const auto t = torso_extract(c, f, {});
  CHECK(t.torso == c.points);
}

TEST_CASE("torso_extract picks the fastest Doppler group") {
  PointFrame f;
  double sx = 0, sy = 0, sz = 0;
  for (int k = 0; k < 8; ++k) {
    RadarPoint p{0.02 * k, 3.0 + 0.01 * k, 1.0 + 0.03 * k, -1.2 + 0.01 * (k % 3), 10};
    sx += p.x;
    sy += p.y;
    sz += p.z;
    f.points.push_back(p);
  }
  for (int k = 0; k < 3; ++k) f.points.push_back({0.3, 3.1, 0.6 + 0.1 * k, 0.4 + 0.01 * k, 5});
  Cluster c;
  for (std::size_t k = 0; k < f.points.size(); ++k) c.points.push_back(k);
  const auto t = torso_extract(c, f, {});
  CHECK(t.torso == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(t.centroid.x == doctest::Approx(sx / 8));
  CHECK(t.centroid.y == doctest::Approx(sy / 8));
  CHECK(t.centroid.z == doctest::Approx(sz / 8));
}

TEST_CASE("torso_extract ties prefer the larger then the lower group") {
  auto f = frame_of({{0, 3, 1.0, -1, 1}, {0, 3, 1.2, 1, 1}, {0, 3, 1.4, 1, 1}});
  Cluster c{{0, 1, 2}, {}, {}, 0};
  CHECK(torso_extract(c, f, {}).torso == std::vector<std::size_t>{1, 2});

  f = frame_of({{0, 3, 1.0, -1, 1}, {0, 3, 0.5, 1, 1}});
  c = Cluster{{0, 1}, {}, {}, 0};
  CHECK(torso_extract(c, f, {}).torso == std::vector<std::size_t>{1});
}

TEST_CASE("torso_extract on a single point") {
  auto f = frame_of({{1, 2, 0.7, 0.3, 1}});
  const auto t = torso_extract(Cluster{{0}, {}, {}, 0}, f, {});
  CHECK(t.torso == std::vector<std::size_t>{0});
  CHECK(t.centroid.z == 0.7);
  CHECK_THROWS_AS(torso_extract(Cluster{}, f, {}), std::invalid_argument);
}

TEST_CASE("cluster_frame invariants on random frames") {
  Rng rng(6);
  for (int c = 0; c < 2000; ++c) {
    const PointFrame f = test::random_frame(rng, 200);
    ClusterConfig cfg;
    cfg.thre_final = 5 + test::below(rng, 15);
    const auto clusters = cluster_frame(f, cfg);
    std::set<std::size_t> used;
    for (const auto& cl : clusters) {
      double lo = 1e9, hi = -1e9;
      for (auto k : cl.points) REQUIRE(used.insert(k).second);
      for (auto k : cl.torso) {
        REQUIRE(std::binary_search(cl.points.begin(), cl.points.end(), k));
        lo = std::min(lo, f.points[k].z);
        hi = std::max(hi, f.points[k].z);
      }
      REQUIRE(!cl.torso.empty());
      REQUIRE(cl.centroid.z >= lo - 1e-12);
      REQUIRE(cl.centroid.z <= hi + 1e-12);
    }
    const auto again = cluster_frame(f, cfg);
    REQUIRE(again.size() == clusters.size());
    for (std::size_t k = 0; k < again.size(); ++k) {
      REQUIRE(again[k].torso == clusters[k].torso);
      REQUIRE(again[k].centroid.x == clusters[k].centroid.x);
    }
  }
}

TEST_CASE("config validation") {
  ClusterConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.thre_final = 2;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.cell_size = 0;
  CHECK_THROWS(cfg.validate());
}

}  // TEST_SUITE
