#include <doctest.h>

#include "alphasweep/errors.hpp"
#include "support.hpp"

using namespace testsupport;

namespace {

// Every valid sample in the oracle lies in some range; every sampled range heading re-validates.
void check_against_oracle(const std::vector<OrientationRange>& ranges, Point2 center, const RobotModel& robot,
                          const PointCloud& cloud, double dtheta) {
  for (double t : dense_valid_headings(center, robot, cloud.points(), dtheta / 16)) {
    bool inside = false;
    for (const auto& r : ranges) {
      const OrientationRange wide{normalize_angle(r.phi1 - dtheta), normalize_angle(r.phi2 + dtheta), 0, r.full};
      inside = inside || wide.contains(t);
    }
    CHECK_MESSAGE(inside, "oracle heading " << t / kDeg << " deg not in any range");
  }
  for (const auto& r : ranges) {
    for (double t : r.sample_headings(dtheta)) {
      CHECK(brute_pose_valid(sensor_pose_to_base_pose(center, t, robot), robot, cloud.points()));
    }
  }
}

}  // namespace

TEST_CASE("heading sample count validation") {
  CHECK(heading_sample_count(5 * kDeg) == 72);
  CHECK(heading_sample_count(std::numbers::pi / 8) == 16);
  CHECK_THROWS_AS(heading_sample_count(0.0), ConfigError);
  CHECK_THROWS_AS(heading_sample_count(-0.1), ConfigError);
  CHECK_THROWS_AS(heading_sample_count(7 * kDeg), ConfigError);
  CHECK_THROWS_AS(heading_sample_count(30 * kDeg), ConfigError);
}

TEST_CASE("orientation range helpers") {
  const double d = 10 * kDeg;
  const OrientationRange wrap{normalize_angle(-20 * kDeg), 30 * kDeg, 6, false};
  CHECK(wrap.wraps());
  CHECK(wrap.width() == doctest::Approx(50 * kDeg));
  CHECK(wrap.contains(0.0));
  CHECK(wrap.contains(355 * kDeg));
  CHECK_FALSE(wrap.contains(180 * kDeg));
  const auto s = wrap.sample_headings(d);
  REQUIRE(s.size() == 6);
  CHECK(s.front() == doctest::Approx(340 * kDeg));
  CHECK(s.back() == doctest::Approx(30 * kDeg));
  CHECK(wrap.middle_sample(d) == doctest::Approx(0.0));

  const OrientationRange single{40 * kDeg, 40 * kDeg, 1, false};
  CHECK(single.width() == 0.0);
  CHECK(single.contains(40 * kDeg));
  CHECK(single.sample_headings(d).size() == 1);

  const OrientationRange full{0.0, 350 * kDeg, 36, true};
  CHECK(full.width() == doctest::Approx(kTwoPi));
  CHECK(full.contains(355 * kDeg));
  CHECK(full.sample_headings(d).size() == 36);
}

TEST_CASE("compute_cell_ranges trivial clouds") {
  const auto robot = RobotModel::magni_default();
  const auto r = compute_cell_ranges({1, 1}, robot, PointCloud{}, 5 * kDeg);
  REQUIRE(r.size() == 1);
  CHECK(r[0].full);
  CHECK(r[0].samples == 72);
  CHECK(r[0].phi1 == 0.0);

  // A dense ring of points around the cell makes every heading collide.
  std::vector<Point3> ring;
  for (int k = 0; k < 720; ++k) {
    for (double z : {0.1, 0.5}) ring.push_back({1 + 0.3 * std::cos(k * 0.5 * kDeg), 1 + 0.3 * std::sin(k * 0.5 * kDeg), z});
  }
  CHECK(compute_cell_ranges({1, 1}, robot, PointCloud(ring), 5 * kDeg).empty());
}

TEST_CASE("compute_cell_ranges with a wall east of the cell") {
  const auto robot = RobotModel::magni_default();
  const PointCloud cloud(wall(1.4, 0.0, 1.4, 2.4));
  const Point2 center{1.05, 1.2};
  const double d = 5 * kDeg;
  const auto ranges = compute_cell_ranges(center, robot, cloud, d);
  CHECK(!ranges.empty());
  CHECK(ranges.size() <= 2);
  for (const auto& r : ranges) {
    CHECK_FALSE(r.full);
    CHECK_FALSE(r.contains(180 * kDeg));  // base east of the sensor would hit the wall
  }
  check_against_oracle(ranges, center, robot, cloud, d);
}

TEST_CASE("ranges are disjoint, sorted and bounded in count") {
  const auto robot = RobotModel::magni_default();
  const auto cloud = random_scene(21, 10, 10, 10);
  const double d = 5 * kDeg;
  const auto g = build_partition_grid(grid(10, 10), robot, cloud, d);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) {
      const auto& rs = g.ranges({x, y});
      CHECK(rs.size() <= static_cast<std::size_t>(std::numbers::pi / d));
      for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i - 1].phi1 < rs[i].phi1);
      for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = 0; j < rs.size(); ++j)
          if (i != j)
            for (double t : rs[i].sample_headings(d)) CHECK_FALSE(rs[j].contains(t));
    }
  }
}

TEST_CASE("build_partition_grid examples") {
  const auto robot = RobotModel::magni_default();
  const auto empty = build_partition_grid(grid(3, 3), robot, PointCloud{}, 5 * kDeg);
  CHECK(empty.partitions().size() == 9);
  CHECK(empty.coverable_count() == 9);
  for (const auto& p : empty.partitions()) CHECK(p.range.full);

  // Pillar over the centre of cell (2, 2) of a 5x5 grid.
  const PointCloud cloud(pillar(0.75, 0.75, 0.1));
  const auto g = build_partition_grid(grid(5, 5), robot, cloud, 5 * kDeg);
  CHECK_FALSE(g.coverable({2, 2}));
  CHECK(g.coverable({0, 0}));
  for (const auto& c : g.uncoverable_cells()) CHECK(dense_valid_headings(g.spec().cell_center(c), robot, cloud.points(), 5 * kDeg).empty());
  CHECK(g.uncoverable_cells().size() + g.coverable_count() == 25);
}

TEST_CASE("node ids are row-major and contiguous per cell") {
  const auto robot = RobotModel::magni_default();
  const auto cloud = random_scene(4, 8, 6, 6);
  const auto g = build_partition_grid(grid(8, 6), robot, cloud, 5 * kDeg);
  for (std::size_t i = 1; i < g.partitions().size(); ++i) {
    const auto& a = g.partitions()[i - 1];
    const auto& b = g.partitions()[i];
    CHECK((a.cell < b.cell || (a.cell == b.cell && a.index + 1 == b.index)));
  }
  for (std::size_t i = 0; i < g.partitions().size(); ++i) {
    const auto& p = g.partitions()[i];
    CHECK(g.first_node(p.cell) + static_cast<std::size_t>(p.index) == i);
  }
}

TEST_CASE("under-table cells are coverable only with sensor-first headings") {
  const auto s = under_table_scene();
  const auto robot = RobotModel::magni_default();
  const double d = 5 * kDeg;
  const auto g = build_partition_grid(s.spec, robot, s.cloud, d);
  int under = 0;
  for (int y = 0; y < s.spec.ny; ++y) {
    for (int x = 0; x < s.spec.nx; ++x) {
      const Point2 c = s.spec.cell_center({x, y});
      const bool below = c.x > 0.9 && c.x < 2.7 && c.y > 0.9 && c.y < 2.1;
      if (!below) continue;
      const auto& rs = g.ranges({x, y});
      check_against_oracle(rs, c, robot, s.cloud, d);
      if (rs.empty()) continue;
      ++under;
      // The base must stay outside the table outline for every stored heading.
      for (const auto& r : rs) {
        CHECK_FALSE(r.full);
        for (double t : r.sample_headings(d)) {
          const auto b = sensor_pose_to_base_pose(c, t, robot);
          CHECK_FALSE((b.x > 0.9 && b.x < 2.7 && b.y > 0.9 && b.y < 2.1));
        }
      }
    }
  }
  CHECK(under >= 4);
}

TEST_CASE("adding points never widens ranges") {
  const auto robot = RobotModel::magni_default();
  const double d = 5 * kDeg;
  const auto base_cloud = random_scene(8, 8, 8, 4);
  const auto more = base_cloud.merged(random_scene(9, 8, 8, 4));
  const auto g0 = build_partition_grid(grid(8, 8), robot, base_cloud, d);
  const auto g1 = build_partition_grid(grid(8, 8), robot, more, d);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      for (const auto& r1 : g1.ranges({x, y})) {
        bool inside = false;
        for (const auto& r0 : g0.ranges({x, y})) {
          bool all = true;
          for (double t : r1.sample_headings(d)) all = all && r0.contains(t);
          inside = inside || all;
        }
        CHECK(inside);
      }
}

TEST_CASE("refining the resolution keeps every coarse valid sample") {
  const auto robot = RobotModel::magni_default();
  const auto cloud = random_scene(13, 6, 6, 5);
  const double d = 10 * kDeg;
  const auto coarse = build_partition_grid(grid(6, 6), robot, cloud, d);
  const auto fine = build_partition_grid(grid(6, 6), robot, cloud, d / 2);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x)
      for (const auto& rc : coarse.ranges({x, y}))
        for (double t : rc.sample_headings(d)) {
          bool found = false;
          for (const auto& rf : fine.ranges({x, y})) found = found || rf.contains(t);
          CHECK(found);
        }
}

TEST_CASE("grid spec validation") {
  CHECK_THROWS_AS(GridSpec({0, 0}, 0.0, 3, 3).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec({0, 0}, 0.3, 0, 3).validate(), ConfigError);
  const GridSpec g{{1.0, -1.0}, 0.5, 4, 2};
  CHECK(g.cell_of({1.1, -0.9}) == CellIndex{0, 0});
  CHECK(g.cell_of({2.99, -0.01}) == CellIndex{3, 1});
  CHECK_FALSE(g.cell_of({0.9, 0.0}));
  CHECK(g.unflat(g.flat({3, 1})) == CellIndex{3, 1});
}
