#pragma once
// Test-only scene builders and brute-force oracles. Oracles here must not
// call into the code paths they check (no bucket index, no range merging,
// no planner internals).

#include <cstdint>
#include <set>
#include <vector>

#include "alphasweep/coverage_planner.hpp"
#include "alphasweep/geometry.hpp"
#include "alphasweep/partition_grid.hpp"
#include "alphasweep/scene.hpp"
#include "alphasweep/transition_graph.hpp"

namespace testsupport {

using namespace alphasweep;

inline constexpr double kDeg = std::numbers::pi / 180.0;
inline constexpr double kCell = 0.30;

GridSpec grid(int nx, int ny, double cell = kCell);

/// Tall, thin wall between two points (axis-aligned), rasterised at `spacing`.
std::vector<Point3> wall(double x0, double y0, double x1, double y1, double height = 1.0, double spacing = 0.03);
std::vector<Point3> pillar(double cx, double cy, double radius, double height = 1.0, double spacing = 0.03);
void append(std::vector<Point3>& into, const std::vector<Point3>& more);

/// Table 1.8 x 1.2 m, top at 0.72 m, on a 12 x 10 grid of 0.3 m cells (3.6 x 3.0 m).
struct UnderTableScene {
  GridSpec spec;
  PointCloud cloud;
  TablePrimitive table;
};
UnderTableScene under_table_scene();

/// Robot whose sensor cylinders are stretched to the full body height.
RobotModel tall_sensor_robot(const RobotModel& robot);

/// 12 x 12 room with a wall-enclosed pocket in the north-east corner.
PointCloud pocket_cloud();
/// 10 x 8 room with a wall hanging down from the north edge (U shape).
PointCloud u_room_cloud();

/// Random clutter (pillars, boxes, a table) inside an nx x ny grid; the
/// south-west 3 x 3 corner is kept clear so a start pose exists.
PointCloud random_scene(std::uint64_t seed, int nx, int ny, int obstacles);

// --- oracles ---------------------------------------------------------------

/// Scan of every point against every cylinder.
bool brute_pose_valid(const Pose2D& base, const RobotModel& robot, std::span<const Point3> points);

/// Points within `reach` (xy) of a centre: a simple independent pre-filter.
std::vector<Point3> points_near(std::span<const Point3> points, Point2 center, double reach);

/// Valid heading samples at `dtheta` for a sensor-over-cell placement.
std::vector<double> dense_valid_headings(Point2 cell_center, const RobotModel& robot, std::span<const Point3> points,
                                         double dtheta);

/// Dense forward sweep of the turn-drive-turn motion at the given steps.
bool dense_transition_ok(const Pose2D& from, const Pose2D& to, const RobotModel& robot,
                         std::span<const Point3> points, double step_lin, double step_ang);

/// Breadth-first reachable cells on the graph (written independently of the library's BFS).
std::set<std::pair<int, int>> bfs_reachable_cells(const NavGraph& graph, const PartitionGrid& grid, std::size_t start);

/// Most coverable cells any walk from `start` can visit. The graph is directed, so a
/// walk that enters a one-way dead end cannot come back; this enumerates every
/// path through the component DAG (written without the library's SCC code).
std::size_t best_walk_cells(const NavGraph& graph, const PartitionGrid& grid, std::size_t start);

std::set<std::pair<int, int>> as_set(const std::vector<CellIndex>& cells);

/// Poisson upper tail P(N > k) for mean mu (summed directly).
double poisson_upper_tail(double mu, std::uint64_t k);

}  // namespace testsupport
