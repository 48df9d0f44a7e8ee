#pragma once
/**
 * @file    coverage_planner.hpp
 * @brief   Sensor-aligned coverage planning over the partition navigation graph.
 *
 * Both planners treat graph nodes (partitions) the way the textbook versions
 * treat free grid cells:
 *
 * Path Transform: repeatedly pick the not-yet-covered node minimising
 *   graph distance from the current node + obstacle_weight * cell_size * d_obs,
 * where d_obs is the 4-connected grid distance (in cells) from the node's
 * cell to the nearest uncoverable cell or grid border. The robot follows the
 * shortest graph path to it, covering cells on the way.
 *
 * Backtracking Spiral: from the current node try the uncovered neighbour cell
 * to the right of the travel direction, then straight ahead, then left, then
 * absolute N, E, S, W. At a dead end, return along the shortest graph path to
 * the nearest node whose cell is still uncovered.
 *
 * Ties are broken by the lowest (cell_y, cell_x, partition) i.e. the lowest
 * node id. A cell is covered when the detector footprint overlaps at least
 * `coverage_overlap` of its area; only coverable cells are counted.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "alphasweep/geometry.hpp"
#include "alphasweep/partition_grid.hpp"
#include "alphasweep/transition_graph.hpp"

namespace alphasweep {

enum class Algorithm { kPathTransform, kBacktrackingSpiral };

const char* algorithm_name(Algorithm a);

struct PlannerConfig {
  Algorithm algorithm = Algorithm::kBacktrackingSpiral;
  Pose2D start;                        // sensor pose
  double obstacle_weight = 0.5;        // Path Transform proximity weight
  double contamination_penalty = 0.0;  // cost per body-over-unsurveyed cell (0 disables)
  double revisit_penalty = 0.0;        // cost per entry into an already covered cell
  double survey_velocity = 0.05;       // commanded m/s on every step
  double coverage_overlap = 0.6;       // area fraction for a cell to count as covered
  TransitionParams motion;

  void validate() const;
  /// Stable FNV-1a hash of every field.
  std::uint64_t hash() const;
};

struct PlanStep {
  std::size_t node = 0;
  CellIndex cell;
  int partition = 0;
  Pose2D sensor;
  Pose2D base;
  double velocity = 0.0;
};

struct CoveragePlan {
  std::vector<PlanStep> steps;
  std::vector<CellIndex> covered_cells;  // row-major order
  GridSpec grid;
  SensorFootprint footprint;
  double coverage_overlap = 0.6;
  Algorithm algorithm = Algorithm::kBacktrackingSpiral;
  std::uint64_t config_hash = 0;
  double total_length = 0.0;  // base-link translation, m
  double total_turn = 0.0;    // rad
  int backtracks = 0;
  int reorientation_failures = 0;  // in-cell heading changes that failed simulation
};

struct CoverageReport {
  std::size_t coverable_cells = 0;
  std::size_t covered_cells = 0;
  double coverage_fraction = 0.0;
  std::vector<CellIndex> uncoverable_cells;
  std::vector<CellIndex> unreachable_cells;
  std::size_t revisit_count = 0;
  double path_length = 0.0;
  std::size_t contamination_violations = 0;
};

struct ContaminationViolation {
  std::size_t step = 0;
  CellIndex cell;
};

/// Inputs shared by the planners; all referenced objects must outlive the context.
struct PlanningContext {
  const NavGraph& graph;
  const PartitionGrid& grid;
  const RobotModel& robot;
  const PointCloud& cloud;
};

/// Area of the intersection of a convex polygon with an axis-aligned box.
double clipped_area(std::span<const Point2> polygon, Point2 box_min, Point2 box_max);

/// In-grid cells whose area the footprint overlaps by at least `min_fraction`.
std::vector<CellIndex> footprint_cells(const Pose2D& sensor_pose, const SensorFootprint& fp, const GridSpec& grid,
                                       double min_fraction);

/// In-grid cells whose square intersects the disk of some BODY cylinder at `base`.
std::vector<CellIndex> body_cells(const Pose2D& base, const RobotModel& robot, const GridSpec& grid);

/// Node whose cell contains the start position and whose range contains the start heading.
/// Throws PlanningError naming the pose otherwise.
std::size_t find_start_node(const PartitionGrid& grid, const Pose2D& start);

CoveragePlan path_transform_plan(const PlanningContext& ctx, const PlannerConfig& cfg);
CoveragePlan bsa_plan(const PlanningContext& ctx, const PlannerConfig& cfg);
/// Dispatches on cfg.algorithm.
CoveragePlan plan_coverage(const PlanningContext& ctx, const PlannerConfig& cfg);

std::vector<ContaminationViolation> validate_contamination_safety(const CoveragePlan& plan, const RobotModel& robot,
                                                                  const PartitionGrid& grid);

/// Nodes reachable from `start` along directed edges.
std::vector<bool> reachable_nodes(const NavGraph& graph, std::size_t start);

/// Strongly connected component id per node. Ids are dense, starting at 0.
std::vector<std::size_t> strongly_connected_components(const NavGraph& graph);

CoverageReport coverage_metrics(const CoveragePlan& plan, const PartitionGrid& grid, const NavGraph& graph,
                                const RobotModel& robot, std::size_t start_node);

}  // namespace alphasweep
