#pragma once
/**
 * @file    transition_graph.hpp
 * @brief   Navigation graph over partitions with kinematically checked edges.
 *
 * A transition is simulated as rotate-in-place to face the goal position,
 * straight-line translation, then rotate-in-place to the goal heading. Both
 * rotations take the shorter direction (counter-clockwise on an exact half
 * turn). Edges are directed and exist only between partitions of 4-adjacent
 * cells or between distinct partitions of one cell.
 *
 * Candidate headings tried for a partition, in order:
 *   - full-circle range: the hop heading, then +90, +180, +270 degrees from it
 *     (same-cell transitions never involve a full-circle range);
 *   - otherwise: the hop heading when the range contains it, the middle
 *     sample, phi1, phi2 (duplicates dropped).
 * The hop heading is the direction from the source cell center to the
 * target cell center. Pairs are tried source-major; the first pair whose
 * transition simulates cleanly becomes the edge.
 */

#include <cstddef>
#include <optional>
#include <vector>

#include "alphasweep/geometry.hpp"
#include "alphasweep/partition_grid.hpp"

namespace alphasweep {

struct TransitionParams {
  double step_lin = 0.075;                          // m
  double step_ang = 5.0 * std::numbers::pi / 180.0;  // rad
  double turn_weight = 0.1;                          // m per rad, edge cost = length + weight * turn

  static TransitionParams for_cell(double cell_size) { return {cell_size / 4.0, 5.0 * std::numbers::pi / 180.0, 0.1}; }
};

/// Poses visited by the turn-drive-turn motion, endpoints included.
std::vector<Pose2D> transition_poses(const Pose2D& from, const Pose2D& to, double step_lin, double step_ang);

bool simulate_transition(const Pose2D& from, const Pose2D& to, const RobotModel& robot, const PointCloud& cloud,
                         double step_lin, double step_ang);

/// Total in-place rotation (rad) of the turn-drive-turn motion.
double transition_turn(const Pose2D& from, const Pose2D& to);

struct EdgeAnnotation {
  double theta_from = 0.0;  // sensor heading at the source partition
  double theta_to = 0.0;    // sensor heading at the target partition
  double length = 0.0;      // base-link translation, m
  double turn = 0.0;        // total rotation, rad
};

struct NavEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  EdgeAnnotation annotation;
  double cost = 0.0;
};

/// Heading from the center of cell `from` to the center of cell `to`; empty when they coincide.
std::optional<double> hop_heading(CellIndex from, CellIndex to);

/// Candidate sensor headings of partition `p` for a hop with the given heading.
std::vector<double> candidate_headings(const Partition& p, std::optional<double> hop, double dtheta);

std::optional<EdgeAnnotation> feasible_edge(const Partition& a, const Partition& b, const PartitionGrid& grid,
                                            const RobotModel& robot, const PointCloud& cloud,
                                            const TransitionParams& params);

class NavGraph {
 public:
  NavGraph() = default;
  NavGraph(std::size_t node_count, std::vector<NavEdge> edges);

  std::size_t node_count() const { return adjacency_start_.empty() ? 0 : adjacency_start_.size() - 1; }
  /// Edges sorted by (from, to).
  const std::vector<NavEdge>& edges() const { return edges_; }
  /// Out-edges of a node, sorted by target id.
  std::span<const NavEdge> out_edges(std::size_t node) const;
  const NavEdge* find_edge(std::size_t from, std::size_t to) const;

 private:
  std::vector<NavEdge> edges_;
  std::vector<std::size_t> adjacency_start_;
};

bool cells_adjacent_or_same(CellIndex a, CellIndex b);

NavGraph build_nav_graph(const PartitionGrid& grid, const RobotModel& robot, const PointCloud& cloud,
                         const TransitionParams& params);

/// Sensor and base pose of a node at a given sensor heading.
Pose2D node_sensor_pose(const PartitionGrid& grid, std::size_t node, double theta);

}  // namespace alphasweep
