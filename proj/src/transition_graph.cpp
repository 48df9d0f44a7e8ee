#include "alphasweep/transition_graph.hpp"

#include <algorithm>
#include <cmath>

#include "alphasweep/errors.hpp"

namespace alphasweep {

namespace {

constexpr double kSamePosition = 1e-12;

void append_rotation(std::vector<Pose2D>& out, double x, double y, double from, double to, double step_ang) {
  const double delta = angle_difference(from, to);
  const int n = static_cast<int>(std::ceil(std::abs(delta) / step_ang));
  for (int k = 1; k <= n; ++k) out.push_back(Pose2D::make(x, y, from + delta * k / n));
}

}  // namespace

std::vector<Pose2D> transition_poses(const Pose2D& from, const Pose2D& to, double step_lin, double step_ang) {
  if (!(step_lin > 0.0) || !(step_ang > 0.0)) throw ConfigError("transition step sizes must be positive");
  std::vector<Pose2D> poses{from};
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const double dist = std::hypot(dx, dy);
  if (dist <= kSamePosition) {
    append_rotation(poses, from.x, from.y, from.theta, to.theta, step_ang);
  } else {
    const double heading = normalize_angle(std::atan2(dy, dx));
    append_rotation(poses, from.x, from.y, from.theta, heading, step_ang);
    const int m = static_cast<int>(std::ceil(dist / step_lin));
    for (int k = 1; k <= m; ++k) {
      const double f = static_cast<double>(k) / m;
      poses.push_back({from.x + dx * f, from.y + dy * f, heading});
    }
    append_rotation(poses, to.x, to.y, heading, to.theta, step_ang);
  }
  poses.back() = to;
  return poses;
}

bool simulate_transition(const Pose2D& from, const Pose2D& to, const RobotModel& robot, const PointCloud& cloud,
                         double step_lin, double step_ang) {
  // Endpoints first: most failures are an invalid goal.
  if (!pose_valid(to, robot, cloud) || !pose_valid(from, robot, cloud)) return false;
  for (const auto& pose : transition_poses(from, to, step_lin, step_ang)) {
    if (!pose_valid(pose, robot, cloud)) return false;
  }
  return true;
}

double transition_turn(const Pose2D& from, const Pose2D& to) {
  const double dist = std::hypot(to.x - from.x, to.y - from.y);
  if (dist <= kSamePosition) return std::abs(angle_difference(from.theta, to.theta));
  const double heading = std::atan2(to.y - from.y, to.x - from.x);
  return std::abs(angle_difference(from.theta, heading)) + std::abs(angle_difference(heading, to.theta));
}

std::optional<double> hop_heading(CellIndex from, CellIndex to) {
  if (from == to) return std::nullopt;
  return normalize_angle(std::atan2(double(to.y - from.y), double(to.x - from.x)));
}

std::vector<double> candidate_headings(const Partition& p, std::optional<double> hop, double dtheta) {
  std::vector<double> out;
  auto add = [&](double t) {
    t = normalize_angle(t);
    for (double existing : out)
      if (std::abs(angle_difference(existing, t)) < 1e-9) return;
    out.push_back(t);
  };
  const auto& r = p.range;
  if (r.full) {
    const double base = hop.value_or(0.0);
    for (int k = 0; k < 4; ++k) add(base + k * std::numbers::pi / 2.0);
    return out;
  }
  if (hop && r.contains(*hop)) add(*hop);
  add(r.middle_sample(dtheta));
  add(r.phi1);
  add(r.phi2);
  return out;
}

Pose2D node_sensor_pose(const PartitionGrid& grid, std::size_t node, double theta) {
  const auto& p = grid.partitions().at(node);
  const Point2 c = grid.spec().cell_center(p.cell);
  return Pose2D::make(c.x, c.y, theta);
}

std::optional<EdgeAnnotation> feasible_edge(const Partition& a, const Partition& b, const PartitionGrid& grid,
                                            const RobotModel& robot, const PointCloud& cloud,
                                            const TransitionParams& params) {
  const auto hop = hop_heading(a.cell, b.cell);
  const double dtheta = grid.angular_resolution();
  const Point2 ca = grid.spec().cell_center(a.cell);
  const Point2 cb = grid.spec().cell_center(b.cell);
  for (double ta : candidate_headings(a, hop, dtheta)) {
    const Pose2D from = sensor_pose_to_base_pose(ca, ta, robot);
    for (double tb : candidate_headings(b, hop, dtheta)) {
      const Pose2D to = sensor_pose_to_base_pose(cb, tb, robot);
      if (simulate_transition(from, to, robot, cloud, params.step_lin, params.step_ang)) {
        return EdgeAnnotation{ta, tb, std::hypot(to.x - from.x, to.y - from.y), transition_turn(from, to)};
      }
    }
  }
  return std::nullopt;
}

NavGraph::NavGraph(std::size_t node_count, std::vector<NavEdge> edges) : edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end(),
            [](const NavEdge& x, const NavEdge& y) { return x.from != y.from ? x.from < y.from : x.to < y.to; });
  adjacency_start_.assign(node_count + 1, 0);
  for (const auto& e : edges_) {
    if (e.from >= node_count || e.to >= node_count) throw ConfigError("edge references a missing node");
    ++adjacency_start_[e.from + 1];
  }
  for (std::size_t i = 0; i < node_count; ++i) adjacency_start_[i + 1] += adjacency_start_[i];
}

std::span<const NavEdge> NavGraph::out_edges(std::size_t node) const {
  return std::span<const NavEdge>(edges_).subspan(adjacency_start_[node],
                                                  adjacency_start_[node + 1] - adjacency_start_[node]);
}

const NavEdge* NavGraph::find_edge(std::size_t from, std::size_t to) const {
  if (from + 1 >= adjacency_start_.size()) return nullptr;
  auto out = out_edges(from);
  auto it = std::lower_bound(out.begin(), out.end(), to, [](const NavEdge& e, std::size_t t) { return e.to < t; });
  return it != out.end() && it->to == to ? &*it : nullptr;
}

bool cells_adjacent_or_same(CellIndex a, CellIndex b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) <= 1;
}

NavGraph build_nav_graph(const PartitionGrid& grid, const RobotModel& robot, const PointCloud& cloud,
                         const TransitionParams& params) {
  const auto& spec = grid.spec();
  const auto& parts = grid.partitions();
  std::vector<NavEdge> edges;
  // Neighbour cells in row-major order so targets come out sorted.
  constexpr CellIndex kOffsets[] = {{0, -1}, {-1, 0}, {0, 0}, {1, 0}, {0, 1}};
  for (std::size_t from = 0; from < parts.size(); ++from) {
    const Partition& a = parts[from];
    for (CellIndex off : kOffsets) {
      const CellIndex nb{a.cell.x + off.x, a.cell.y + off.y};
      if (!spec.in_bounds(nb)) continue;
      const std::size_t first = grid.first_node(nb);
      const std::size_t count = grid.ranges(nb).size();
      for (std::size_t to = first; to < first + count; ++to) {
        if (to == from) continue;
        if (auto ann = feasible_edge(a, parts[to], grid, robot, cloud, params)) {
          edges.push_back({from, to, *ann, ann->length + params.turn_weight * ann->turn});
        }
      }
    }
  }
  return NavGraph(parts.size(), std::move(edges));
}

}  // namespace alphasweep
