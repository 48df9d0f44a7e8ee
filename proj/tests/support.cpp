#include "support.hpp"

#include <cmath>
#include <deque>
#include <functional>
#include <random>

namespace testsupport {

GridSpec grid(int nx, int ny, double cell) { return GridSpec{{0.0, 0.0}, cell, nx, ny}; }

void append(std::vector<Point3>& into, const std::vector<Point3>& more) {
  into.insert(into.end(), more.begin(), more.end());
}

std::vector<Point3> wall(double x0, double y0, double x1, double y1, double height, double spacing) {
  const double t = 0.04;
  BoxPrimitive b;
  if (std::abs(x1 - x0) >= std::abs(y1 - y0)) {
    b = {{std::min(x0, x1), y0 - t / 2, 0.0}, {std::abs(x1 - x0), t, height}};
  } else {
    b = {{x0 - t / 2, std::min(y0, y1), 0.0}, {t, std::abs(y1 - y0), height}};
  }
  return rasterize_box(b, spacing);
}

std::vector<Point3> pillar(double cx, double cy, double radius, double height, double spacing) {
  return rasterize_pillar({{cx, cy}, radius, height}, spacing);
}

UnderTableScene under_table_scene() {
  UnderTableScene s;
  s.spec = grid(12, 10);
  s.table = {{0.9, 0.9}, {1.8, 1.2}, 0.72, 0.04, 0.05};
  auto pts = rasterize_table(s.table, 0.03);
  std::erase_if(pts, [](const Point3& p) { return p.z < 0.02; });
  s.cloud = PointCloud(std::move(pts));
  return s;
}

RobotModel tall_sensor_robot(const RobotModel& robot) {
  double z_lo = 1e9, z_hi = -1e9;
  for (const auto& c : robot.body_cylinders()) {
    z_lo = std::min(z_lo, c.z_min);
    z_hi = std::max(z_hi, c.z_max);
  }
  std::vector<CollisionCylinder> cyl(robot.cylinders().begin(), robot.cylinders().end());
  for (auto& c : cyl) {
    if (c.tag == CylinderTag::kSensor) {
      c.z_min = std::min(c.z_min, z_lo);
      c.z_max = z_hi;
    }
  }
  return RobotModel(std::move(cyl), robot.sensor_offset(), robot.footprint(), robot.max_linear_speed(),
                    robot.max_angular_speed());
}

PointCloud pocket_cloud() {
  std::vector<Point3> pts;
  append(pts, wall(2.1, 2.1, 2.1, 3.6));
  append(pts, wall(2.1, 2.1, 3.6, 2.1));
  return PointCloud(std::move(pts));
}

PointCloud u_room_cloud() {
  std::vector<Point3> pts;
  append(pts, wall(1.5, 0.9, 1.5, 2.4));
  return PointCloud(std::move(pts));
}

PointCloud random_scene(std::uint64_t seed, int nx, int ny, int obstacles) {
  std::mt19937_64 rng(seed);
  const double w = nx * kCell;
  const double h = ny * kCell;
  std::uniform_real_distribution<double> ux(0.0, w), uy(0.0, h), u01(0.0, 1.0);
  std::vector<Point3> pts;
  int placed = 0;
  while (placed < obstacles) {
    const double x = ux(rng);
    const double y = uy(rng);
    if (x < 1.6 && y < 1.6) continue;  // keep the start corner clear
    const double kind = u01(rng);
    if (kind < 0.45) {
      const double r = 0.05 + 0.15 * u01(rng);
      if (x - r < 0 || y - r < 0 || x + r > w || y + r > h) continue;
      append(pts, pillar(x, y, r, 0.2 + 0.8 * u01(rng)));
    } else if (kind < 0.85) {
      const double sx = 0.1 + 0.4 * u01(rng);
      const double sy = 0.1 + 0.4 * u01(rng);
      if (x + sx > w || y + sy > h) continue;
      append(pts, rasterize_box({{x, y, 0.0}, {sx, sy, 0.1 + 0.9 * u01(rng)}}, 0.03));
    } else {
      const double sx = 0.8 + 0.6 * u01(rng);
      const double sy = 0.6 + 0.4 * u01(rng);
      if (x + sx > w || y + sy > h) continue;
      append(pts, rasterize_table({{x, y}, {sx, sy}, 0.72, 0.04, 0.05}, 0.03));
    }
    ++placed;
  }
  std::erase_if(pts, [](const Point3& p) { return p.z < 0.02; });
  return PointCloud(std::move(pts));
}

// ---------------------------------------------------------------------------

bool brute_pose_valid(const Pose2D& base, const RobotModel& robot, std::span<const Point3> points) {
  for (const auto& p : points)
    for (const auto& c : robot.cylinders())
      if (point_in_cylinder(p, c, base)) return false;
  return true;
}

std::vector<Point3> points_near(std::span<const Point3> points, Point2 center, double reach) {
  std::vector<Point3> out;
  for (const auto& p : points)
    if (std::hypot(p.x - center.x, p.y - center.y) <= reach + 1e-6) out.push_back(p);
  return out;
}

std::vector<double> dense_valid_headings(Point2 cell_center, const RobotModel& robot, std::span<const Point3> points,
                                         double dtheta) {
  const auto local = points_near(points, cell_center, robot.reach_from_sensor());
  const int n = static_cast<int>(std::lround(2.0 * std::numbers::pi / dtheta));
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    const double t = k * dtheta;
    const double c = std::cos(t), s = std::sin(t);
    const Point2 o = robot.sensor_offset();
    const Pose2D base{cell_center.x - (c * o.x - s * o.y), cell_center.y - (s * o.x + c * o.y), t};
    if (brute_pose_valid(base, robot, local)) out.push_back(t);
  }
  return out;
}

bool dense_transition_ok(const Pose2D& from, const Pose2D& to, const RobotModel& robot,
                         std::span<const Point3> points, double step_lin, double step_ang) {
  std::vector<Pose2D> poses;
  auto rotate = [&](double x, double y, double a, double b) {
    double d = std::remainder(b - a, 2.0 * std::numbers::pi);  // [-pi, pi]
    if (d == -std::numbers::pi) d = std::numbers::pi;
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(d) / step_ang)));
    for (int k = 0; k <= n; ++k) poses.push_back(Pose2D::make(x, y, a + d * k / n));
  };
  const double dx = to.x - from.x, dy = to.y - from.y;
  const double dist = std::hypot(dx, dy);
  if (dist <= 1e-12) {
    rotate(from.x, from.y, from.theta, to.theta);
  } else {
    const double h = std::atan2(dy, dx);
    rotate(from.x, from.y, from.theta, h);
    const int m = std::max(1, static_cast<int>(std::ceil(dist / step_lin)));
    for (int k = 0; k <= m; ++k) poses.push_back(Pose2D::make(from.x + dx * k / m, from.y + dy * k / m, h));
    rotate(to.x, to.y, h, to.theta);
  }
  poses.push_back(to);
  // Only points that any pose could touch.
  const double reach = [&] {
    double r = 0.0;
    for (const auto& c : robot.cylinders()) r = std::max(r, std::hypot(c.offset_x, c.offset_y) + c.radius);
    return r;
  }();
  const auto local = points_near(points, {(from.x + to.x) / 2, (from.y + to.y) / 2}, reach + dist / 2);
  for (const auto& p : poses)
    if (!brute_pose_valid(p, robot, local)) return false;
  return true;
}

std::set<std::pair<int, int>> bfs_reachable_cells(const NavGraph& graph, const PartitionGrid& grid, std::size_t start) {
  std::set<std::pair<int, int>> cells;
  std::vector<char> seen(graph.node_count(), 0);
  std::deque<std::size_t> q;
  if (start < graph.node_count()) {
    q.push_back(start);
    seen[start] = 1;
  }
  while (!q.empty()) {
    const auto u = q.front();
    q.pop_front();
    const auto& c = grid.partitions()[u].cell;
    cells.insert({c.x, c.y});
    for (const auto& e : graph.edges()) {
      if (e.from == u && !seen[e.to]) {
        seen[e.to] = 1;
        q.push_back(e.to);
      }
    }
  }
  return cells;
}

std::size_t best_walk_cells(const NavGraph& graph, const PartitionGrid& grid, std::size_t start) {
  const std::size_t n = graph.node_count();
  if (start >= n) return 0;
  // Reachability matrix by repeated BFS; components are mutual-reachability classes.
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> q{s};
    reach[s][s] = 1;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop_front();
      for (const auto& e : graph.edges())
        if (e.from == u && !reach[s][e.to]) {
          reach[s][e.to] = 1;
          q.push_back(e.to);
        }
    }
  }
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] >= 0) continue;
    members.emplace_back();
    for (std::size_t w = 0; w < n; ++w)
      if (reach[v][w] && reach[w][v]) {
        comp[w] = static_cast<int>(members.size() - 1);
        members.back().push_back(w);
      }
  }
  const std::size_t m = members.size();
  std::vector<std::set<int>> succ(m);
  for (const auto& e : graph.edges())
    if (comp[e.from] != comp[e.to]) succ[comp[e.from]].insert(comp[e.to]);
  std::size_t best = 0;
  std::set<std::pair<int, int>> cells;
  std::function<void(int)> walk = [&](int c) {
    std::vector<std::pair<int, int>> added;
    for (auto v : members[c]) {
      const auto& cell = grid.partitions()[v].cell;
      if (grid.coverable(cell) && cells.insert({cell.x, cell.y}).second) added.push_back({cell.x, cell.y});
    }
    best = std::max(best, cells.size());
    for (int d : succ[c]) walk(d);
    for (const auto& a : added) cells.erase(a);
  };
  walk(comp[start]);
  return best;
}

std::set<std::pair<int, int>> as_set(const std::vector<CellIndex>& cells) {
  std::set<std::pair<int, int>> out;
  for (const auto& c : cells) out.insert({c.x, c.y});
  return out;
}

double poisson_upper_tail(double mu, std::uint64_t k) {
  // P(N <= k) by direct summation in log space, then complement.
  double log_term = -mu;  // log P(N = 0)
  double cdf = std::exp(log_term);
  for (std::uint64_t i = 1; i <= k; ++i) {
    log_term += std::log(mu) - std::log(static_cast<double>(i));
    cdf += std::exp(log_term);
  }
  return std::max(0.0, 1.0 - cdf);
}

}  // namespace testsupport
