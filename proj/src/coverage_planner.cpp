#include "alphasweep/coverage_planner.hpp"

#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>

#include <fmt/format.h>

#include "alphasweep/errors.hpp"
#include "alphasweep/hash.hpp"

namespace alphasweep {

const char* algorithm_name(Algorithm a) {
  return a == Algorithm::kPathTransform ? "path_transform" : "bsa";
}

void PlannerConfig::validate() const {
  if (!(obstacle_weight >= 0.0)) throw ConfigError("obstacle_weight must be >= 0");
  if (!(contamination_penalty >= 0.0)) throw ConfigError("contamination_penalty must be >= 0");
  if (!(revisit_penalty >= 0.0)) throw ConfigError("revisit_penalty must be >= 0");
  if (!(survey_velocity > 0.0)) throw ConfigError("survey velocity must be positive");
  if (!(coverage_overlap > 0.0 && coverage_overlap <= 1.0)) throw ConfigError("coverage_overlap must be in (0, 1]");
  if (!(motion.step_lin > 0.0) || !(motion.step_ang > 0.0)) throw ConfigError("motion steps must be positive");
  if (!(motion.turn_weight >= 0.0)) throw ConfigError("turn_weight must be >= 0");
}

std::uint64_t PlannerConfig::hash() const {
  const std::string canon =
      fmt::format("{}|{:.17g}|{:.17g}|{:.17g}|{:.17g}|{:.17g}|{:.17g}|{:.17g}|{:.17g}|{:.17g}|{:.17g}|{:.17g}",
                  algorithm_name(algorithm), start.x, start.y, start.theta, obstacle_weight, contamination_penalty,
                  revisit_penalty, survey_velocity, coverage_overlap, motion.step_lin, motion.step_ang,
                  motion.turn_weight);
  return fnv1a(canon);
}

// ---------------------------------------------------------------------------
// Cell overlap geometry

double clipped_area(std::span<const Point2> polygon, Point2 box_min, Point2 box_max) {
  std::vector<Point2> poly(polygon.begin(), polygon.end());
  // Sutherland-Hodgman against the four box edges; `side` > 0 means inside.
  auto clip = [&](auto side, auto intersect) {
    std::vector<Point2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& cur = poly[i];
      const Point2& prev = poly[(i + n - 1) % n];
      const bool cur_in = side(cur) >= 0.0;
      const bool prev_in = side(prev) >= 0.0;
      if (cur_in) {
        if (!prev_in) out.push_back(intersect(prev, cur));
        out.push_back(cur);
      } else if (prev_in) {
        out.push_back(intersect(prev, cur));
      }
    }
    poly = std::move(out);
  };
  auto at_x = [](double x) {
    return [x](Point2 a, Point2 b) { return Point2{x, a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)}; };
  };
  auto at_y = [](double y) {
    return [y](Point2 a, Point2 b) { return Point2{a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y), y}; };
  };
  clip([&](Point2 p) { return p.x - box_min.x; }, at_x(box_min.x));
  if (poly.empty()) return 0.0;
  clip([&](Point2 p) { return box_max.x - p.x; }, at_x(box_max.x));
  if (poly.empty()) return 0.0;
  clip([&](Point2 p) { return p.y - box_min.y; }, at_y(box_min.y));
  if (poly.empty()) return 0.0;
  clip([&](Point2 p) { return box_max.y - p.y; }, at_y(box_max.y));
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) * 0.5;
}

namespace {

struct CellRange {
  int x0, x1, y0, y1;
};

CellRange cells_in_box(const GridSpec& grid, double min_x, double min_y, double max_x, double max_y) {
  auto ix = [&](double x) { return static_cast<int>(std::floor((x - grid.origin.x) / grid.cell_size)); };
  auto iy = [&](double y) { return static_cast<int>(std::floor((y - grid.origin.y) / grid.cell_size)); };
  return {std::max(ix(min_x), 0), std::min(ix(max_x), grid.nx - 1), std::max(iy(min_y), 0),
          std::min(iy(max_y), grid.ny - 1)};
}

}  // namespace

std::vector<CellIndex> footprint_cells(const Pose2D& sensor_pose, const SensorFootprint& fp, const GridSpec& grid,
                                       double min_fraction) {
  const auto poly = footprint_polygon(sensor_pose, fp);
  double min_x = poly[0].x, max_x = poly[0].x, min_y = poly[0].y, max_y = poly[0].y;
  for (const auto& p : poly) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const CellRange r = cells_in_box(grid, min_x, min_y, max_x, max_y);
  const double cell_area = grid.cell_size * grid.cell_size;
  std::vector<CellIndex> out;
  for (int y = r.y0; y <= r.y1; ++y) {
    for (int x = r.x0; x <= r.x1; ++x) {
      const Point2 lo{grid.origin.x + x * grid.cell_size, grid.origin.y + y * grid.cell_size};
      const Point2 hi{lo.x + grid.cell_size, lo.y + grid.cell_size};
      if (clipped_area(poly, lo, hi) >= min_fraction * cell_area) out.push_back({x, y});
    }
  }
  return out;
}

std::vector<CellIndex> body_cells(const Pose2D& base, const RobotModel& robot, const GridSpec& grid) {
  std::vector<char> hit(grid.cell_count(), 0);
  for (const auto& cyl : robot.cylinders()) {
    if (cyl.tag != CylinderTag::kBody) continue;
    const Point2 c = cylinder_axis(cyl, base);
    const CellRange r = cells_in_box(grid, c.x - cyl.radius, c.y - cyl.radius, c.x + cyl.radius, c.y + cyl.radius);
    for (int y = r.y0; y <= r.y1; ++y) {
      for (int x = r.x0; x <= r.x1; ++x) {
        const double lx = grid.origin.x + x * grid.cell_size;
        const double ly = grid.origin.y + y * grid.cell_size;
        const double qx = std::clamp(c.x, lx, lx + grid.cell_size);
        const double qy = std::clamp(c.y, ly, ly + grid.cell_size);
        const double dx = c.x - qx;
        const double dy = c.y - qy;
        if (dx * dx + dy * dy < cyl.radius * cyl.radius) hit[grid.flat({x, y})] = 1;
      }
    }
  }
  std::vector<CellIndex> out;
  for (std::size_t k = 0; k < hit.size(); ++k)
    if (hit[k]) out.push_back(grid.unflat(k));
  return out;
}

std::size_t find_start_node(const PartitionGrid& grid, const Pose2D& start) {
  const auto fail = [&](const char* why) {
    return PlanningError(fmt::format("start pose (x={:.3f} m, y={:.3f} m, theta={:.1f} deg) {}", start.x, start.y,
                                     start.theta * 180.0 / std::numbers::pi, why));
  };
  const auto cell = grid.spec().cell_of({start.x, start.y});
  if (!cell) throw fail("lies outside the grid");
  const auto& ranges = grid.ranges(*cell);
  if (ranges.empty()) throw fail("lies in an uncoverable cell");
  // Snap to the nearest heading sample first; fall back to exact containment.
  const double dtheta = grid.angular_resolution();
  const double snapped = normalize_angle(std::round(start.theta / dtheta) * dtheta);
  for (double t : {snapped, start.theta}) {
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      if (ranges[i].contains(t)) return grid.first_node(*cell) + i;
    }
  }
  throw fail("has a heading outside every valid orientation range of its cell");
}

// ---------------------------------------------------------------------------
// Planning engine shared by both algorithms

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class PlanBuilder {
 public:
  PlanBuilder(const PlanningContext& ctx, const PlannerConfig& cfg)
      : ctx_(ctx),
        cfg_(cfg),
        spec_(ctx.grid.spec()),
        done_(spec_.cell_count(), 0),
        covered_(spec_.cell_count(), 0),
        clean_(spec_.cell_count(), 0),
        component_(strongly_connected_components(ctx.graph)) {
    if (cfg_.contamination_penalty > 0.0) {
      const auto& edges = ctx_.graph.edges();
      edge_body_cells_.reserve(edges.size());
      for (const auto& e : edges) {
        const Pose2D base = base_at(e.to, e.annotation.theta_to);
        edge_body_cells_.push_back(body_cells(base, ctx_.robot, spec_));
      }
    }
  }

  std::size_t current() const { return node_; }
  double heading() const { return heading_; }
  bool cell_done(std::size_t node) const { return done_[spec_.flat(cell_of(node))] != 0; }
  CellIndex cell_of(std::size_t node) const { return ctx_.grid.partitions()[node].cell; }
  /// True when `node` can be reached from the current node and back again.
  bool in_component(std::size_t node) const { return component_[node] == component_[node_]; }

  /// Number of distinct not-done cells reachable from `from`.
  std::size_t open_cells_from(std::size_t from) const {
    std::vector<char> seen(ctx_.graph.node_count(), 0);
    std::vector<char> counted(spec_.cell_count(), 0);
    std::vector<std::size_t> stack{from};
    seen[from] = 1;
    std::size_t n = 0;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      const std::size_t k = spec_.flat(cell_of(u));
      if (!done_[k] && !counted[k]) {
        counted[k] = 1;
        ++n;
      }
      for (const auto& e : ctx_.graph.out_edges(u)) {
        if (!seen[e.to]) {
          seen[e.to] = 1;
          stack.push_back(e.to);
        }
      }
    }
    return n;
  }

  void start(std::size_t node, double theta) {
    node_ = node;
    heading_ = theta;
    push_step(node, theta);
    for (const auto& c : body_cells(plan_.steps.front().base, ctx_.robot, spec_)) clean_[spec_.flat(c)] = 1;
  }

  /// Dynamic traversal cost of an edge given what has been covered so far.
  double edge_cost(std::size_t edge_index) const {
    const NavEdge& e = ctx_.graph.edges()[edge_index];
    double cost = e.cost;
    if (cfg_.revisit_penalty > 0.0 && done_[spec_.flat(cell_of(e.to))]) cost += cfg_.revisit_penalty;
    if (cfg_.contamination_penalty > 0.0) {
      int unsafe = 0;
      for (const auto& c : edge_body_cells_[edge_index]) {
        const std::size_t k = spec_.flat(c);
        unsafe += !covered_[k] && !clean_[k] && ctx_.grid.coverable(c);
      }
      cost += cfg_.contamination_penalty * unsafe;
    }
    return cost;
  }

  std::size_t edge_index(const NavEdge& e) const { return static_cast<std::size_t>(&e - ctx_.graph.edges().data()); }

  /// Dijkstra from the current node. `settle(node, dist)` returns true to stop.
  /// Returns the parent-edge table (SIZE_MAX for none).
  std::vector<std::size_t> dijkstra(const std::function<bool(std::size_t, double)>& settle,
                                    std::vector<double>& dist) const {
    const std::size_t n = ctx_.graph.node_count();
    dist.assign(n, kInf);
    std::vector<std::size_t> parent(n, SIZE_MAX);
    std::vector<char> closed(n, 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist[node_] = 0.0;
    open.push({0.0, node_});
    while (!open.empty()) {
      const auto [d, u] = open.top();
      open.pop();
      if (closed[u]) continue;
      closed[u] = 1;
      if (settle(u, d)) break;
      for (const auto& e : ctx_.graph.out_edges(u)) {
        const double nd = d + edge_cost(edge_index(e));
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          parent[e.to] = edge_index(e);
          open.push({nd, e.to});
        }
      }
    }
    return parent;
  }

  void follow_path_to(std::size_t target, const std::vector<std::size_t>& parent) {
    std::vector<std::size_t> path;
    for (std::size_t v = target; v != node_; v = ctx_.graph.edges()[parent[v]].from) path.push_back(parent[v]);
    for (auto it = path.rbegin(); it != path.rend(); ++it) traverse(ctx_.graph.edges()[*it]);
  }

  void traverse(const NavEdge& e) {
    const auto& ann = e.annotation;
    const Pose2D here = base_at(node_, heading_);
    const bool aligned = std::abs(angle_difference(heading_, ann.theta_from)) < 1e-9;
    if (aligned || simulate(here, base_at(e.to, ann.theta_to))) {
      arrive(e.to, ann.theta_to);
      return;
    }
    // Another candidate heading at the target may be reachable straight from here.
    const auto& parts = ctx_.grid.partitions();
    const double dtheta = ctx_.grid.angular_resolution();
    for (double t : candidate_headings(parts[e.to], hop_heading(cell_of(node_), cell_of(e.to)), dtheta)) {
      if (simulate(here, base_at(e.to, t))) {
        arrive(e.to, t);
        return;
      }
    }
    // Re-orient inside the current partition, then take the edge as stored.
    if (!reorient(ann.theta_from)) ++plan_.reorientation_failures;
    arrive(e.to, ann.theta_to);
  }

  /// Turns to `target` while keeping the sensor over the current cell: directly if that
  /// motion validates, else through the partition's heading samples one step at a time
  /// (every intermediate step is recorded). Returns false if some motion failed.
  bool reorient(double target) {
    const Pose2D here = base_at(node_, heading_);
    if (simulate(here, base_at(node_, target))) {
      arrive(node_, target);
      return true;
    }
    const auto& range = ctx_.grid.partitions()[node_].range;
    const double dtheta = ctx_.grid.angular_resolution();
    const int n = static_cast<int>(std::lround(kTwoPi / dtheta));
    auto sample_of = [&](double t) { return static_cast<int>(std::lround(normalize_angle(t) / dtheta)) % n; };
    const int from = sample_of(heading_);
    const int to = sample_of(target);
    int dir = 1;
    if (range.full) {
      dir = (to - from + n) % n <= n / 2 ? 1 : -1;
    } else {
      // Stay inside the arc: compare positions measured from phi1.
      const int start = sample_of(range.phi1);
      dir = (to - start + n) % n >= (from - start + n) % n ? 1 : -1;
    }
    bool ok = true;
    for (int k = from; k != to;) {
      const int next = (k + dir + n) % n;
      ok = ok && simulate(base_at(node_, k * dtheta), base_at(node_, next * dtheta));
      if (!ok) break;
      k = next;
      if (k != to) arrive(node_, k * dtheta);
    }
    arrive(node_, target);
    return ok;
  }

  void arrive(std::size_t node, double theta) {
    node_ = node;
    heading_ = theta;
    push_step(node_, heading_);
  }

  CoveragePlan finish(int backtracks) {
    plan_.grid = spec_;
    plan_.footprint = ctx_.robot.footprint();
    plan_.coverage_overlap = cfg_.coverage_overlap;
    plan_.algorithm = cfg_.algorithm;
    plan_.config_hash = cfg_.hash();
    plan_.backtracks = backtracks;
    for (std::size_t k = 0; k < covered_.size(); ++k)
      if (covered_[k]) plan_.covered_cells.push_back(spec_.unflat(k));
    for (std::size_t i = 1; i < plan_.steps.size(); ++i) {
      const Pose2D& a = plan_.steps[i - 1].base;
      const Pose2D& b = plan_.steps[i].base;
      plan_.total_length += std::hypot(b.x - a.x, b.y - a.y);
      plan_.total_turn += transition_turn(a, b);
    }
    return std::move(plan_);
  }

  const CoveragePlan& plan() const { return plan_; }
  const PlannerConfig& config() const { return cfg_; }

 private:
  Pose2D base_at(std::size_t node, double theta) const {
    const Pose2D s = node_sensor_pose(ctx_.grid, node, theta);
    return sensor_pose_to_base_pose({s.x, s.y}, s.theta, ctx_.robot);
  }

  bool simulate(const Pose2D& a, const Pose2D& b) const {
    return simulate_transition(a, b, ctx_.robot, ctx_.cloud, cfg_.motion.step_lin, cfg_.motion.step_ang);
  }

  void push_step(std::size_t node, double theta) {
    const Pose2D sensor = node_sensor_pose(ctx_.grid, node, theta);
    const Pose2D base = sensor_pose_to_base_pose({sensor.x, sensor.y}, sensor.theta, ctx_.robot);
    const auto& part = ctx_.grid.partitions()[node];
    plan_.steps.push_back({node, part.cell, part.index, sensor, base, cfg_.survey_velocity});
    done_[spec_.flat(part.cell)] = 1;
    for (const auto& c : footprint_cells(sensor, ctx_.robot.footprint(), spec_, cfg_.coverage_overlap)) {
      if (!ctx_.grid.coverable(c)) continue;
      covered_[spec_.flat(c)] = 1;
      done_[spec_.flat(c)] = 1;
    }
  }

  const PlanningContext& ctx_;
  const PlannerConfig& cfg_;
  GridSpec spec_;
  CoveragePlan plan_;
  std::vector<char> done_;     // visited or footprint-covered
  std::vector<char> covered_;  // footprint-covered, coverable
  std::vector<char> clean_;    // body cells at the first step
  std::vector<std::vector<CellIndex>> edge_body_cells_;
  std::vector<std::size_t> component_;
  std::size_t node_ = 0;
  double heading_ = 0.0;
};

/// Grid distance (cells, 4-connected) to the nearest uncoverable cell or the grid border.
std::vector<int> obstacle_distance(const PartitionGrid& grid) {
  const auto& spec = grid.spec();
  std::vector<int> dist(spec.cell_count(), -1);
  std::deque<CellIndex> queue;
  for (int y = 0; y < spec.ny; ++y) {
    for (int x = 0; x < spec.nx; ++x) {
      const CellIndex c{x, y};
      if (!grid.coverable(c)) {
        dist[spec.flat(c)] = 0;
        queue.push_back(c);
      } else if (x == 0 || y == 0 || x == spec.nx - 1 || y == spec.ny - 1) {
        dist[spec.flat(c)] = 1;
        queue.push_back(c);
      }
    }
  }
  // Seeds with distance 0 precede those with 1 only if listed first; sort to keep BFS layers ordered.
  std::stable_sort(queue.begin(), queue.end(),
                   [&](CellIndex a, CellIndex b) { return dist[spec.flat(a)] < dist[spec.flat(b)]; });
  constexpr CellIndex kDirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!queue.empty()) {
    const CellIndex c = queue.front();
    queue.pop_front();
    for (CellIndex d : kDirs) {
      const CellIndex nb{c.x + d.x, c.y + d.y};
      if (!spec.in_bounds(nb) || dist[spec.flat(nb)] >= 0) continue;
      dist[spec.flat(nb)] = dist[spec.flat(c)] + 1;
      queue.push_back(nb);
    }
  }
  return dist;
}

/// Index of the cardinal direction closest to a heading: 0 E, 1 N, 2 W, 3 S.
int cardinal_of(double theta) {
  return static_cast<int>(std::lround(normalize_angle(theta) / (std::numbers::pi / 2.0))) % 4;
}

constexpr CellIndex kCardinal[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // E N W S

/// Start heading snapped to the heading lattice when the snapped value stays in the start partition.
double start_heading(const PartitionGrid& grid, std::size_t node, double theta) {
  const double dtheta = grid.angular_resolution();
  const double snapped = normalize_angle(std::round(theta / dtheta) * dtheta);
  return grid.partitions()[node].range.contains(snapped) ? snapped : normalize_angle(theta);
}

std::optional<CoveragePlan> trivial_plan(const PlanningContext& ctx, const PlannerConfig& cfg) {
  cfg.validate();
  if (ctx.graph.node_count() != 0) return std::nullopt;
  PlanBuilder builder(ctx, cfg);
  return builder.finish(0);
}

/// Walks to the nearest node of the current component whose cell is not done.
/// Returns false when there is none.
bool backtrack_to_frontier(PlanBuilder& b) {
  std::vector<double> dist;
  std::size_t target = SIZE_MAX;
  const auto parent = b.dijkstra(
      [&](std::size_t u, double) {
        if (b.in_component(u) && !b.cell_done(u)) {
          target = u;
          return true;
        }
        return false;
      },
      dist);
  if (target == SIZE_MAX) return false;
  b.follow_path_to(target, parent);
  return true;
}

/// Leaves the current component once it has nothing left to cover. Edges out of a
/// component are one-way, so the exit is chosen to keep the most open cells
/// reachable; among the nearest few candidate components, ties go to the cheaper path.
bool leave_component(PlanBuilder& b) {
  constexpr std::size_t kCandidates = 24;
  std::vector<double> dist;
  std::vector<std::size_t> candidates;
  const auto parent = b.dijkstra(
      [&](std::size_t u, double) {
        if (!b.cell_done(u)) candidates.push_back(u);
        return candidates.size() >= kCandidates;
      },
      dist);
  if (candidates.empty()) return false;
  std::size_t best = SIZE_MAX;
  std::size_t best_open = 0;
  for (std::size_t u : candidates) {
    const std::size_t open = b.open_cells_from(u);
    if (best == SIZE_MAX || open > best_open) {
      best = u;
      best_open = open;
    }
  }
  b.follow_path_to(best, parent);
  return true;
}

CoveragePlan run_path_transform(const PlanningContext& ctx, const PlannerConfig& cfg) {
  if (auto t = trivial_plan(ctx, cfg)) return std::move(*t);
  const std::size_t start = find_start_node(ctx.grid, cfg.start);
  PlanBuilder b(ctx, cfg);
  b.start(start, start_heading(ctx.grid, start, cfg.start.theta));
  const auto d_obs = obstacle_distance(ctx.grid);
  const auto& spec = ctx.grid.spec();
  const double weight = cfg.obstacle_weight * spec.cell_size;

  std::vector<double> dist;
  while (true) {
    std::size_t best = SIZE_MAX;
    double best_cost = kInf;
    const auto parent = b.dijkstra(
        [&](std::size_t u, double d) {
          if (d > best_cost) return true;  // the proximity term is non-negative
          if (b.cell_done(u) || !b.in_component(u)) return false;
          const double cost = d + weight * d_obs[spec.flat(b.cell_of(u))];
          if (cost < best_cost || (cost == best_cost && u < best)) {
            best_cost = cost;
            best = u;
          }
          return false;
        },
        dist);
    if (best == SIZE_MAX) {
      if (!leave_component(b)) break;
      continue;
    }
    b.follow_path_to(best, parent);
  }
  return b.finish(0);
}

CoveragePlan run_bsa(const PlanningContext& ctx, const PlannerConfig& cfg) {
  if (auto t = trivial_plan(ctx, cfg)) return std::move(*t);
  const std::size_t start = find_start_node(ctx.grid, cfg.start);
  PlanBuilder b(ctx, cfg);
  b.start(start, start_heading(ctx.grid, start, cfg.start.theta));
  int dir = cardinal_of(cfg.start.theta);
  int backtracks = 0;

  while (true) {
    const CellIndex here = b.cell_of(b.current());
    // Rule order: right, forward, left, then absolute N, E, S, W.
    const int order[] = {(dir + 3) % 4, dir, (dir + 1) % 4, 1, 0, 3, 2};
    const NavEdge* chosen = nullptr;
    int chosen_dir = dir;
    double chosen_penalty = kInf;
    for (int d : order) {
      const CellIndex target{here.x + kCardinal[d].x, here.y + kCardinal[d].y};
      for (const auto& e : ctx.graph.out_edges(b.current())) {
        if (b.cell_of(e.to) != target || b.cell_done(e.to) || !b.in_component(e.to)) continue;
        const double penalty = cfg.contamination_penalty > 0.0 ? b.edge_cost(b.edge_index(e)) - e.cost : 0.0;
        if (penalty < chosen_penalty) {
          chosen = &e;
          chosen_dir = d;
          chosen_penalty = penalty;
        }
        break;  // lowest partition id of the target cell
      }
      if (chosen && chosen_penalty == 0.0) break;
    }
    if (chosen) {
      b.traverse(*chosen);
      dir = chosen_dir;
      continue;
    }
    if (!backtrack_to_frontier(b) && !leave_component(b)) break;
    ++backtracks;
    // Travel direction after a backtrack is the last hop's direction.
    const auto& steps = b.plan().steps;
    for (std::size_t i = steps.size(); i-- > 1;) {
      const CellIndex a = steps[i - 1].cell;
      const CellIndex c = steps[i].cell;
      if (a != c) {
        for (int d = 0; d < 4; ++d)
          if (kCardinal[d].x == c.x - a.x && kCardinal[d].y == c.y - a.y) dir = d;
        break;
      }
    }
  }
  return b.finish(backtracks);
}

CoveragePlan with_safety_fallback(const PlanningContext& ctx, const PlannerConfig& cfg,
                                  CoveragePlan (*run)(const PlanningContext&, const PlannerConfig&)) {
  CoveragePlan plan = run(ctx, cfg);
  if (cfg.contamination_penalty > 0.0) {
    // The penalty is a heuristic; never hand back a plan less safe than the unpenalised one.
    PlannerConfig plain = cfg;
    plain.contamination_penalty = 0.0;
    CoveragePlan baseline = run(ctx, plain);
    if (validate_contamination_safety(baseline, ctx.robot, ctx.grid).size() <
        validate_contamination_safety(plan, ctx.robot, ctx.grid).size()) {
      baseline.config_hash = plan.config_hash;
      return baseline;
    }
  }
  return plan;
}

}  // namespace

CoveragePlan path_transform_plan(const PlanningContext& ctx, const PlannerConfig& cfg) {
  PlannerConfig c = cfg;
  c.algorithm = Algorithm::kPathTransform;
  return with_safety_fallback(ctx, c, run_path_transform);
}

CoveragePlan bsa_plan(const PlanningContext& ctx, const PlannerConfig& cfg) {
  PlannerConfig c = cfg;
  c.algorithm = Algorithm::kBacktrackingSpiral;
  return with_safety_fallback(ctx, c, run_bsa);
}

CoveragePlan plan_coverage(const PlanningContext& ctx, const PlannerConfig& cfg) {
  return cfg.algorithm == Algorithm::kPathTransform ? path_transform_plan(ctx, cfg) : bsa_plan(ctx, cfg);
}

// ---------------------------------------------------------------------------

std::vector<ContaminationViolation> validate_contamination_safety(const CoveragePlan& plan, const RobotModel& robot,
                                                                  const PartitionGrid& grid) {
  std::vector<ContaminationViolation> out;
  if (plan.steps.empty()) return out;
  const auto& spec = grid.spec();
  std::vector<char> surveyed(spec.cell_count(), 0);
  std::vector<char> clean(spec.cell_count(), 0);
  for (const auto& c : body_cells(plan.steps.front().base, robot, spec)) clean[spec.flat(c)] = 1;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& step = plan.steps[i];
    for (const auto& c : footprint_cells(step.sensor, plan.footprint, spec, plan.coverage_overlap))
      surveyed[spec.flat(c)] = 1;
    for (const auto& c : body_cells(step.base, robot, spec)) {
      const std::size_t k = spec.flat(c);
      // Uncoverable cells cannot be surveyed by any plan; they are not counted.
      if (!surveyed[k] && !clean[k] && grid.coverable(c)) out.push_back({i, c});
    }
  }
  return out;
}

std::vector<std::size_t> strongly_connected_components(const NavGraph& graph) {
  // Iterative Tarjan.
  const std::size_t n = graph.node_count();
  constexpr std::size_t kUnset = SIZE_MAX;
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // node, next out-edge offset
  std::size_t next_index = 0, next_comp = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto& [v, k] = call.back();
      if (k == 0 && index[v] == kUnset) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      const auto out = graph.out_edges(v);
      if (k < out.size()) {
        const std::size_t w = out[k++].to;
        if (index[w] == kUnset) {
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

std::vector<bool> reachable_nodes(const NavGraph& graph, std::size_t start) {
  std::vector<bool> seen(graph.node_count(), false);
  if (start >= graph.node_count()) return seen;
  std::deque<std::size_t> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& e : graph.out_edges(u)) {
      if (!seen[e.to]) {
        seen[e.to] = true;
        queue.push_back(e.to);
      }
    }
  }
  return seen;
}

CoverageReport coverage_metrics(const CoveragePlan& plan, const PartitionGrid& grid, const NavGraph& graph,
                                const RobotModel& robot, std::size_t start_node) {
  const auto& spec = grid.spec();
  CoverageReport r;
  r.coverable_cells = grid.coverable_count();
  r.uncoverable_cells = grid.uncoverable_cells();

  std::vector<char> covered(spec.cell_count(), 0);
  std::vector<char> visited(spec.cell_count(), 0);
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& s = plan.steps[i];
    if (!visited[spec.flat(s.cell)]) {
      visited[spec.flat(s.cell)] = 1;
      ++distinct;
    }
    for (const auto& c : footprint_cells(s.sensor, plan.footprint, spec, plan.coverage_overlap))
      if (grid.coverable(c)) covered[spec.flat(c)] = 1;
    if (i > 0) {
      const Pose2D& a = plan.steps[i - 1].base;
      r.path_length += std::hypot(s.base.x - a.x, s.base.y - a.y);
    }
  }
  for (char c : covered) r.covered_cells += c;
  r.revisit_count = plan.steps.size() - distinct;
  r.coverage_fraction = r.coverable_cells == 0 ? 1.0 : double(r.covered_cells) / double(r.coverable_cells);

  std::vector<char> reachable_cell(spec.cell_count(), 0);
  if (graph.node_count() > 0 && start_node < graph.node_count()) {
    const auto seen = reachable_nodes(graph, start_node);
    for (std::size_t v = 0; v < seen.size(); ++v)
      if (seen[v]) reachable_cell[spec.flat(grid.partitions()[v].cell)] = 1;
  }
  for (std::size_t k = 0; k < spec.cell_count(); ++k) {
    const CellIndex c = spec.unflat(k);
    if (grid.coverable(c) && !reachable_cell[k]) r.unreachable_cells.push_back(c);
  }
  r.contamination_violations = validate_contamination_safety(plan, robot, grid).size();
  return r;
}

}  // namespace alphasweep
