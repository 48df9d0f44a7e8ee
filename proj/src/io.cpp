#include "alphasweep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "alphasweep/errors.hpp"

namespace alphasweep {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

bool is_comment_or_blank(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

std::string line_error(const std::string& source, int line, const std::string& what) {
  return fmt::format("{}:{}: {}", source, line, what);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view token) {
  double v = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------------------

std::vector<Point3> parse_pointcloud(std::istream& in, const std::string& source, double z_floor) {
  std::vector<Point3> pts;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (is_comment_or_blank(line)) continue;
    const auto tok = split_ws(line);
    if (tok.size() != 3) throw ConfigError(line_error(source, n, "expected 3 coordinates 'x y z'"));
    Point3 p;
    double* dst[] = {&p.x, &p.y, &p.z};
    for (int k = 0; k < 3; ++k) {
      auto v = parse_number(tok[static_cast<std::size_t>(k)]);
      if (!v) throw ConfigError(line_error(source, n, fmt::format("bad number '{}'", tok[static_cast<std::size_t>(k)])));
      *dst[k] = *v;
    }
    if (p.z >= z_floor) pts.push_back(p);
  }
  return pts;
}

PointCloud load_pointcloud(const std::filesystem::path& path, double z_floor) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open point cloud '{}'", path.string()));
  return PointCloud(parse_pointcloud(in, path.string(), z_floor));
}

void write_pointcloud(std::ostream& out, std::span<const Point3> points, const std::string& header) {
  std::istringstream hs(header);
  for (std::string line; std::getline(hs, line);) out << "# " << line << '\n';
  for (const auto& p : points) {
    out << format_number(p.x) << ' ' << format_number(p.y) << ' ' << format_number(p.z) << '\n';
  }
}

// ---------------------------------------------------------------------------

RobotModel parse_robot_model(std::istream& in, const std::string& source) {
  std::vector<CollisionCylinder> cylinders;
  std::optional<Point2> offset;
  std::optional<SensorFootprint> footprint;
  double max_lin = 0.5;
  double max_ang = 1.0;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (is_comment_or_blank(line)) continue;
    const auto tok = split_ws(line);
    auto nums = [&](std::size_t expected) {
      if (tok.size() != expected + 1) {
        throw ConfigError(line_error(source, n, fmt::format("'{}' takes {} numbers", tok[0], expected)));
      }
      std::vector<double> v;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        auto x = parse_number(tok[k]);
        if (!x) throw ConfigError(line_error(source, n, fmt::format("bad number '{}'", tok[k])));
        v.push_back(*x);
      }
      return v;
    };
    const std::string& key = tok[0];
    if (key == "body" || key == "sensor") {
      const auto v = nums(5);
      CollisionCylinder c{v[0], v[1], v[2], v[3], v[4], key == "body" ? CylinderTag::kBody : CylinderTag::kSensor};
      if (!(c.radius > 0.0) || !(c.z_min < c.z_max)) {
        throw ConfigError(line_error(source, n, "cylinder needs radius > 0 and z_min < z_max"));
      }
      cylinders.push_back(c);
    } else if (key == "sensor_offset") {
      const auto v = nums(2);
      offset = Point2{v[0], v[1]};
    } else if (key == "footprint") {
      const auto v = nums(2);
      footprint = SensorFootprint{v[0], v[1]};
    } else if (key == "max_linear_speed") {
      max_lin = nums(1)[0];
    } else if (key == "max_angular_speed_deg") {
      max_ang = nums(1)[0] * kDeg;
    } else {
      throw ConfigError(line_error(source, n, fmt::format("unknown directive '{}'", key)));
    }
  }
  if (!offset) throw ConfigError(source + ": missing 'sensor_offset'");
  if (!footprint) throw ConfigError(source + ": missing 'footprint'");
  try {
    return RobotModel(std::move(cylinders), *offset, *footprint, max_lin, max_ang);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

RobotModel load_robot_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open robot model '{}'", path.string()));
  return parse_robot_model(in, path.string());
}

void write_robot_model(std::ostream& out, const RobotModel& robot) {
  out << "# tag offset_x offset_y radius z_min z_max (metres, base frame; z world)\n";
  for (const auto& c : robot.cylinders()) {
    out << (c.tag == CylinderTag::kBody ? "body" : "sensor") << ' ' << format_number(c.offset_x) << ' '
        << format_number(c.offset_y) << ' ' << format_number(c.radius) << ' ' << format_number(c.z_min) << ' '
        << format_number(c.z_max) << '\n';
  }
  out << "sensor_offset " << format_number(robot.sensor_offset().x) << ' ' << format_number(robot.sensor_offset().y)
      << '\n';
  out << "footprint " << format_number(robot.footprint().length_along_travel) << ' '
      << format_number(robot.footprint().width) << '\n';
  out << "max_linear_speed " << format_number(robot.max_linear_speed()) << '\n';
  out << "max_angular_speed_deg " << format_number(robot.max_angular_speed() / kDeg) << '\n';
}

// ---------------------------------------------------------------------------

namespace {

namespace pt = boost::property_tree;

class IniReader {
 public:
  IniReader(const pt::ptree& tree, std::string source) : tree_(tree), source_(std::move(source)) {}

  std::optional<std::string> text(const std::string& section, const std::string& key) {
    used_.insert(section + "." + key);
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return *v;
  }

  std::optional<double> number(const std::string& section, const std::string& key) {
    const auto t = text(section, key);
    if (!t) return std::nullopt;
    auto v = parse_number(trim(*t));
    if (!v) throw error(section, key, fmt::format("'{}' is not a number", *t));
    return v;
  }

  double number_or(const std::string& section, const std::string& key, double fallback) {
    return number(section, key).value_or(fallback);
  }

  double required(const std::string& section, const std::string& key) {
    auto v = number(section, key);
    if (!v) throw error(section, key, "is required");
    return *v;
  }

  int integer(const std::string& section, const std::string& key) {
    const double v = required(section, key);
    if (v != std::floor(v) || v < 1 || v > 1e6) throw error(section, key, "must be a positive integer");
    return static_cast<int>(v);
  }

  ConfigError error(const std::string& section, const std::string& key, const std::string& what) const {
    return ConfigError(fmt::format("{}: [{}] {} {}", source_, section, key, what));
  }

  /// Rejects keys nobody asked for, so typos do not silently fall back to defaults.
  void check_unused(const std::set<std::string>& prefixed_sections) const {
    for (const auto& [section, body] : tree_) {
      if (body.empty() && !body.data().empty()) {
        throw ConfigError(fmt::format("{}: key '{}' must be inside a [section]", source_, section));
      }
      for (const auto& [key, value] : body) {
        if (prefixed_sections.count(section)) continue;
        if (!used_.count(section + "." + key)) {
          throw ConfigError(fmt::format("{}: unknown key [{}] {}", source_, section, key));
        }
      }
    }
  }

  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  const pt::ptree& tree() const { return tree_; }

 private:
  const pt::ptree& tree_;
  std::string source_;
  std::set<std::string> used_;
};

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::string& source, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(line_error(source, static_cast<int>(e.line()), e.message()));
  }
  IniReader r(tree, source);
  RunConfig cfg;

  auto resolve = [&](const std::optional<std::string>& p) -> std::filesystem::path {
    if (!p || IniReader::trim(*p).empty()) return {};
    std::filesystem::path path(IniReader::trim(*p));
    return path.is_absolute() ? path : base_dir / path;
  };
  cfg.cloud_path = resolve(r.text("paths", "cloud"));
  cfg.robot_path = resolve(r.text("paths", "robot"));

  cfg.grid.origin = {r.number_or("grid", "origin_x", 0.0), r.number_or("grid", "origin_y", 0.0)};
  cfg.grid.cell_size = r.required("grid", "cell_size");
  cfg.grid.nx = r.integer("grid", "nx");
  cfg.grid.ny = r.integer("grid", "ny");
  try {
    cfg.grid.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }

  cfg.dtheta = r.number_or("partition", "dtheta_deg", 5.0) * kDeg;
  cfg.z_floor = r.number_or("partition", "z_floor", kDefaultFloorCutoff);

  auto& p = cfg.planner;
  p.motion = TransitionParams::for_cell(cfg.grid.cell_size);
  p.motion.step_lin = r.number_or("graph", "step_lin", p.motion.step_lin);
  p.motion.step_ang = r.number_or("graph", "step_ang_deg", 5.0) * kDeg;
  p.motion.turn_weight = r.number_or("graph", "turn_weight", p.motion.turn_weight);

  if (auto alg = r.text("planner", "algorithm")) {
    const std::string a = IniReader::trim(*alg);
    if (a == "bsa") {
      p.algorithm = Algorithm::kBacktrackingSpiral;
    } else if (a == "path_transform") {
      p.algorithm = Algorithm::kPathTransform;
    } else {
      throw r.error("planner", "algorithm", fmt::format("'{}' is not one of bsa, path_transform", a));
    }
  }
  const Point2 first_center = cfg.grid.cell_center({0, 0});
  p.start = Pose2D::make(r.number_or("planner", "start_x", first_center.x),
                         r.number_or("planner", "start_y", first_center.y),
                         r.number_or("planner", "start_theta_deg", 0.0) * kDeg);
  p.obstacle_weight = r.number_or("planner", "obstacle_weight", p.obstacle_weight);
  p.contamination_penalty = r.number_or("planner", "contamination_penalty", p.contamination_penalty);
  p.revisit_penalty = r.number_or("planner", "revisit_penalty", p.revisit_penalty);
  p.coverage_overlap = r.number_or("planner", "coverage_overlap", p.coverage_overlap);
  cfg.velocity = r.number("planner", "velocity");

  auto& d = cfg.detector;
  d.detection_limit = r.number_or("detector", "detection_limit", d.detection_limit);
  d.area = r.number_or("detector", "area_cm2", d.area);
  d.efficiency = r.number_or("detector", "efficiency", d.efficiency);
  d.length = r.number_or("detector", "length_cm", d.length);
  d.background_rate = r.number_or("detector", "background_cps", d.background_rate);
  d.relative_precision = r.number_or("detector", "relative_precision", d.relative_precision);

  cfg.field.background_emission = r.number_or("field", "background_emission", 0.0);
  if (const auto sec = tree.get_child_optional("field")) {
    for (const auto& [key, value] : *sec) {
      if (key.rfind("disk", 0) != 0) continue;
      const auto tok = split_ws(value.data());
      std::vector<double> v;
      for (const auto& t : tok) {
        auto x = parse_number(t);
        if (!x) throw r.error("field", key, fmt::format("bad number '{}'", t));
        v.push_back(*x);
      }
      if (v.size() != 4) throw r.error("field", key, "expects 'x y radius rate'");
      cfg.field.disks.push_back({{v[0], v[1]}, v[2], v[3]});
    }
  }

  if (auto s = r.text("survey", "seed")) {
    const std::string t = IniReader::trim(*s);
    std::uint64_t seed = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), seed);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) throw r.error("survey", "seed", "must be a u64");
    cfg.seed = seed;
  }
  if (auto s = r.text("survey", "timestamp")) cfg.timestamp = IniReader::trim(*s);
  if (auto s = r.text("survey", "pgm")) {
    const std::string t = IniReader::trim(*s);
    if (t != "true" && t != "false") throw r.error("survey", "pgm", "must be true or false");
    cfg.write_pgm = t == "true";
  }

  r.check_unused({"field"});
  if (const auto sec = tree.get_child_optional("field")) {
    for (const auto& [key, value] : *sec) {
      if (key != "background_emission" && key.rfind("disk", 0) != 0) {
        throw ConfigError(fmt::format("{}: unknown key [field] {}", source, key));
      }
    }
  }

  try {
    heading_sample_count(cfg.dtheta);
    p.validate();
    d.validate();
    cfg.field.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
  return parse_run_config(in, path.string(), path.parent_path());
}

// ---------------------------------------------------------------------------

namespace {

std::string grid_comment(const GridSpec& g) {
  return fmt::format("# grid origin_x={} origin_y={} cell_size={} nx={} ny={}", format_number(g.origin.x),
                     format_number(g.origin.y), format_number(g.cell_size), g.nx, g.ny);
}

double deg(double rad) { return rad / kDeg; }

// Six decimals, never "-0.000000".
std::string fixed6(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;
  return fmt::format("{:.6f}", v);
}

}  // namespace

std::string partition_csv(const PartitionGrid& grid) {
  std::string out = grid_comment(grid.spec());
  out += fmt::format(" dtheta_deg={}\n", fixed6(deg(grid.angular_resolution())));
  out += "x_index,y_index,i,phi1_deg,phi2_deg\n";
  for (const auto& p : grid.partitions()) {
    out += fmt::format("{},{},{},{},{}\n", p.cell.x, p.cell.y, p.index, fixed6(deg(p.range.phi1)), fixed6(deg(p.range.phi2)));
  }
  return out;
}

std::string graph_csv(const PartitionGrid& grid, const NavGraph& graph) {
  std::string out = "from_cell_x,from_cell_y,from_i,to_cell_x,to_cell_y,to_i,theta_from_deg,theta_to_deg,length_m,turn_rad\n";
  const auto& parts = grid.partitions();
  for (const auto& e : graph.edges()) {
    const auto& a = parts[e.from];
    const auto& b = parts[e.to];
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", a.cell.x, a.cell.y, a.index, b.cell.x, b.cell.y,
                       b.index, fixed6(deg(e.annotation.theta_from)), fixed6(deg(e.annotation.theta_to)),
                       fixed6(e.annotation.length), fixed6(e.annotation.turn));
  }
  return out;
}

std::string plan_csv(const CoveragePlan& plan) {
  std::string out = "step,cell_x,cell_y,i,sensor_x,sensor_y,theta_deg,base_x,base_y,velocity_mps\n";
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const auto& s = plan.steps[k];
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", k, s.cell.x, s.cell.y, s.partition, fixed6(s.sensor.x),
                       fixed6(s.sensor.y), fixed6(deg(s.sensor.theta)), fixed6(s.base.x), fixed6(s.base.y),
                       fixed6(s.velocity));
  }
  return out;
}

namespace {

std::string cell_list(const std::vector<CellIndex>& cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ' ';
    out += fmt::format("{},{}", c.x, c.y);
  }
  return out;
}

}  // namespace

std::string report_text(const CoverageReport& r, const CoveragePlan& plan) {
  std::string out;
  out += fmt::format("algorithm = {}\n", algorithm_name(plan.algorithm));
  out += fmt::format("config_hash = {:016x}\n", plan.config_hash);
  out += fmt::format("steps = {}\n", plan.steps.size());
  out += fmt::format("coverable_cells = {}\n", r.coverable_cells);
  out += fmt::format("covered_cells = {}\n", r.covered_cells);
  out += fmt::format("coverage_fraction = {:.6f}\n", r.coverage_fraction);
  out += fmt::format("uncoverable_count = {}\n", r.uncoverable_cells.size());
  out += fmt::format("uncoverable_cells = {}\n", cell_list(r.uncoverable_cells));
  out += fmt::format("unreachable_count = {}\n", r.unreachable_cells.size());
  out += fmt::format("unreachable_cells = {}\n", cell_list(r.unreachable_cells));
  out += fmt::format("revisit_count = {}\n", r.revisit_count);
  out += fmt::format("path_length_m = {:.6f}\n", r.path_length);
  out += fmt::format("total_turn_rad = {:.6f}\n", plan.total_turn);
  out += fmt::format("backtracks = {}\n", plan.backtracks);
  out += fmt::format("reorientation_failures = {}\n", plan.reorientation_failures);
  out += fmt::format("contamination_violations = {}\n", r.contamination_violations);
  return out;
}

std::string heatmap_csv(const SurveyHeatmap& map) {
  std::string out = grid_comment(map.grid) + "\n";
  out += "cell_x,cell_y,rate_cps,dwell_s,verdict\n";
  for (std::size_t k = 0; k < map.cells.size(); ++k) {
    const auto c = map.grid.unflat(k);
    const auto& cell = map.cells[k];
    out += fmt::format("{},{},{},{},{}\n", c.x, c.y, cell.rate ? format_number(*cell.rate) : std::string(),
                       format_number(cell.dwell), verdict_name(cell.verdict));
  }
  return out;
}

std::string heatmap_metadata(const SurveyHeatmap& map) {
  const auto& d = map.meta.detector;
  std::string out;
  out += fmt::format("seed = {}\n", map.meta.seed);
  out += fmt::format("plan_hash = {:016x}\n", map.meta.plan_hash);
  out += fmt::format("timestamp = {}\n", map.meta.timestamp);
  out += fmt::format("detection_limit_dps_cm2 = {}\n", format_number(d.detection_limit));
  out += fmt::format("area_cm2 = {}\n", format_number(d.area));
  out += fmt::format("efficiency = {}\n", format_number(d.efficiency));
  out += fmt::format("length_cm = {}\n", format_number(d.length));
  out += fmt::format("background_cps = {}\n", format_number(d.background_rate));
  out += fmt::format("relative_precision = {}\n", format_number(d.relative_precision));
  out += fmt::format("count_threshold_cps = {}\n", format_number(count_threshold(d)));
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& c : map.cells) ++counts[static_cast<int>(c.verdict)];
  out += fmt::format("clean_cells = {}\ncontaminated_cells = {}\nnot_surveyed_cells = {}\n", counts[0], counts[1],
                     counts[2]);
  return out;
}

std::string heatmap_pgm(const SurveyHeatmap& map) {
  const double full_scale = 2.0 * count_threshold(map.meta.detector);
  std::string out = fmt::format("P5\n{} {}\n255\n", map.grid.nx, map.grid.ny);
  for (int y = map.grid.ny - 1; y >= 0; --y) {
    for (int x = 0; x < map.grid.nx; ++x) {
      const auto& cell = map.at({x, y});
      unsigned char gray = 0;
      if (cell.rate) {
        const double f = full_scale > 0.0 ? std::clamp(*cell.rate / full_scale, 0.0, 1.0) : (*cell.rate > 0.0 ? 1.0 : 0.0);
        gray = static_cast<unsigned char>(std::lround(255.0 * f));
      }
      out.push_back(static_cast<char>(gray));
    }
  }
  return out;
}

std::string diff_text(const HeatmapDiff& diff) {
  std::string out;
  for (const auto& [key, n] : diff.transitions) {
    out += fmt::format("transition {}->{} = {}\n", verdict_name(key.first), verdict_name(key.second), n);
  }
  double max_abs = 0.0;
  std::size_t changed = 0;
  for (const auto& c : diff.cells) {
    if (c.rate_delta) {
      max_abs = std::max(max_abs, std::abs(*c.rate_delta));
      changed += *c.rate_delta != 0.0;
    }
  }
  out += fmt::format("cells_with_rate_change = {}\n", changed);
  out += fmt::format("max_abs_rate_delta_cps = {}\n", format_number(max_abs));
  out += "cell_x,cell_y,before,after,rate_delta_cps\n";
  for (const auto& c : diff.cells) {
    if (c.before == c.after && (!c.rate_delta || *c.rate_delta == 0.0)) continue;
    out += fmt::format("{},{},{},{},{}\n", c.cell.x, c.cell.y, verdict_name(c.before), verdict_name(c.after),
                       c.rate_delta ? format_number(*c.rate_delta) : std::string());
  }
  return out;
}

SurveyHeatmap parse_heatmap_csv(std::istream& in, const std::string& source) {
  SurveyHeatmap map;
  std::string line;
  int n = 0;
  bool have_grid = false;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.rfind("# grid", 0) == 0) {
      std::istringstream ss(line.substr(6));
      for (std::string kv; ss >> kv;) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string k = kv.substr(0, eq);
        const auto v = parse_number(kv.substr(eq + 1));
        if (!v) throw ConfigError(line_error(source, n, "bad grid value"));
        if (k == "origin_x") map.grid.origin.x = *v;
        else if (k == "origin_y") map.grid.origin.y = *v;
        else if (k == "cell_size") map.grid.cell_size = *v;
        else if (k == "nx") map.grid.nx = static_cast<int>(*v);
        else if (k == "ny") map.grid.ny = static_cast<int>(*v);
      }
      try {
        map.grid.validate();
      } catch (const ConfigError& e) {
        throw ConfigError(line_error(source, n, e.what()));
      }
      map.cells.assign(map.grid.cell_count(), HeatmapCell{});
      have_grid = true;
      continue;
    }
    if (is_comment_or_blank(line)) continue;
    if (!have_header) {
      if (line.rfind("cell_x,", 0) != 0) throw ConfigError(line_error(source, n, "missing CSV header"));
      have_header = true;
      continue;
    }
    if (!have_grid) throw ConfigError(line_error(source, n, "missing '# grid' line"));
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string field; std::getline(ss, field, ',');) f.push_back(field);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 5) throw ConfigError(line_error(source, n, "expected 5 fields"));
    const auto x = parse_number(f[0]);
    const auto y = parse_number(f[1]);
    if (!x || !y) throw ConfigError(line_error(source, n, "bad cell index"));
    const CellIndex c{static_cast<int>(*x), static_cast<int>(*y)};
    if (!map.grid.in_bounds(c)) throw ConfigError(line_error(source, n, "cell outside grid"));
    auto& cell = map.cells[map.grid.flat(c)];
    if (!f[2].empty()) {
      cell.rate = parse_number(f[2]);
      if (!cell.rate) throw ConfigError(line_error(source, n, "bad rate"));
    }
    const auto dwell = parse_number(f[3]);
    const auto verdict = parse_verdict(IniReader::trim(f[4]));
    if (!dwell || !verdict) throw ConfigError(line_error(source, n, "bad dwell or verdict"));
    cell.dwell = *dwell;
    cell.verdict = *verdict;
  }
  if (!have_grid) throw ConfigError(source + ": missing '# grid' line");
  return map;
}

SurveyHeatmap load_heatmap_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open heat map '{}'", path.string()));
  return parse_heatmap_csv(in, path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << content;
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace alphasweep
