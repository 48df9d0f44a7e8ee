#include "alphasweep/radiation_survey.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "alphasweep/errors.hpp"
#include "alphasweep/hash.hpp"

namespace alphasweep {

void DetectorConfig::validate() const {
  if (!(area > 0.0)) throw ConfigError("detector area must be positive");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ConfigError("detector efficiency must be in (0, 1]");
  if (!(detection_limit >= 0.0)) throw ConfigError("detection limit must be >= 0");
  if (!(length > 0.0)) throw ConfigError("detector length must be positive");
  if (!(background_rate >= 0.0)) throw ConfigError("background rate must be >= 0");
  if (!(relative_precision > 0.0 && relative_precision < 1.0)) {
    throw ConfigError("relative precision must be in (0, 1)");
  }
}

void SourceField::validate() const {
  if (!(background_emission >= 0.0)) throw ConfigError("background emission must be >= 0");
  for (const auto& d : disks) {
    if (!(d.radius > 0.0)) throw ConfigError("source disk radius must be positive");
    if (!(d.rate >= 0.0)) throw ConfigError("source disk rate must be >= 0");
  }
}

double SourceField::emission_at(Point2 p) const {
  double e = background_emission;
  for (const auto& d : disks) {
    const double dx = p.x - d.center.x;
    const double dy = p.y - d.center.y;
    if (dx * dx + dy * dy <= d.radius * d.radius) e += d.rate;
  }
  return e;
}

double count_threshold(const DetectorConfig& cfg) {
  return cfg.detection_limit * cfg.area * cfg.efficiency;
}

double optimal_velocity(const DetectorConfig& cfg) {
  const double ct = count_threshold(cfg);
  if (!(ct > 0.0)) throw ConfigError("count threshold must be positive to derive a survey velocity");
  // Counts at threshold over dwell t = L_t / v are CT * t; 1/sqrt(CT * t) <= eps_rel.
  return (cfg.length / 100.0) * ct * cfg.relative_precision * cfg.relative_precision;
}

double expected_rate(const Pose2D& sensor_pose, const SourceField& field, const DetectorConfig& cfg,
                     double resolution_cm) {
  const double width = cfg.width();
  const int n_len = std::max(1, static_cast<int>(std::ceil(cfg.length / resolution_cm - 1e-9)));
  const int n_wid = std::max(1, static_cast<int>(std::ceil(width / resolution_cm - 1e-9)));
  const double d_len = cfg.length / n_len;
  const double d_wid = width / n_wid;
  const double c = std::cos(sensor_pose.theta);
  const double s = std::sin(sensor_pose.theta);
  double integral = 0.0;  // decays per second
  for (int i = 0; i < n_len; ++i) {
    const double lx = (-0.5 * cfg.length + (i + 0.5) * d_len) / 100.0;
    for (int j = 0; j < n_wid; ++j) {
      const double ly = (-0.5 * width + (j + 0.5) * d_wid) / 100.0;
      const Point2 p{sensor_pose.x + c * lx - s * ly, sensor_pose.y + s * lx + c * ly};
      integral += field.emission_at(p);
    }
  }
  integral *= d_len * d_wid;
  return cfg.efficiency * integral + cfg.background_rate;
}

namespace {

std::uint64_t draw_counts(double mean, std::mt19937_64& rng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

}  // namespace

std::uint64_t simulate_measurement(const Pose2D& sensor_pose, const SourceField& field, const DetectorConfig& cfg,
                                   double dwell, std::uint64_t seed) {
  if (!(dwell > 0.0)) throw ConfigError("measurement dwell must be positive");
  std::mt19937_64 rng(seed);
  return draw_counts(expected_rate(sensor_pose, field, cfg) * dwell, rng);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kClean:
      return "CLEAN";
    case Verdict::kContaminated:
      return "CONTAMINATED";
    case Verdict::kNotSurveyed:
      return "NOT_SURVEYED";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(const std::string& s) {
  if (s == "CLEAN") return Verdict::kClean;
  if (s == "CONTAMINATED") return Verdict::kContaminated;
  if (s == "NOT_SURVEYED") return Verdict::kNotSurveyed;
  return std::nullopt;
}

std::uint64_t plan_hash(const CoveragePlan& plan) {
  std::uint64_t h = fnv1a(fmt::format("{:.17g},{:.17g},{:.17g},{},{}", plan.grid.origin.x, plan.grid.origin.y,
                                      plan.grid.cell_size, plan.grid.nx, plan.grid.ny));
  for (const auto& s : plan.steps) {
    h = fnv1a(fmt::format("{}|{:.17g},{:.17g},{:.17g}|{:.17g}", s.node, s.sensor.x, s.sensor.y, s.sensor.theta,
                          s.velocity),
              h);
  }
  return h;
}

SurveyHeatmap run_survey(const CoveragePlan& plan, const SourceField& field, const DetectorConfig& cfg,
                         std::uint64_t seed, std::string timestamp) {
  cfg.validate();
  field.validate();
  SurveyHeatmap map;
  map.grid = plan.grid;
  map.meta = {seed, cfg, plan_hash(plan), std::move(timestamp)};
  map.cells.resize(plan.grid.cell_count());
  const double ct = count_threshold(cfg);
  std::mt19937_64 rng(seed);
  for (const auto& step : plan.steps) {
    if (!(step.velocity > 0.0)) throw ConfigError("plan step velocity must be positive");
    const double dwell = (cfg.length / 100.0) / step.velocity;
    const auto counts = draw_counts(expected_rate(step.sensor, field, cfg) * dwell, rng);
    const double rate = static_cast<double>(counts) / dwell;
    for (const auto& c : footprint_cells(step.sensor, plan.footprint, plan.grid, plan.coverage_overlap)) {
      auto& cell = map.cells[plan.grid.flat(c)];
      cell.rate = cell.rate ? std::max(*cell.rate, rate) : rate;
      cell.dwell += dwell;
    }
  }
  for (auto& cell : map.cells) {
    if (cell.rate) cell.verdict = *cell.rate > ct ? Verdict::kContaminated : Verdict::kClean;
  }
  return map;
}

std::size_t HeatmapDiff::count(Verdict before, Verdict after) const {
  auto it = transitions.find({before, after});
  return it == transitions.end() ? 0 : it->second;
}

HeatmapDiff compare_heatmaps(const SurveyHeatmap& before, const SurveyHeatmap& after) {
  if (!(before.grid == after.grid) || before.cells.size() != after.cells.size()) {
    throw ConfigError("heat maps were recorded on different grids");
  }
  HeatmapDiff diff;
  for (std::size_t k = 0; k < before.cells.size(); ++k) {
    const auto& a = before.cells[k];
    const auto& b = after.cells[k];
    HeatmapDiff::CellDelta d{before.grid.unflat(k), a.verdict, b.verdict, std::nullopt};
    if (a.rate && b.rate) d.rate_delta = *b.rate - *a.rate;
    diff.cells.push_back(d);
    ++diff.transitions[{a.verdict, b.verdict}];
  }
  return diff;
}

}  // namespace alphasweep
