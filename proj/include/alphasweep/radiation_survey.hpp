#pragma once
/**
 * @file    radiation_survey.hpp
 * @brief   Alpha count thresholds, survey speed selection, Poisson measurement
 *          simulation, and contamination heat maps.
 *
 * Units: detector quantities are in centimetres (area cm^2, length cm) and
 * emission rates in decays per second per cm^2; world positions and speeds
 * are in metres.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alphasweep/coverage_planner.hpp"
#include "alphasweep/geometry.hpp"
#include "alphasweep/partition_grid.hpp"

namespace alphasweep {

struct DetectorConfig {
  double detection_limit = 0.1;   // L_D, dps/cm^2
  double area = 900.0;            // A_d, cm^2
  double efficiency = 0.2;        // eps_d, (0, 1]
  double length = 30.0;           // L_t along travel, cm
  double background_rate = 0.5;   // counts/s
  double relative_precision = 0.1;  // target relative std of a count-rate reading

  void validate() const;
  /// Footprint width implied by area / length, cm.
  double width() const { return area / length; }
};

struct DiskSource {
  Point2 center;
  double radius = 0.0;  // m
  double rate = 0.0;    // dps/cm^2
};

struct SourceField {
  std::vector<DiskSource> disks;
  double background_emission = 0.0;  // dps/cm^2 everywhere

  void validate() const;
  /// Surface emission at a world point, dps/cm^2.
  double emission_at(Point2 p) const;
};

/// Count threshold CT = L_D * A_d * eps_d, counts/s.
double count_threshold(const DetectorConfig& cfg);

/// Survey speed at which a reading at the threshold rate reaches the target
/// relative precision: v = L_t * CT * eps_rel^2 (m/s). Throws ConfigError when CT <= 0.
double optimal_velocity(const DetectorConfig& cfg);

/// Reference hand-swipe speed over a bench detector: 2 in/s.
inline constexpr double kManualSwipeSpeed = 2.0 * 0.0254;

/// Expected count rate (counts/s) of the detector at `sensor_pose`: efficiency times the
/// footprint integral of the emission, plus the detector background. The integral uses
/// midpoint quadrature with cells of at most `resolution_cm`.
double expected_rate(const Pose2D& sensor_pose, const SourceField& field, const DetectorConfig& cfg,
                     double resolution_cm = 1.0);

/// One Poisson draw of the counts collected in `dwell` seconds.
std::uint64_t simulate_measurement(const Pose2D& sensor_pose, const SourceField& field, const DetectorConfig& cfg,
                                   double dwell, std::uint64_t seed);

enum class Verdict { kClean, kContaminated, kNotSurveyed };

const char* verdict_name(Verdict v);
std::optional<Verdict> parse_verdict(const std::string& s);

struct HeatmapCell {
  std::optional<double> rate;  // counts/s, max over visits; empty when not surveyed
  double dwell = 0.0;          // total seconds the footprint spent on the cell
  Verdict verdict = Verdict::kNotSurveyed;
};

struct SurveyMetadata {
  std::uint64_t seed = 0;
  DetectorConfig detector;
  std::uint64_t plan_hash = 0;
  std::string timestamp;
};

struct SurveyHeatmap {
  GridSpec grid;
  std::vector<HeatmapCell> cells;  // row-major
  SurveyMetadata meta;

  const HeatmapCell& at(CellIndex c) const { return cells[grid.flat(c)]; }
};

/// FNV-1a over the plan's steps and grid.
std::uint64_t plan_hash(const CoveragePlan& plan);

SurveyHeatmap run_survey(const CoveragePlan& plan, const SourceField& field, const DetectorConfig& cfg,
                         std::uint64_t seed, std::string timestamp = "unset");

struct HeatmapDiff {
  struct CellDelta {
    CellIndex cell;
    Verdict before = Verdict::kNotSurveyed;
    Verdict after = Verdict::kNotSurveyed;
    std::optional<double> rate_delta;  // after - before, when both surveyed
  };
  std::vector<CellDelta> cells;  // row-major
  std::map<std::pair<Verdict, Verdict>, std::size_t> transitions;

  std::size_t count(Verdict before, Verdict after) const;
};

/// Throws ConfigError when the grids differ.
HeatmapDiff compare_heatmaps(const SurveyHeatmap& before, const SurveyHeatmap& after);

}  // namespace alphasweep
