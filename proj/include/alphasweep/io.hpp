#pragma once
/**
 * @file    io.hpp
 * @brief   File formats: point clouds, robot models, run configuration,
 *          and CSV / text exports of every pipeline artifact.
 *
 * Numbers are written in shortest round-trip form and parsed with
 * std::from_chars, so files are locale independent and reload exactly.
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "alphasweep/coverage_planner.hpp"
#include "alphasweep/geometry.hpp"
#include "alphasweep/partition_grid.hpp"
#include "alphasweep/radiation_survey.hpp"
#include "alphasweep/transition_graph.hpp"

namespace alphasweep {

inline constexpr double kDefaultFloorCutoff = 0.02;  // m

/// Shortest decimal string that parses back to the same double.
std::string format_number(double v);
/// Strict, locale-independent double parse of the whole token.
std::optional<double> parse_number(std::string_view token);

// --- point clouds ----------------------------------------------------------

/// Parses `x y z` lines; `#` lines and blank lines are skipped. Points with
/// z < z_floor are dropped. Errors name `source` and the line number.
std::vector<Point3> parse_pointcloud(std::istream& in, const std::string& source, double z_floor);
PointCloud load_pointcloud(const std::filesystem::path& path, double z_floor = kDefaultFloorCutoff);
void write_pointcloud(std::ostream& out, std::span<const Point3> points, const std::string& header);

// --- robot model -------------------------------------------------------------

/**
 * Robot file, one directive per line:
 *   body|sensor offset_x offset_y radius z_min z_max
 *   sensor_offset dx dy
 *   footprint length_along_travel width
 *   max_linear_speed v
 *   max_angular_speed_deg w
 */
RobotModel parse_robot_model(std::istream& in, const std::string& source);
RobotModel load_robot_model(const std::filesystem::path& path);
void write_robot_model(std::ostream& out, const RobotModel& robot);

// --- run configuration -------------------------------------------------------

struct RunConfig {
  std::filesystem::path cloud_path;  // empty: obstacle-free world
  std::filesystem::path robot_path;  // empty: built-in demonstration robot
  GridSpec grid;
  double dtheta = 5.0 * std::numbers::pi / 180.0;
  double z_floor = kDefaultFloorCutoff;
  PlannerConfig planner;
  std::optional<double> velocity;  // overrides the derived survey speed
  DetectorConfig detector;
  SourceField field;
  std::uint64_t seed = 0;
  std::string timestamp = "unset";
  bool write_pgm = false;
};

/// INI-style file with sections [paths] [grid] [partition] [graph] [planner]
/// [detector] [field] [survey]. Angles are degrees; detector lengths are cm,
/// everything else metres. Relative paths resolve against the config's directory.
RunConfig parse_run_config(std::istream& in, const std::string& source, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// --- exports -----------------------------------------------------------------

std::string partition_csv(const PartitionGrid& grid);
std::string graph_csv(const PartitionGrid& grid, const NavGraph& graph);
std::string plan_csv(const CoveragePlan& plan);
std::string report_text(const CoverageReport& report, const CoveragePlan& plan);
std::string heatmap_csv(const SurveyHeatmap& map);
std::string heatmap_metadata(const SurveyHeatmap& map);
/// Binary 8-bit PGM, north up. Gray = 255 * min(rate, 2 CT) / (2 CT); unsurveyed cells are 0.
std::string heatmap_pgm(const SurveyHeatmap& map);
std::string diff_text(const HeatmapDiff& diff);

/// Reads a heat map CSV written by heatmap_csv (grid from its `# grid` line).
SurveyHeatmap parse_heatmap_csv(std::istream& in, const std::string& source);
SurveyHeatmap load_heatmap_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Truncates and writes; throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace alphasweep
