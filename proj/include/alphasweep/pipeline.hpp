#pragma once
/**
 * @file    pipeline.hpp
 * @brief   End-to-end orchestration behind the command-line subcommands.
 *
 * Commands write their artifacts into an output directory and a short
 * summary to `log`. Failures are reported as exceptions; `exit_code_for`
 * maps them to process exit codes (1 config/parse, 2 planning, 3 IO).
 */

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>

#include "alphasweep/coverage_planner.hpp"
#include "alphasweep/io.hpp"
#include "alphasweep/partition_grid.hpp"
#include "alphasweep/radiation_survey.hpp"
#include "alphasweep/transition_graph.hpp"

namespace alphasweep {

/// Everything built from one RunConfig. Members reference each other, so the
/// struct is neither copyable nor movable; hold it by unique_ptr.
struct World {
  RunConfig config;
  RobotModel robot;
  PointCloud cloud;
  PartitionGrid grid;
  NavGraph graph;

  World(RunConfig cfg, RobotModel r, PointCloud c, PartitionGrid g, NavGraph n)
      : config(std::move(cfg)), robot(std::move(r)), cloud(std::move(c)), grid(std::move(g)), graph(std::move(n)) {}
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  PlanningContext context() const { return {graph, grid, robot, cloud}; }
};

/// Loads robot and cloud; builds the partition grid, and the graph unless `with_graph` is false.
std::unique_ptr<World> build_world(const RunConfig& cfg, bool with_graph = true);

/// Survey speed: the config override, else min(optimal velocity, robot max speed).
double survey_velocity(const RunConfig& cfg, const RobotModel& robot);

struct PlanOutcome {
  CoveragePlan plan;
  CoverageReport report;
  std::size_t start_node = 0;
};

PlanOutcome plan_world(const World& world);

void cmd_scene(const std::filesystem::path& scene_file, const std::filesystem::path& out_dir, std::ostream& log);
void cmd_partition(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
void cmd_plan(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
void cmd_survey(const RunConfig& cfg, const std::filesystem::path& out_dir,
                const std::optional<std::filesystem::path>& baseline, std::ostream& log);

int exit_code_for(const std::exception& e);

}  // namespace alphasweep
