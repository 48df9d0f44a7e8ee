#include "alphasweep/pipeline.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "alphasweep/errors.hpp"
#include "alphasweep/scene.hpp"

namespace alphasweep {

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError(fmt::format("cannot create output directory '{}'", dir.string()));
  }
}

}  // namespace

std::unique_ptr<World> build_world(const RunConfig& cfg, bool with_graph) {
  RobotModel robot = cfg.robot_path.empty() ? RobotModel::magni_default() : load_robot_model(cfg.robot_path);
  PointCloud cloud = cfg.cloud_path.empty() ? PointCloud{} : load_pointcloud(cfg.cloud_path, cfg.z_floor);
  PartitionGrid grid = build_partition_grid(cfg.grid, robot, cloud, cfg.dtheta);
  NavGraph graph = with_graph ? build_nav_graph(grid, robot, cloud, cfg.planner.motion) : NavGraph(grid.partitions().size(), {});
  return std::make_unique<World>(cfg, std::move(robot), std::move(cloud), std::move(grid), std::move(graph));
}

double survey_velocity(const RunConfig& cfg, const RobotModel& robot) {
  if (cfg.velocity) {
    if (!(*cfg.velocity > 0.0)) throw ConfigError("[planner] velocity must be positive");
    return *cfg.velocity;
  }
  return std::min(optimal_velocity(cfg.detector), robot.max_linear_speed());
}

PlanOutcome plan_world(const World& world) {
  PlannerConfig pc = world.config.planner;
  pc.survey_velocity = survey_velocity(world.config, world.robot);
  PlanOutcome out;
  out.start_node = world.graph.node_count() == 0 ? SIZE_MAX : find_start_node(world.grid, pc.start);
  out.plan = plan_coverage(world.context(), pc);
  out.report = coverage_metrics(out.plan, world.grid, world.graph, world.robot, out.start_node);
  return out;
}

void cmd_scene(const std::filesystem::path& scene_file, const std::filesystem::path& out_dir, std::ostream& log) {
  std::ifstream in(scene_file);
  if (!in) throw IoError(fmt::format("cannot open scene '{}'", scene_file.string()));
  const SceneSpec scene = parse_scene(in, scene_file.string());
  const auto points = rasterize_scene(scene);
  ensure_dir(out_dir);
  std::ostringstream ss;
  write_pointcloud(ss, points,
                   fmt::format("scene {}\nspacing {}\npoints {}", scene_file.filename().string(),
                               format_number(scene.spacing), points.size()));
  write_text_file(out_dir / "cloud.xyz", ss.str());
  log << fmt::format("points: {}\nwrote {}\n", points.size(), (out_dir / "cloud.xyz").string());
}

void cmd_partition(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  const auto world = build_world(cfg, false);
  ensure_dir(out_dir);
  write_text_file(out_dir / "partition.csv", partition_csv(world->grid));
  log << fmt::format("cells: {}\ncoverable: {}\nuncoverable: {}\npartitions: {}\n", world->grid.spec().cell_count(),
                     world->grid.coverable_count(), world->grid.uncoverable_cells().size(),
                     world->grid.partitions().size());
}

namespace {

PlanOutcome plan_and_write(const World& world, const std::filesystem::path& out_dir, std::ostream& log) {
  PlanOutcome outcome = plan_world(world);
  write_text_file(out_dir / "partition.csv", partition_csv(world.grid));
  write_text_file(out_dir / "graph.csv", graph_csv(world.grid, world.graph));
  write_text_file(out_dir / "plan.csv", plan_csv(outcome.plan));
  write_text_file(out_dir / "report.txt", report_text(outcome.report, outcome.plan));
  log << fmt::format("algorithm: {}\nsteps: {}\ncoverage_fraction: {:.6f}\nunreachable: {}\nviolations: {}\n",
                     algorithm_name(outcome.plan.algorithm), outcome.plan.steps.size(),
                     outcome.report.coverage_fraction, outcome.report.unreachable_cells.size(),
                     outcome.report.contamination_violations);
  return outcome;
}

}  // namespace

void cmd_plan(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  const auto world = build_world(cfg);
  ensure_dir(out_dir);
  plan_and_write(*world, out_dir, log);
}

void cmd_survey(const RunConfig& cfg, const std::filesystem::path& out_dir,
                const std::optional<std::filesystem::path>& baseline, std::ostream& log) {
  // Load the baseline first so a bad file fails before any work is done.
  std::optional<SurveyHeatmap> before;
  if (baseline) before = load_heatmap_csv(*baseline);

  const auto world = build_world(cfg);
  ensure_dir(out_dir);
  const PlanOutcome outcome = plan_and_write(*world, out_dir, log);
  const SurveyHeatmap map = run_survey(outcome.plan, cfg.field, cfg.detector, cfg.seed, cfg.timestamp);
  write_text_file(out_dir / "heatmap.csv", heatmap_csv(map));
  write_text_file(out_dir / "heatmap.meta", heatmap_metadata(map));
  if (cfg.write_pgm) write_text_file(out_dir / "heatmap.pgm", heatmap_pgm(map));

  std::size_t contaminated = 0;
  for (const auto& c : map.cells) contaminated += c.verdict == Verdict::kContaminated;
  log << fmt::format("count_threshold_cps: {}\nsurvey_velocity_mps: {:.6f}\ncontaminated_cells: {}\n",
                     format_number(count_threshold(cfg.detector)), survey_velocity(cfg, world->robot), contaminated);

  if (before) {
    const HeatmapDiff diff = compare_heatmaps(*before, map);
    write_text_file(out_dir / "diff.txt", diff_text(diff));
    log << fmt::format("baseline: {}\nnew_contaminated: {}\n", baseline->string(),
                       diff.count(Verdict::kClean, Verdict::kContaminated) +
                           diff.count(Verdict::kNotSurveyed, Verdict::kContaminated));
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  if (dynamic_cast<const PlanningError*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 3;
  return 3;
}

}  // namespace alphasweep
