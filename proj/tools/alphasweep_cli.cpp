// Command-line front end: scene | partition | plan | survey.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "alphasweep/errors.hpp"
#include "alphasweep/io.hpp"
#include "alphasweep/pipeline.hpp"

namespace as = alphasweep;

int main(int argc, char** argv) {
  CLI::App app{"Coverage planning and alpha survey simulation for an off-center detector robot"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::string baseline;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config file (scene spec for `scene`)")->required();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
  };

  auto* scene = app.add_subcommand("scene", "Rasterise a scene spec into an obstacle point cloud");
  add_common(scene);
  auto* partition = app.add_subcommand("partition", "Build orientation partitions per grid cell");
  add_common(partition);
  auto* plan = app.add_subcommand("plan", "Partition, build the navigation graph and plan coverage");
  add_common(plan);
  plan->add_option("--seed", seed, "Random seed (overrides [survey] seed)");
  auto* survey = app.add_subcommand("survey", "Plan and simulate a survey; write the heat map");
  add_common(survey);
  survey->add_option("--seed", seed, "Random seed (overrides [survey] seed)");
  survey->add_option("--baseline", baseline, "Earlier heatmap.csv to compare against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (scene->parsed()) {
      as::cmd_scene(config_path, out_dir, std::cout);
      return 0;
    }
    as::RunConfig cfg = as::load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (partition->parsed()) {
      as::cmd_partition(cfg, out_dir, std::cout);
    } else if (plan->parsed()) {
      as::cmd_plan(cfg, out_dir, std::cout);
    } else {
      std::optional<std::filesystem::path> base;
      if (!baseline.empty()) base = baseline;
      as::cmd_survey(cfg, out_dir, base, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return as::exit_code_for(e);
  }
  return 0;
}
