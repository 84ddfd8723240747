// Command-line front end: single experiments and parameter sweeps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scn/config_io.hpp"
#include "scn/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string out = ".";
  bool trace = false;
  bool dump_clusters = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "Scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "Base seed (overrides the file)");
  cmd->add_option("--mode", args.mode,
                  "classical, learning_no_clusters, learning_clustered, a comma list or all");
  cmd->add_option("--out", args.out, "Output directory");
  cmd->add_flag("--trace", args.trace, "Write per-step learner trace to steps.csv");
  cmd->add_flag("--dump-clusters", args.dump_clusters,
                "Write similarity, spectrum and partition CSVs");
  cmd->add_option("--threads", args.threads, "Worker threads (0 = all cores)");
}

std::vector<scn::Mode> resolve_modes(const CommonArgs& args, const scn::LoadedConfig& loaded) {
  if (args.mode.empty()) return loaded.modes;
  if (args.mode == "all")
    return {scn::Mode::classical, scn::Mode::learning_no_clusters, scn::Mode::learning_clustered};
  std::vector<scn::Mode> modes;
  std::string item;
  for (std::size_t i = 0; i <= args.mode.size(); ++i) {
    if (i == args.mode.size() || args.mode[i] == ',') {
      modes.push_back(scn::parse_mode(item));
      item.clear();
    } else {
      item += args.mode[i];
    }
  }
  return modes;
}

int execute(const CommonArgs& args, const std::vector<std::string>& vary) {
  scn::LoadedConfig loaded = scn::load_config(args.config);
  if (args.seed) loaded.scenario.seed = *args.seed;
  const auto modes = resolve_modes(args, loaded);

  std::vector<scn::SweepAxis> axes;
  for (const auto& v : vary) axes.push_back(scn::parse_sweep_axis(v));

  scn::RunOptions options;
  options.threads = args.threads;
  options.keep_logs = args.trace;
  options.keep_dumps = args.dump_clusters;
  const auto results = scn::run_sweep(loaded.scenario, modes, axes, options);

  const std::filesystem::path out(args.out);
  std::filesystem::create_directories(out);
  {
    std::ofstream f(out / "summary.csv");
    scn::write_summary_csv(f, results);
  }
  {
    std::ofstream f(out / "energy_cdf.csv");
    scn::write_energy_cdf_csv(f, results);
  }
  if (args.trace) {
    std::ofstream f(out / "steps.csv");
    scn::write_steps_csv(f, results);
  }
  if (args.dump_clusters) scn::write_cluster_dumps(out, results);

  scn::write_summary_csv(std::cout, results);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-cell clustering and sleep-mode simulator"};
  app.require_subcommand(1);

  CommonArgs run_args;
  auto* run = app.add_subcommand("run", "Run one experiment");
  add_common(run, run_args);

  CommonArgs sweep_args;
  std::vector<std::string> vary;
  auto* sweep = app.add_subcommand("sweep", "Sweep parameters");
  add_common(sweep, sweep_args);
  sweep->add_option("--vary", vary, "key=start:stop:step or key=v1,v2,... (repeatable)")
      ->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return execute(run_args, {});
    return execute(sweep_args, vary);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
