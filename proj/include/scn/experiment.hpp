#pragma once

// Monte-Carlo aggregation, parameter sweeps and CSV output.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "scn/scenario.hpp"
#include "scn/simulation.hpp"

namespace scn {

struct RunOptions {
  int threads = 0;             // 0: hardware concurrency
  bool keep_logs = false;      // retain per-step logs (tracing)
  bool keep_dumps = false;     // retain clustering snapshots
};

struct RunArtifacts {
  RunSummary summary;
  std::vector<StepRecord> log;
  std::vector<ClusterDump> dumps;
};

struct ExperimentResult {
  ScenarioConfig config;
  std::vector<RunArtifacts> runs;  // in run-index order
  double mean_cost_per_bs = 0.0;
  double cost_ci95 = 0.0;  // half-width over run means
  double mean_energy_per_bs = 0.0;
  double mean_load = 0.0;
  double cluster_count = 0.0;
  double mean_cluster_size = 0.0;
  std::vector<double> energy_samples;  // one per small cell per run
};

/// Runs config.runs independent runs with seeds seed + r. Runs may execute
/// on a thread pool; results are merged in run order, so output does not
/// depend on scheduling.
ExperimentResult run_experiment(const ScenarioConfig& config, const RunOptions& options = {});

/// Half-width of the normal 95% interval of the mean of `values`.
double ci95(const std::vector<double>& values);

/// One axis of a sweep: a config key and the values it takes.
struct SweepAxis {
  std::string key;  // ues, sbs, eps_d, theta or delta
  std::vector<double> values;
};

/// Parses "ues=10:75:5" (inclusive range) or "theta=0,0.5,1".
SweepAxis parse_sweep_axis(const std::string& text);

/// Applies one axis value to a config.
void apply_sweep_value(ScenarioConfig& config, const std::string& key, double value);

/// Cartesian product of the axes (first axis varies slowest), each point
/// run for every mode.
std::vector<ExperimentResult> run_sweep(const ScenarioConfig& base, const std::vector<Mode>& modes,
                                        const std::vector<SweepAxis>& axes,
                                        const RunOptions& options = {});

/// summary.csv: one row per experiment.
void write_summary_csv(std::ostream& out, const std::vector<ExperimentResult>& results);

/// energy_cdf.csv: per mode, the pooled per-BS energies with their
/// empirical CDF values.
void write_energy_cdf_csv(std::ostream& out, const std::vector<ExperimentResult>& results);

/// steps.csv: per-step, per-cluster learner trace.
void write_steps_csv(std::ostream& out, const std::vector<ExperimentResult>& results);

/// Similarity, spectrum and partition snapshots.
void write_cluster_dumps(const std::filesystem::path& dir,
                         const std::vector<ExperimentResult>& results);

/// Empirical quantile (type 7, linear interpolation) of `samples`.
double quantile(std::vector<double> samples, double p);

}  // namespace scn
