#pragma once

// One Monte-Carlo run: the per-step loop over load broadcast, clustering,
// action sampling, association, scheduling, load fixed point, costs and
// learner updates.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "scn/association.hpp"
#include "scn/clustering.hpp"
#include "scn/learning.hpp"
#include "scn/netmodel.hpp"
#include "scn/scenario.hpp"

namespace scn {

struct ClusterStepRecord {
  std::vector<int> members;
  int head = 0;
  int action = -1;  // -1 when no learner (classical)
  double cost = 0.0;
  double utility = 0.0;
  bool penalized = false;
  int ue_count = 0;
  double pi_max = 1.0;
  double regret_max = 0.0;
  double regret_min = 0.0;
};

struct StepRecord {
  int t = 0;
  Eigen::VectorXi state;
  Eigen::VectorXd power;        // transmit power setting
  Eigen::VectorXd load;         // clamped
  Eigen::VectorXd total_power;  // consumed, W
  std::vector<ClusterStepRecord> clusters;
  double network_cost = 0.0;    // sum of cluster costs over small cells
  int uncovered_ues = 0;
  bool loads_converged = true;
};

/// Snapshot of one clustering epoch, kept when cluster dumps are requested.
struct ClusterDump {
  int epoch = 0;
  SimilarityGraph graph;
  ClusterPartition partition;
  std::vector<int> sbs_ids;
};

struct RunSummary {
  double mean_cost_per_bs = 0.0;
  double mean_energy_per_bs = 0.0;  // J over the measurement window
  double mean_load = 0.0;
  double cluster_count = 0.0;
  double mean_cluster_size = 0.0;
  double mean_uncovered = 0.0;
  double awake_fraction = 0.0;
  std::vector<double> bs_energy;  // per small cell, J over the window
  int state_changes = 0;          // on/off flips over the whole horizon
  int window_steps = 0;
};

class Simulation {
 public:
  Simulation(ScenarioConfig config, std::uint64_t run_seed, bool keep_dumps = false);
  Simulation(ScenarioConfig config, Network network, std::uint64_t run_seed,
             bool keep_dumps = false);

  void step();
  void run();

  const ScenarioConfig& config() const { return config_; }
  const Network& network() const { return net_; }
  const NetworkConfiguration& configuration() const { return cfg_; }
  const LoadEstimate& load_estimate() const { return est_; }
  const ClusterPartition& partition() const { return partition_; }
  const std::vector<std::unique_ptr<ClusterLearner>>& learners() const { return learners_; }
  const std::vector<StepRecord>& log() const { return log_; }
  const std::vector<ClusterDump>& dumps() const { return dumps_; }
  const std::vector<int>& serving() const { return serving_; }
  int time() const { return t_; }

  /// Summary over the post burn-in window.
  RunSummary summarize() const;

 private:
  void init_partition();
  void recluster();
  void assign_learners(const ClusterPartition& previous,
                       std::vector<std::unique_ptr<ClusterLearner>> old);
  ClusterLabels interference_labels() const;
  double penalty_cost(const std::vector<int>& members) const;

  ScenarioConfig config_;
  Network net_;
  Eigen::MatrixXd gains_;
  NetworkConfiguration cfg_;
  LoadEstimate est_;
  ClusterPartition partition_;
  std::vector<std::unique_ptr<ClusterLearner>> learners_;
  std::vector<double> power_levels_w_;
  std::vector<int> serving_;
  std::mt19937_64 rng_;
  std::vector<StepRecord> log_;
  std::vector<ClusterDump> dumps_;
  bool keep_dumps_ = false;
  int t_ = 0;
};

}  // namespace scn
