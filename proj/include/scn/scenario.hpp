#pragma once

// Scenario description and the random network drop.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "scn/association.hpp"
#include "scn/clustering.hpp"
#include "scn/learning.hpp"
#include "scn/netmodel.hpp"

namespace scn {

enum class Mode { classical, learning_no_clusters, learning_clustered };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct LayoutConfig {
  double width_m = 1000.0;
  double height_m = 1000.0;
  int sbs_count = 10;
  int ue_count = 50;
  double min_mbs_sbs_m = 75.0;
  double min_mbs_ue_m = 35.0;
  double min_sbs_sbs_m = 40.0;
  double min_sbs_ue_m = 10.0;
};

struct PowerConfig {
  double macro_p_max_dbm = 46.0;
  double sbs_p_max_dbm = 30.0;
  double macro_p_idle_w = 1.0;
  double sbs_p_idle_w = 0.05;
  double macro_q = 1.6;
  double sbs_q = 10.0;
};

struct ClusteringConfig {
  SimilarityConfig similarity;
  int recluster_period = 50;  // steps
  int kmeans_restarts = 10;
};

struct LearningConfig {
  CostParams cost;
  double kappa = 10.0;
  LearningRates rates;
  std::vector<double> power_levels{1.0};  // fractions of the SBS maximum power
  std::size_t action_cap = 1024;
};

struct ScenarioConfig {
  LayoutConfig layout;
  ChannelModel channel;
  PowerConfig power;
  double traffic_bps = 180e3;
  ClusteringConfig clustering;
  AssociationConfig association;
  LearningConfig learning;
  LoadSolverOptions load_solver;
  Mode mode = Mode::learning_clustered;
  int steps = 400;
  int runs = 20;
  std::uint64_t seed = 1;
  double burn_in_fraction = 0.3;
  double step_duration_s = 1.0;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct Network {
  std::vector<BaseStation> bss;  // index 0 is the macro cell
  std::vector<UserEquipment> ues;

  int sbs_count() const { return static_cast<int>(bss.size()) - 1; }
};

double dbm_to_watts(double dbm);

/// Macro at the layout center, then small cells, then UEs, each drawn
/// uniformly and redrawn until the minimum distances hold. UEs are drawn
/// last, so the first n UEs of a seed do not depend on the UE count.
/// Throws InfeasibleDensity after 10 000 rejected draws for one node.
Network generate_scenario(const ScenarioConfig& config, std::mt19937_64& rng);

/// RNG streams derived from a run seed: one for the drop, one for dynamics.
std::mt19937_64 layout_rng(std::uint64_t run_seed);
std::mt19937_64 dynamics_rng(std::uint64_t run_seed);

}  // namespace scn
