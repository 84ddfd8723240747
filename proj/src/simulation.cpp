#include "scn/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "scn/coordination.hpp"
#include "scn/errors.hpp"

namespace scn {

namespace {

ClusterPartition singletons(int sbs_count) {
  ClusterPartition p;
  for (int b = 1; b <= sbs_count; ++b) {
    p.clusters.push_back({b});
    p.heads.push_back(b);
  }
  return p;
}

// Largest cluster whose action space fits under the cap.
int max_cluster_size(std::size_t levels, std::size_t cap) {
  int size = 0;
  std::size_t total = 1;
  while (total <= cap / (levels + 1)) {
    total *= levels + 1;
    ++size;
  }
  return std::max(size, 1);
}

}  // namespace

Simulation::Simulation(ScenarioConfig config, std::uint64_t run_seed, bool keep_dumps)
    : config_(std::move(config)), keep_dumps_(keep_dumps) {
  config_.validate();
  auto layout = layout_rng(run_seed);
  net_ = generate_scenario(config_, layout);
  rng_ = dynamics_rng(run_seed);
  init_partition();
}

Simulation::Simulation(ScenarioConfig config, Network network, std::uint64_t run_seed,
                       bool keep_dumps)
    : config_(std::move(config)), net_(std::move(network)), keep_dumps_(keep_dumps) {
  config_.validate();
  rng_ = dynamics_rng(run_seed);
  init_partition();
}

void Simulation::init_partition() {
  gains_ = gain_matrix(config_.channel, net_.bss, net_.ues);
  cfg_ = NetworkConfiguration::all_active(net_.bss);
  est_ = LoadEstimate::zeros(static_cast<int>(net_.bss.size()));
  serving_.assign(net_.ues.size(), -1);
  const double sbs_p_max = dbm_to_watts(config_.power.sbs_p_max_dbm);
  power_levels_w_.clear();
  for (double f : config_.learning.power_levels) power_levels_w_.push_back(f * sbs_p_max);

  partition_ = singletons(net_.sbs_count());
  learners_.clear();
  if (config_.mode == Mode::learning_no_clusters) {
    for (const auto& c : partition_.clusters)
      learners_.push_back(std::make_unique<ClusterLearner>(
          build_action_set(c, power_levels_w_, config_.learning.action_cap),
          config_.learning.kappa, config_.learning.rates));
  }
}

ClusterLabels Simulation::interference_labels() const {
  const int n = static_cast<int>(net_.bss.size());
  if (config_.mode != Mode::learning_clustered) return distinct_labels(n);
  return partition_.labels(n);  // macro stays -1: never orthogonal
}

double Simulation::penalty_cost(const std::vector<int>& members) const {
  const auto& c = config_.learning.cost;
  double cost = 0.0;
  for (int b : members) cost += c.alpha * net_.bss[static_cast<std::size_t>(b)].p_max + c.beta;
  return cost;
}

void Simulation::recluster() {
  const int n = net_.sbs_count();
  if (n == 0) return;
  Eigen::Matrix2Xd positions(2, n);
  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    positions.col(i) = net_.bss[static_cast<std::size_t>(i + 1)].position;
    ids[static_cast<std::size_t>(i)] = i + 1;
  }
  const Eigen::VectorXd loads = est_.rho_hat.segment(1, n);
  const auto& cc = config_.clustering;
  SimilarityGraph graph = build_similarity_graph(positions, loads, cc.similarity);

  SpectralOptions options;
  options.laplacian = cc.similarity.laplacian;
  options.kmeans.restarts = cc.kmeans_restarts;
  ClusterPartition next = spectral_cluster(graph.s_joint, ids, loads, rng_, options).partition;

  // Split clusters whose joint action space would exceed the cap.
  const int limit = max_cluster_size(power_levels_w_.size(), config_.learning.action_cap);
  for (bool again = true; again;) {
    again = false;
    ClusterPartition split;
    for (std::size_t c = 0; c < next.clusters.size(); ++c) {
      const auto& members = next.clusters[c];
      if (static_cast<int>(members.size()) <= limit) {
        split.clusters.push_back(members);
        split.heads.push_back(next.heads[c]);
        continue;
      }
      again = true;
      const auto m = static_cast<Eigen::Index>(members.size());
      Eigen::MatrixXd sub(m, m);
      Eigen::VectorXd sub_loads(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        sub_loads(i) = loads(members[static_cast<std::size_t>(i)] - 1);
        for (Eigen::Index j = 0; j < m; ++j)
          sub(i, j) = graph.s_joint(members[static_cast<std::size_t>(i)] - 1,
                                    members[static_cast<std::size_t>(j)] - 1);
      }
      SpectralOptions sub_options = options;
      sub_options.k = static_cast<int>((members.size() + static_cast<std::size_t>(limit) - 1) /
                                       static_cast<std::size_t>(limit));
      auto parts = spectral_cluster(sub, members, sub_loads, rng_, sub_options).partition;
      for (std::size_t p = 0; p < parts.clusters.size(); ++p) {
        split.clusters.push_back(parts.clusters[p]);
        split.heads.push_back(parts.heads[p]);
      }
    }
    canonicalize(split);
    next = std::move(split);
  }
  next.epoch = t_;

  if (keep_dumps_) dumps_.push_back({t_, graph, next, ids});

  ClusterPartition previous = std::move(partition_);
  partition_ = std::move(next);
  assign_learners(previous, std::move(learners_));
}

void Simulation::assign_learners(const ClusterPartition& previous,
                                 std::vector<std::unique_ptr<ClusterLearner>> old) {
  learners_.clear();
  for (const auto& members : partition_.clusters) {
    std::unique_ptr<ClusterLearner> kept;
    for (std::size_t c = 0; c < previous.clusters.size() && c < old.size(); ++c)
      if (previous.clusters[c] == members && old[c]) {
        kept = std::move(old[c]);
        break;
      }
    if (!kept)
      kept = std::make_unique<ClusterLearner>(
          build_action_set(members, power_levels_w_, config_.learning.action_cap),
          config_.learning.kappa, config_.learning.rates);
    learners_.push_back(std::move(kept));
  }
}

void Simulation::step() {
  ++t_;
  const Mode mode = config_.mode;
  const auto ue_count = net_.ues.size();

  // (1) advertised load estimates track last step's loads.
  if (t_ > 1) est_ = update_load_estimate(est_, cfg_.load, t_, config_.association.nu);

  // (2) periodic re-clustering.
  if (mode == Mode::learning_clustered && (t_ - 1) % config_.clustering.recluster_period == 0)
    recluster();

  // (3) each cluster draws its action.
  const std::size_t cluster_count = partition_.clusters.size();
  std::vector<int> played(cluster_count, -1);
  cfg_.active(0) = 1;
  cfg_.power(0) = net_.bss[0].p_max;
  if (mode == Mode::classical) {
    for (std::size_t b = 1; b < net_.bss.size(); ++b) {
      cfg_.active(static_cast<Eigen::Index>(b)) = 1;
      cfg_.power(static_cast<Eigen::Index>(b)) = net_.bss[b].p_max;
    }
  } else {
    for (std::size_t c = 0; c < cluster_count; ++c) {
      played[c] = learners_[c]->sample(rng_);
      apply_action(learners_[c]->actions()[static_cast<std::size_t>(played[c])], cfg_);
    }
  }

  // (4) association against the advertised powers and load estimates picks
  // each UE's coverage cell; SBS-covered UEs belong to that cell's cluster.
  const double delta = mode == Mode::classical ? 0.0 : config_.association.delta;
  NetworkConfiguration advertised = cfg_;
  advertised.active.setOnes();
  const std::vector<int> cluster_of = partition_.labels(static_cast<int>(net_.bss.size()));
  std::vector<std::vector<int>> cluster_ues(cluster_count);
  serving_.assign(ue_count, -1);
  for (std::size_t m = 0; m < ue_count; ++m) {
    const int home = associate(gains_.row(static_cast<Eigen::Index>(m)), advertised, est_, delta);
    const int c = cluster_of[static_cast<std::size_t>(home)];
    if (c < 0)
      serving_[m] = home;
    else
      cluster_ues[static_cast<std::size_t>(c)].push_back(static_cast<int>(m));
  }

  // (5) intra-cluster scheduling with interference frozen at last loads.
  const ClusterLabels labels = interference_labels();
  std::vector<bool> uncovered(cluster_count, false);
  StepRecord rec;
  rec.t = t_;
  for (std::size_t c = 0; c < cluster_count; ++c) {
    if (cluster_ues[c].empty()) continue;
    const auto& members = partition_.clusters[c];
    const Eigen::MatrixXd costs =
        load_costs(config_.channel, gains_, net_.ues, members, cluster_ues[c], cfg_, labels);
    try {
      const Schedule schedule = solve_cluster_schedule(costs, members, cluster_ues[c]);
      const std::vector<int> servers = schedule.serving();
      for (std::size_t j = 0; j < cluster_ues[c].size(); ++j)
        serving_[static_cast<std::size_t>(cluster_ues[c][j])] = servers[j];
    } catch (const UncoveredUes&) {
      uncovered[c] = true;
      rec.uncovered_ues += static_cast<int>(cluster_ues[c].size());
    }
  }
  for (std::size_t m = 0; m < ue_count; ++m)
    net_.ues[m].serving_bs =
        serving_[m] >= 0 ? std::optional<int>(serving_[m]) : std::optional<int>();

  // (6) load/rate fixed point, warm-started from last loads.
  NetworkConfiguration start = cfg_;
  for (Eigen::Index b = 0; b < start.size(); ++b)
    if (start.active(b) == 0) start.load(b) = 0.0;
  const LoadSolution sol = compute_loads(config_.channel, gains_, net_.ues, serving_, start, labels,
                                         config_.load_solver);
  cfg_.load = sol.load;
  rec.loads_converged = sol.converged;

  // (7) costs and utilities; (8) learner updates.
  const auto& params = config_.learning.cost;
  for (std::size_t c = 0; c < cluster_count; ++c) {
    const auto& members = partition_.clusters[c];
    ClusterStepRecord cr;
    cr.members = members;
    cr.head = partition_.heads[c];
    cr.action = played[c];
    cr.ue_count = static_cast<int>(cluster_ues[c].size());
    bool over_budget = false;
    for (int b : members)
      if (!within_power_budget(net_.bss[static_cast<std::size_t>(b)], cfg_)) over_budget = true;
    cr.penalized = uncovered[c] || over_budget;
    cr.cost = cr.penalized ? penalty_cost(members)
                           : cluster_cost(members, net_.bss, cfg_, sol.raw, params);
    cr.utility = -cr.cost;
    if (mode != Mode::classical) {
      auto& learner = *learners_[c];
      learner.update(played[c], cr.utility);
      cr.pi_max = learner.pi().maxCoeff();
      cr.regret_max = learner.regrets().maxCoeff();
      cr.regret_min = learner.regrets().minCoeff();
    }
    rec.network_cost += cr.cost;
    rec.clusters.push_back(std::move(cr));
  }

  // (9) metrics.
  rec.state = cfg_.active;
  rec.power = cfg_.power;
  rec.load = cfg_.load;
  rec.total_power.resize(cfg_.size());
  for (std::size_t b = 0; b < net_.bss.size(); ++b)
    rec.total_power(static_cast<Eigen::Index>(b)) = total_power(net_.bss[b], cfg_);
  log_.push_back(std::move(rec));
}

void Simulation::run() {
  while (t_ < config_.steps) step();
}

RunSummary Simulation::summarize() const {
  RunSummary s;
  const int n = net_.sbs_count();
  const auto burn_in = static_cast<int>(std::floor(config_.burn_in_fraction * config_.steps));
  s.bs_energy.assign(static_cast<std::size_t>(n), 0.0);

  for (std::size_t i = 1; i < log_.size(); ++i)
    for (int b = 1; b <= n; ++b)
      if (log_[i].state(b) != log_[i - 1].state(b)) ++s.state_changes;

  for (const auto& rec : log_) {
    if (rec.t <= burn_in) continue;
    ++s.window_steps;
    if (n == 0) continue;
    s.mean_cost_per_bs += rec.network_cost / n;
    s.mean_uncovered += rec.uncovered_ues;
    s.cluster_count += static_cast<double>(rec.clusters.size());
    s.mean_cluster_size += rec.clusters.empty() ? 0.0 : static_cast<double>(n) / rec.clusters.size();
    for (int b = 1; b <= n; ++b) {
      s.bs_energy[static_cast<std::size_t>(b - 1)] += rec.total_power(b) * config_.step_duration_s;
      s.mean_load += rec.load(b) / n;
      s.awake_fraction += static_cast<double>(rec.state(b)) / n;
    }
  }
  if (s.window_steps > 0) {
    const double w = s.window_steps;
    s.mean_cost_per_bs /= w;
    s.mean_uncovered /= w;
    s.cluster_count /= w;
    s.mean_cluster_size /= w;
    s.mean_load /= w;
    s.awake_fraction /= w;
  }
  for (double e : s.bs_energy) s.mean_energy_per_bs += e;
  if (n > 0) s.mean_energy_per_bs /= n;
  return s;
}

}  // namespace scn
