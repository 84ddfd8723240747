#include "scn/learning.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "scn/errors.hpp"

namespace scn {

std::vector<ClusterAction> build_action_set(std::span<const int> members,
                                            std::span<const double> power_levels,
                                            std::size_t cap) {
  if (members.empty()) throw std::invalid_argument("build_action_set: empty cluster");
  if (power_levels.empty()) throw std::invalid_argument("build_action_set: no power levels");

  std::vector<double> levels(power_levels.begin(), power_levels.end());
  std::sort(levels.begin(), levels.end());
  const std::size_t options = levels.size() + 1;

  std::size_t total = 1;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (total > cap / options)
      throw ActionSpaceTooLarge("action space of a " + std::to_string(members.size()) +
                                "-member cluster exceeds " + std::to_string(cap) +
                                " actions; reduce power levels or cluster size");
    total *= options;
  }

  std::vector<ClusterAction> actions;
  actions.reserve(total);
  for (std::size_t index = 0; index < total; ++index) {
    ClusterAction action(members.size());
    std::size_t rest = index;
    for (std::size_t j = members.size(); j-- > 0;) {
      const std::size_t choice = rest % options;
      rest /= options;
      const bool on = choice < levels.size();
      action[j] = {members[j], on ? levels[choice] : levels.back(), on};
    }
    actions.push_back(std::move(action));
  }
  return actions;
}

void apply_action(const ClusterAction& action, NetworkConfiguration& cfg) {
  for (const auto& m : action) {
    cfg.power(m.bs_id) = m.power;
    cfg.active(m.bs_id) = m.active ? 1 : 0;
  }
}

double bs_cost(const BaseStation& bs, const NetworkConfiguration& cfg, double raw_load,
               const CostParams& params) {
  const bool on = cfg.active(bs.id) != 0;
  const double load = on ? raw_load : 0.0;
  return params.alpha * total_power(bs, on, cfg.power(bs.id), load) + params.beta * load;
}

double cluster_cost(std::span<const int> members, std::span<const BaseStation> bss,
                    const NetworkConfiguration& cfg, const Eigen::VectorXd& raw_load,
                    const CostParams& params) {
  double cost = 0.0;
  for (int b : members)
    cost += bs_cost(bss[static_cast<std::size_t>(b)], cfg, raw_load(b), params);
  return cost;
}

ClusterLearner::ClusterLearner(std::vector<ClusterAction> actions, double kappa,
                               LearningRates rates)
    : actions_(std::move(actions)), kappa_(kappa), rates_(rates) {
  if (actions_.empty()) throw std::invalid_argument("ClusterLearner: no actions");
  const auto n = static_cast<Eigen::Index>(actions_.size());
  pi_ = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  u_hat_ = Eigen::VectorXd::Zero(n);
  r_hat_ = Eigen::VectorXd::Zero(n);
}

int ClusterLearner::sample(std::mt19937_64& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cdf = 0.0;
  const Eigen::Index n = pi_.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    cdf += pi_(i);
    if (u < cdf) return static_cast<int>(i);
  }
  // Rounding left u above the final partial sum: last action with mass.
  for (Eigen::Index i = n - 1; i > 0; --i)
    if (pi_(i) > 0.0) return static_cast<int>(i);
  return 0;
}

void ClusterLearner::update(int played, double utility) {
  const int t = t_ + 1;
  update(played, utility, rates_.utility(t), rates_.regret(t), rates_.strategy(t));
}

void ClusterLearner::update(int played, double utility, double tau, double iota,
                            double epsilon) {
  if (played < 0 || played >= pi_.size())
    throw std::out_of_range("ClusterLearner::update: action index out of range");
  ++t_;
  const double previous = last_utility_.value_or(utility);
  const Eigen::VectorXd bg = bg_distribution(r_hat_, kappa_);

  r_hat_ += iota * ((u_hat_.array() - previous).matrix() - r_hat_);
  u_hat_(played) += tau * (utility - u_hat_(played));
  pi_ += epsilon * (bg - pi_);
  pi_ = pi_.cwiseMax(0.0);
  pi_ /= pi_.sum();

  last_utility_ = utility;
}

}  // namespace scn
