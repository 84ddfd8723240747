#pragma once

// The cluster game: action sets, costs, and the regret-based learner that
// drives each cluster's mixed strategy.

#include <cmath>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scn/netmodel.hpp"
#include "scn/rates.hpp"

namespace scn {

struct MemberSetting {
  int bs_id = 0;
  double power = 0.0;  // W; meaningless while asleep
  bool active = false;

  bool operator==(const MemberSetting&) const = default;
};

/// One configuration per cluster member, ordered like the member list.
using ClusterAction = std::vector<MemberSetting>;

/// Cartesian product over members of {(P, on) for each level} plus (off).
/// The first member varies slowest; per member, levels ascend and sleep is
/// last. Throws ActionSpaceTooLarge when (levels + 1)^|C| exceeds `cap`.
std::vector<ClusterAction> build_action_set(std::span<const int> members,
                                            std::span<const double> power_levels,
                                            std::size_t cap = 1024);

/// Writes an action's powers and states into cfg.
void apply_action(const ClusterAction& action, NetworkConfiguration& cfg);

struct CostParams {
  double alpha = 0.5;  // 1/W
  double beta = 0.5;
};

/// Per-BS cost alpha * P_total + beta * rho with the unclamped load `raw_load`.
double bs_cost(const BaseStation& bs, const NetworkConfiguration& cfg, double raw_load,
               const CostParams& params);

/// Sum of member costs; the cluster utility is its negative.
double cluster_cost(std::span<const int> members, std::span<const BaseStation> bss,
                    const NetworkConfiguration& cfg, const Eigen::VectorXd& raw_load,
                    const CostParams& params);

/// Boltzmann-Gibbs distribution over positive regrets:
/// G_i = exp(kappa r_i^+) / sum_j exp(kappa r_j^+), stabilized by subtracting
/// the maximum exponent.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> bg_distribution(
    const Eigen::MatrixBase<Derived>& regrets, typename Derived::Scalar kappa) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Vec z = kappa * regrets.derived().cwiseMax(Scalar(0));
  const Vec w = (z.array() - z.maxCoeff()).exp().matrix();
  return w / w.sum();
}

struct LearningRates {
  PowerRate utility{.exponent = 0.6};   // tau
  PowerRate regret{.exponent = 0.7};    // iota
  PowerRate strategy{.exponent = 0.8};  // epsilon
};

/// Per-cluster learner state: utility and regret estimates per action and
/// the mixed strategy pi. Starts with uniform pi and zero estimates.
class ClusterLearner {
 public:
  ClusterLearner(std::vector<ClusterAction> actions, double kappa, LearningRates rates = {});

  const std::vector<ClusterAction>& actions() const { return actions_; }
  const Eigen::VectorXd& pi() const { return pi_; }
  const Eigen::VectorXd& utility_estimates() const { return u_hat_; }
  const Eigen::VectorXd& regrets() const { return r_hat_; }
  double kappa() const { return kappa_; }
  int steps() const { return t_; }
  std::size_t size() const { return actions_.size(); }

  /// Inverse-CDF draw from pi.
  int sample(std::mt19937_64& rng) const;

  /// One step of the coupled recursions after playing `played` and observing
  /// `utility`. Every right-hand side uses the previous step's values: the
  /// utility estimate of the played action moves toward `utility`, every
  /// regret moves toward u_hat_i - u(t-1) (the utility observed at the
  /// previous call; the current one on the first call) and pi moves toward
  /// the BG distribution of the previous regrets.
  void update(int played, double utility);

  /// Same with explicit step sizes; used by the step-size edge-case tests.
  void update(int played, double utility, double tau, double iota, double epsilon);

 private:
  std::vector<ClusterAction> actions_;
  double kappa_;
  LearningRates rates_;
  Eigen::VectorXd pi_;
  Eigen::VectorXd u_hat_;
  Eigen::VectorXd r_hat_;
  std::optional<double> last_utility_;
  int t_ = 0;
};

}  // namespace scn
