#pragma once

// Load-aware UE association and the slow-timescale load estimate that BSs
// advertise.

#include <span>

#include <Eigen/Dense>

#include "scn/netmodel.hpp"
#include "scn/rates.hpp"

namespace scn {

struct AssociationConfig {
  double delta = 1.0;             // load aversion; 0 gives RSSI association
  PowerRate nu{.exponent = 0.9};  // load-estimate learning rate
};

struct LoadEstimate {
  Eigen::VectorXd rho_hat;
  Eigen::VectorXd last_rho;

  static LoadEstimate zeros(int bs_count);
};

/// Association score (1 - rho_hat)^delta * P * I * h.
double association_score(double rho_hat, double delta, double power, bool active, double gain);

/// Picks argmax of the association score among `candidates` (all BSs when
/// empty). Sleeping BSs are never chosen; ties go to the stronger received
/// power, then the lowest id. Throws NoCoverage if every candidate sleeps.
int associate(const Eigen::Ref<const Eigen::RowVectorXd>& gains, const NetworkConfiguration& cfg,
              const LoadEstimate& est, double delta, std::span<const int> candidates = {});

/// rho_hat(t) = rho_hat(t-1) + nu(t) (rho(t-1) - rho_hat(t-1)).
LoadEstimate update_load_estimate(const LoadEstimate& est, const Eigen::VectorXd& rho_prev,
                                  double nu);
LoadEstimate update_load_estimate(const LoadEstimate& est, const Eigen::VectorXd& rho_prev, int t,
                                  const PowerRate& nu);

}  // namespace scn
