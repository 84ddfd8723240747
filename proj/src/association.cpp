#include "scn/association.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scn/errors.hpp"

namespace scn {

LoadEstimate LoadEstimate::zeros(int bs_count) {
  return {Eigen::VectorXd::Zero(bs_count), Eigen::VectorXd::Zero(bs_count)};
}

double association_score(double rho_hat, double delta, double power, bool active, double gain) {
  if (!active) return 0.0;
  const double headroom = std::clamp(1.0 - rho_hat, 0.0, 1.0);
  return std::pow(headroom, delta) * power * gain;
}

int associate(const Eigen::Ref<const Eigen::RowVectorXd>& gains, const NetworkConfiguration& cfg,
              const LoadEstimate& est, double delta, std::span<const int> candidates) {
  int best = -1;
  double best_score = 0.0;
  double best_rx = 0.0;
  auto consider = [&](int b) {
    if (cfg.active(b) == 0) return;
    const double rx = cfg.power(b) * gains(b);
    const double score = association_score(est.rho_hat(b), delta, cfg.power(b), true, gains(b));
    if (best < 0 || score > best_score || (score == best_score && rx > best_rx) ||
        (score == best_score && rx == best_rx && b < best)) {
      best = b;
      best_score = score;
      best_rx = rx;
    }
  };
  if (candidates.empty()) {
    for (int b = 0; b < cfg.size(); ++b) consider(b);
  } else {
    for (int b : candidates) consider(b);
  }
  if (best < 0) throw NoCoverage("no coverage: every candidate BS is asleep");
  return best;
}

LoadEstimate update_load_estimate(const LoadEstimate& est, const Eigen::VectorXd& rho_prev,
                                  double nu) {
  if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("load estimate rate must be in (0, 1]");
  LoadEstimate next;
  next.rho_hat = est.rho_hat + nu * (rho_prev - est.rho_hat);
  next.last_rho = rho_prev;
  return next;
}

LoadEstimate update_load_estimate(const LoadEstimate& est, const Eigen::VectorXd& rho_prev, int t,
                                  const PowerRate& nu) {
  if (t < 1) throw std::invalid_argument("load estimate step must be >= 1");
  return update_load_estimate(est, rho_prev, nu(t));
}

}  // namespace scn
