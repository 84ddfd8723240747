#include "scn/coordination.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "scn/errors.hpp"

namespace scn {

int elect_head(std::span<const int> members, const Eigen::VectorXd& loads) {
  if (members.empty()) throw std::invalid_argument("elect_head: empty cluster");
  std::size_t best = 0;
  for (std::size_t i = 1; i < members.size(); ++i) {
    const double li = loads(static_cast<Eigen::Index>(i));
    const double lb = loads(static_cast<Eigen::Index>(best));
    if (li > lb || (li == lb && members[i] < members[best])) best = i;
  }
  return members[best];
}

std::vector<int> Schedule::serving() const {
  std::vector<int> out(ue_ids.size(), -1);
  for (Eigen::Index m = 0; m < binary.cols(); ++m)
    for (Eigen::Index b = 0; b < binary.rows(); ++b)
      if (binary(b, m) == 1) out[static_cast<std::size_t>(m)] = bs_ids[static_cast<std::size_t>(b)];
  return out;
}

Eigen::MatrixXd load_costs(const ChannelModel& channel, const Eigen::MatrixXd& gains,
                           std::span<const UserEquipment> ues, std::span<const int> members,
                           std::span<const int> cluster_ues, const NetworkConfiguration& cfg,
                           const ClusterLabels& labels) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd costs(static_cast<Eigen::Index>(members.size()),
                        static_cast<Eigen::Index>(cluster_ues.size()));
  for (std::size_t b = 0; b < members.size(); ++b) {
    const int bs = members[b];
    for (std::size_t m = 0; m < cluster_ues.size(); ++m) {
      const int ue = cluster_ues[m];
      double c = inf;
      if (cfg.active(bs) != 0) {
        const double r = rate(channel, gains.row(ue), bs, cfg, labels);
        if (r > 0.0) c = ues[static_cast<std::size_t>(ue)].traffic_rate / r;
      }
      costs(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(m)) = c;
    }
  }
  return costs;
}

AssignmentLp relaxed_lp(const Eigen::MatrixXd& costs) {
  const Eigen::Index rows = costs.rows();
  const Eigen::Index cols = costs.cols();
  AssignmentLp lp;
  lp.objective = costs.reshaped();
  lp.equality_lhs = Eigen::MatrixXd::Zero(cols, rows * cols);
  for (Eigen::Index m = 0; m < cols; ++m) lp.equality_lhs.block(m, m * rows, 1, rows).setOnes();
  lp.equality_rhs = Eigen::VectorXd::Ones(cols);
  return lp;
}

Eigen::MatrixXi round_schedule(const Eigen::MatrixXd& fractional) {
  Eigen::MatrixXi binary = Eigen::MatrixXi::Zero(fractional.rows(), fractional.cols());
  for (Eigen::Index m = 0; m < fractional.cols(); ++m) {
    Eigen::Index best = 0;
    fractional.col(m).maxCoeff(&best);  // first maximum on ties
    binary(best, m) = 1;
  }
  return binary;
}

Schedule solve_cluster_schedule(const Eigen::MatrixXd& costs, std::span<const int> bs_ids,
                                std::span<const int> ue_ids) {
  Schedule s;
  s.bs_ids.assign(bs_ids.begin(), bs_ids.end());
  s.ue_ids.assign(ue_ids.begin(), ue_ids.end());
  s.fractional = Eigen::MatrixXd::Zero(costs.rows(), costs.cols());

  for (Eigen::Index m = 0; m < costs.cols(); ++m) {
    Eigen::Index best = -1;
    for (Eigen::Index b = 0; b < costs.rows(); ++b)
      if (std::isfinite(costs(b, m)) && (best < 0 || costs(b, m) < costs(best, m))) best = b;
    if (best < 0)
      throw UncoveredUes("uncovered UEs: no active cluster member can serve UE " +
                         std::to_string(ue_ids[static_cast<std::size_t>(m)]));
    s.fractional(best, m) = 1.0;
    s.fractional_load += costs(best, m);
  }

  s.binary = round_schedule(s.fractional);
  for (Eigen::Index m = 0; m < costs.cols(); ++m)
    for (Eigen::Index b = 0; b < costs.rows(); ++b)
      if (s.binary(b, m) == 1) s.cluster_load += costs(b, m);
  s.overloaded = s.cluster_load > 1.0;
  return s;
}

}  // namespace scn
