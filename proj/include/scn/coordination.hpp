#pragma once

// Intra-cluster coordination: head election and the relaxed assignment LP
// that spreads a cluster's UEs over its active members.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scn/netmodel.hpp"

namespace scn {

/// Member with the largest load estimate; ties go to the lowest id.
/// `loads` is indexed like `members`. Throws std::invalid_argument when empty.
int elect_head(std::span<const int> members, const Eigen::VectorXd& loads);

struct Schedule {
  std::vector<int> bs_ids;     // rows
  std::vector<int> ue_ids;     // columns (indices into the UE set)
  Eigen::MatrixXd fractional;  // relaxed optimum, columns sum to 1
  Eigen::MatrixXi binary;      // rounded, one 1 per column
  double fractional_load = 0.0;
  double cluster_load = 0.0;   // sum of member loads under `binary`, unclamped
  bool overloaded = false;     // cluster_load > 1: time sharing infeasible

  /// Serving BS id for each UE column.
  std::vector<int> serving() const;
};

/// c_bm = traffic_m / R_b(x_m) for every member b and cluster UE m, with the
/// interference frozen at cfg.load. Sleeping members get +inf.
Eigen::MatrixXd load_costs(const ChannelModel& channel, const Eigen::MatrixXd& gains,
                           std::span<const UserEquipment> ues, std::span<const int> members,
                           std::span<const int> cluster_ues, const NetworkConfiguration& cfg,
                           const ClusterLabels& labels);

/// Standard-form data of the relaxed problem
///   minimize c'z  s.t.  sum_b z_bm = 1 for each m,  0 <= z <= 1,
/// with z_bm stored at index b + m * rows(costs).
struct AssignmentLp {
  Eigen::VectorXd objective;
  Eigen::MatrixXd equality_lhs;
  Eigen::VectorXd equality_rhs;
};

AssignmentLp relaxed_lp(const Eigen::MatrixXd& costs);

/// z_bm = 1 for the BS with the largest fractional share of column m (ties
/// to the lowest row).
Eigen::MatrixXi round_schedule(const Eigen::MatrixXd& fractional);

/// Solves the relaxed LP for a cluster. The constraints decouple per UE, so
/// the optimum puts each UE's unit mass on its cheapest finite-cost member
/// (lowest row on ties). Throws UncoveredUes if some UE has no finite cost.
Schedule solve_cluster_schedule(const Eigen::MatrixXd& costs, std::span<const int> bs_ids,
                                std::span<const int> ue_ids);

}  // namespace scn
