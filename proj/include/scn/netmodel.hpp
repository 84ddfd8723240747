#pragma once

// Downlink physical layer and power model: path loss, SINR rate, the
// load/rate fixed point and state dependent power consumption.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace scn {

using Position = Eigen::Vector2d;

enum class BsKind { macro, small };

/// A base station. Throughout the library a BS id equals its index in the
/// network's BS vector; the macro cell, when present, is index 0.
struct BaseStation {
  int id = 0;
  BsKind kind = BsKind::small;
  Position position = Position::Zero();
  double p_max = 1.0;   // W
  double p_idle = 0.1;  // W, baseband power while asleep
  double q = 1.6;       // activation overhead, q > 1
  bool never_sleeps = false;
};

struct UserEquipment {
  int id = 0;
  Position position = Position::Zero();
  double traffic_rate = 180e3;  // bit/s
  std::optional<int> serving_bs;
};

struct ChannelModel {
  double bandwidth_hz = 10e6;
  double noise_psd_dbm_hz = -174.0;
  double min_distance_macro_m = 35.0;
  double min_distance_small_m = 10.0;
  // Optional multiplicative gain (shadowing/fading); unset means 1.
  std::function<double(const BaseStation&, const Position&)> fading;

  double noise_power_w() const;
};

/// Path loss in dB at distance_m meters (formulas take d in km).
double pathloss_db(BsKind kind, double distance_m);

/// Linear channel gain in (0, 1]; distances below the minimum BS-UE
/// distance are clamped to it.
double channel_gain(const ChannelModel& channel, const BaseStation& bs, const Position& x);

/// Gains for every (UE, BS) pair, rows are UEs.
Eigen::MatrixXd gain_matrix(const ChannelModel& channel, std::span<const BaseStation> bss,
                            std::span<const UserEquipment> ues);

/// Per-BS transmit power P, on/off state I and load rho.
struct NetworkConfiguration {
  Eigen::VectorXd power;
  Eigen::VectorXi active;
  Eigen::VectorXd load;

  static NetworkConfiguration all_active(std::span<const BaseStation> bss);
  int size() const { return static_cast<int>(power.size()); }
};

/// Cluster label per BS. Transmitters sharing a non-negative label with the
/// serving BS are time-orthogonal to it and do not interfere.
using ClusterLabels = std::vector<int>;

/// Every BS in its own group: the full interference sum.
ClusterLabels distinct_labels(int bs_count);

/// Achievable rate at a UE with gains `gains` (one entry per BS) from
/// `serving`. Interferers contribute rho * P * I * h. Throws InactiveServer
/// if the serving BS is asleep.
double rate(const ChannelModel& channel, const Eigen::Ref<const Eigen::RowVectorXd>& gains,
            int serving, const NetworkConfiguration& cfg, const ClusterLabels& labels);

double rate(const ChannelModel& channel, std::span<const BaseStation> bss, const Position& x,
            int serving, const NetworkConfiguration& cfg, const ClusterLabels& labels);

struct LoadSolverOptions {
  double damping = 0.5;
  double tolerance = 1e-6;
  int max_iterations = 200;
};

struct LoadSolution {
  Eigen::VectorXd load;  // clamped to [0, 1]
  Eigen::VectorXd raw;   // unclamped, used for cost accounting
  bool converged = false;
  int iterations = 0;
};

/// Solves rho_b = sum_{m served by b} traffic_m / R_b(x_m; rho) by damped
/// fixed-point iteration starting from cfg.load. `serving[m] < 0` marks an
/// unserved UE. On convergence the load is the final clamped sweep;
/// otherwise the last iterate is returned with converged == false.
LoadSolution compute_loads(const ChannelModel& channel, const Eigen::MatrixXd& gains,
                           std::span<const UserEquipment> ues, std::span<const int> serving,
                           const NetworkConfiguration& cfg, const ClusterLabels& labels,
                           const LoadSolverOptions& options = {});

/// Power drawn by `bs`: p_idle asleep, rho * P + q * p_idle awake.
double total_power(const BaseStation& bs, bool active, double power, double load);
double total_power(const BaseStation& bs, const NetworkConfiguration& cfg);

/// P_total <= P_max for the BS under cfg.
bool within_power_budget(const BaseStation& bs, const NetworkConfiguration& cfg);

}  // namespace scn
