#include "scn/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scn/errors.hpp"

namespace scn {

double ChannelModel::noise_power_w() const {
  return std::pow(10.0, (noise_psd_dbm_hz - 30.0) / 10.0) * bandwidth_hz;
}

double pathloss_db(BsKind kind, double distance_m) {
  const double d_km = distance_m / 1000.0;
  const double intercept = kind == BsKind::macro ? 128.1 : 140.7;
  return intercept + 37.6 * std::log10(d_km);
}

double channel_gain(const ChannelModel& channel, const BaseStation& bs, const Position& x) {
  const double floor_m =
      bs.kind == BsKind::macro ? channel.min_distance_macro_m : channel.min_distance_small_m;
  const double d = std::max((bs.position - x).norm(), floor_m);
  double gain = std::pow(10.0, -pathloss_db(bs.kind, d) / 10.0);
  if (channel.fading) gain *= channel.fading(bs, x);
  return std::min(gain, 1.0);
}

Eigen::MatrixXd gain_matrix(const ChannelModel& channel, std::span<const BaseStation> bss,
                            std::span<const UserEquipment> ues) {
  Eigen::MatrixXd gains(static_cast<Eigen::Index>(ues.size()),
                        static_cast<Eigen::Index>(bss.size()));
  for (std::size_t m = 0; m < ues.size(); ++m)
    for (std::size_t b = 0; b < bss.size(); ++b)
      gains(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(b)) =
          channel_gain(channel, bss[b], ues[m].position);
  return gains;
}

NetworkConfiguration NetworkConfiguration::all_active(std::span<const BaseStation> bss) {
  NetworkConfiguration cfg;
  const auto n = static_cast<Eigen::Index>(bss.size());
  cfg.power.resize(n);
  for (Eigen::Index b = 0; b < n; ++b) cfg.power(b) = bss[static_cast<std::size_t>(b)].p_max;
  cfg.active = Eigen::VectorXi::Ones(n);
  cfg.load = Eigen::VectorXd::Zero(n);
  return cfg;
}

ClusterLabels distinct_labels(int bs_count) {
  ClusterLabels labels(static_cast<std::size_t>(bs_count));
  for (int b = 0; b < bs_count; ++b) labels[static_cast<std::size_t>(b)] = b;
  return labels;
}

namespace {

bool orthogonal(const ClusterLabels& labels, int a, int b) {
  const int la = labels[static_cast<std::size_t>(a)];
  return la >= 0 && la == labels[static_cast<std::size_t>(b)];
}

double interference(const Eigen::Ref<const Eigen::RowVectorXd>& gains, int serving,
                    const NetworkConfiguration& cfg, const Eigen::VectorXd& load,
                    const ClusterLabels& labels) {
  double sum = 0.0;
  for (Eigen::Index b = 0; b < gains.size(); ++b) {
    const int bi = static_cast<int>(b);
    if (bi == serving || cfg.active(b) == 0 || orthogonal(labels, serving, bi)) continue;
    sum += load(b) * cfg.power(b) * gains(b);
  }
  return sum;
}

double rate_with_load(const ChannelModel& channel,
                      const Eigen::Ref<const Eigen::RowVectorXd>& gains, int serving,
                      const NetworkConfiguration& cfg, const Eigen::VectorXd& load,
                      const ClusterLabels& labels) {
  const double signal = cfg.power(serving) * gains(serving);
  const double denom = interference(gains, serving, cfg, load, labels) + channel.noise_power_w();
  return channel.bandwidth_hz * std::log2(1.0 + signal / denom);
}

}  // namespace

double rate(const ChannelModel& channel, const Eigen::Ref<const Eigen::RowVectorXd>& gains,
            int serving, const NetworkConfiguration& cfg, const ClusterLabels& labels) {
  if (cfg.active(serving) == 0)
    throw InactiveServer("inactive server: BS " + std::to_string(serving) + " is asleep");
  const Eigen::VectorXd load = cfg.load.cwiseMax(0.0).cwiseMin(1.0);
  return rate_with_load(channel, gains, serving, cfg, load, labels);
}

double rate(const ChannelModel& channel, std::span<const BaseStation> bss, const Position& x,
            int serving, const NetworkConfiguration& cfg, const ClusterLabels& labels) {
  Eigen::RowVectorXd gains(static_cast<Eigen::Index>(bss.size()));
  for (std::size_t b = 0; b < bss.size(); ++b)
    gains(static_cast<Eigen::Index>(b)) = channel_gain(channel, bss[b], x);
  return rate(channel, gains, serving, cfg, labels);
}

LoadSolution compute_loads(const ChannelModel& channel, const Eigen::MatrixXd& gains,
                           std::span<const UserEquipment> ues, std::span<const int> serving,
                           const NetworkConfiguration& cfg, const ClusterLabels& labels,
                           const LoadSolverOptions& options) {
  const Eigen::Index n = cfg.size();
  for (std::size_t m = 0; m < ues.size(); ++m) {
    const int b = serving[m];
    if (b >= 0 && cfg.active(b) == 0)
      throw InactiveServer("inactive server: UE " + std::to_string(ues[m].id) +
                           " assigned to sleeping BS " + std::to_string(b));
  }

  // Raw load implied by interference at `load`.
  auto sweep = [&](const Eigen::VectorXd& load) {
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(n);
    for (std::size_t m = 0; m < ues.size(); ++m) {
      const int b = serving[m];
      if (b < 0) continue;
      const double r = rate_with_load(channel, gains.row(static_cast<Eigen::Index>(m)), b, cfg,
                                      load, labels);
      raw(b) += r > 0.0 ? ues[m].traffic_rate / r : std::numeric_limits<double>::infinity();
    }
    return raw;
  };

  LoadSolution sol;
  Eigen::VectorXd rho = cfg.load.cwiseMax(0.0).cwiseMin(1.0);
  for (sol.iterations = 1; sol.iterations <= options.max_iterations; ++sol.iterations) {
    const Eigen::VectorXd target = sweep(rho).cwiseMin(1.0);
    const double residual = (target - rho).cwiseAbs().maxCoeff();
    if (residual < options.tolerance) {
      rho = target;
      sol.converged = true;
      break;
    }
    rho = (1.0 - options.damping) * rho + options.damping * target;
  }
  sol.iterations = std::min(sol.iterations, options.max_iterations);
  sol.load = rho;
  sol.raw = sweep(rho);
  return sol;
}

double total_power(const BaseStation& bs, bool active, double power, double load) {
  if (!active) return bs.p_idle;
  return std::clamp(load, 0.0, 1.0) * power + bs.q * bs.p_idle;
}

double total_power(const BaseStation& bs, const NetworkConfiguration& cfg) {
  const auto b = static_cast<Eigen::Index>(bs.id);
  return total_power(bs, cfg.active(b) != 0, cfg.power(b), cfg.load(b));
}

bool within_power_budget(const BaseStation& bs, const NetworkConfiguration& cfg) {
  return total_power(bs, cfg) <= bs.p_max;
}

}  // namespace scn
