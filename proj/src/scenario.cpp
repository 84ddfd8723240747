#include "scn/scenario.hpp"

#include <cmath>
#include <string>

#include "scn/errors.hpp"

namespace scn {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::classical: return "classical";
    case Mode::learning_no_clusters: return "learning_no_clusters";
    case Mode::learning_clustered: return "learning_clustered";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  if (text == "classical") return Mode::classical;
  if (text == "learning_no_clusters") return Mode::learning_no_clusters;
  if (text == "learning_clustered") return Mode::learning_clustered;
  throw ConfigError("unknown mode '" + std::string(text) + "'");
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(layout.width_m > 0 && layout.height_m > 0, "layout dimensions must be positive");
  require(layout.sbs_count >= 0 && layout.ue_count >= 0, "node counts must be non-negative");
  require(power.sbs_q > 1.0 && power.macro_q > 1.0, "q must exceed 1");
  require(power.sbs_p_idle_w < dbm_to_watts(power.sbs_p_max_dbm), "SBS p_idle must be below p_max");
  require(power.macro_p_idle_w < dbm_to_watts(power.macro_p_max_dbm),
          "macro p_idle must be below p_max");
  require(power.sbs_q * power.sbs_p_idle_w < dbm_to_watts(power.sbs_p_max_dbm),
          "SBS active idle power q * p_idle must be below p_max");
  require(traffic_bps > 0, "traffic rate must be positive");
  const auto& s = clustering.similarity;
  require(s.theta >= 0 && s.theta <= 1, "theta must lie in [0, 1]");
  require(s.sigma_d > 0 && s.sigma_l > 0 && s.epsilon_d > 0, "similarity widths must be positive");
  require(clustering.recluster_period >= 1, "recluster_period must be >= 1");
  require(association.delta >= 0, "delta must be non-negative");
  require(association.nu.exponent > 0, "nu exponent must be positive");
  require(learning.cost.alpha >= 0 && learning.cost.beta >= 0, "alpha and beta must be >= 0");
  require(learning.kappa > 0, "kappa must be positive");
  require(!learning.power_levels.empty(), "at least one power level is required");
  for (double f : learning.power_levels)
    require(f > 0 && f <= 1, "power levels are fractions of p_max in (0, 1]");
  require(steps >= 1 && runs >= 1, "steps and runs must be >= 1");
  require(burn_in_fraction >= 0 && burn_in_fraction < 1, "burn_in_fraction must be in [0, 1)");
  require(step_duration_s > 0, "step duration must be positive");
  require(load_solver.damping > 0 && load_solver.damping <= 1, "load damping must be in (0, 1]");
  require(load_solver.max_iterations >= 1, "load solver needs at least one iteration");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

namespace {

constexpr int kMaxRejections = 10000;

Position draw(const LayoutConfig& layout, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.0, layout.width_m);
  std::uniform_real_distribution<double> uy(0.0, layout.height_m);
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y};
}

}  // namespace

Network generate_scenario(const ScenarioConfig& config, std::mt19937_64& rng) {
  const auto& layout = config.layout;
  const auto& pw = config.power;
  Network net;

  BaseStation macro;
  macro.id = 0;
  macro.kind = BsKind::macro;
  macro.position = {layout.width_m / 2.0, layout.height_m / 2.0};
  macro.p_max = dbm_to_watts(pw.macro_p_max_dbm);
  macro.p_idle = pw.macro_p_idle_w;
  macro.q = pw.macro_q;
  macro.never_sleeps = true;
  net.bss.push_back(macro);

  for (int i = 0; i < layout.sbs_count; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxRejections)
        throw InfeasibleDensity("infeasible density: cannot place SBS " + std::to_string(i + 1));
      const Position p = draw(layout, rng);
      bool ok = (p - macro.position).norm() >= layout.min_mbs_sbs_m;
      for (std::size_t b = 1; ok && b < net.bss.size(); ++b)
        ok = (p - net.bss[b].position).norm() >= layout.min_sbs_sbs_m;
      if (!ok) continue;
      BaseStation sbs;
      sbs.id = static_cast<int>(net.bss.size());
      sbs.kind = BsKind::small;
      sbs.position = p;
      sbs.p_max = dbm_to_watts(pw.sbs_p_max_dbm);
      sbs.p_idle = pw.sbs_p_idle_w;
      sbs.q = pw.sbs_q;
      net.bss.push_back(sbs);
      break;
    }
  }

  for (int i = 0; i < layout.ue_count; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxRejections)
        throw InfeasibleDensity("infeasible density: cannot place UE " + std::to_string(i));
      const Position p = draw(layout, rng);
      bool ok = (p - macro.position).norm() >= layout.min_mbs_ue_m;
      for (std::size_t b = 1; ok && b < net.bss.size(); ++b)
        ok = (p - net.bss[b].position).norm() >= layout.min_sbs_ue_m;
      if (!ok) continue;
      net.ues.push_back({i, p, config.traffic_bps, std::nullopt});
      break;
    }
  }
  return net;
}

std::mt19937_64 layout_rng(std::uint64_t run_seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(run_seed), static_cast<std::uint32_t>(run_seed >> 32),
                    0u};
  return std::mt19937_64(seq);
}

std::mt19937_64 dynamics_rng(std::uint64_t run_seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(run_seed), static_cast<std::uint32_t>(run_seed >> 32),
                    1u};
  return std::mt19937_64(seq);
}

}  // namespace scn
