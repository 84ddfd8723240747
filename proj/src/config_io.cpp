#include "scn/config_io.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "scn/errors.hpp"

namespace scn {

namespace {

using Setter = std::function<void(LoadedConfig&, const std::string&)>;

double as_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
}

long long as_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used == v.size()) return i;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

#define SCN_DOUBLE(key, field) \
  {key, [](LoadedConfig& c, const std::string& v) { c.scenario.field = as_double(key, v); }}
#define SCN_INT(key, field)                                                    \
  {key, [](LoadedConfig& c, const std::string& v) {                            \
     c.scenario.field = static_cast<decltype(c.scenario.field)>(as_int(key, v)); \
   }}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      SCN_DOUBLE("layout.width_m", layout.width_m),
      SCN_DOUBLE("layout.height_m", layout.height_m),
      SCN_INT("layout.sbs_count", layout.sbs_count),
      SCN_INT("layout.ue_count", layout.ue_count),
      SCN_DOUBLE("layout.min_mbs_sbs_m", layout.min_mbs_sbs_m),
      SCN_DOUBLE("layout.min_mbs_ue_m", layout.min_mbs_ue_m),
      SCN_DOUBLE("layout.min_sbs_sbs_m", layout.min_sbs_sbs_m),
      SCN_DOUBLE("layout.min_sbs_ue_m", layout.min_sbs_ue_m),
      SCN_DOUBLE("radio.bandwidth_hz", channel.bandwidth_hz),
      SCN_DOUBLE("radio.noise_psd_dbm_hz", channel.noise_psd_dbm_hz),
      SCN_DOUBLE("radio.min_distance_macro_m", channel.min_distance_macro_m),
      SCN_DOUBLE("radio.min_distance_small_m", channel.min_distance_small_m),
      SCN_DOUBLE("power.macro_p_max_dbm", power.macro_p_max_dbm),
      SCN_DOUBLE("power.sbs_p_max_dbm", power.sbs_p_max_dbm),
      SCN_DOUBLE("power.macro_p_idle_w", power.macro_p_idle_w),
      SCN_DOUBLE("power.sbs_p_idle_w", power.sbs_p_idle_w),
      SCN_DOUBLE("power.macro_q", power.macro_q),
      SCN_DOUBLE("power.sbs_q", power.sbs_q),
      SCN_DOUBLE("traffic.rate_bps", traffic_bps),
      SCN_DOUBLE("clustering.epsilon_d_m", clustering.similarity.epsilon_d),
      SCN_DOUBLE("clustering.sigma_d_m", clustering.similarity.sigma_d),
      SCN_DOUBLE("clustering.sigma_l", clustering.similarity.sigma_l),
      SCN_DOUBLE("clustering.theta", clustering.similarity.theta),
      {"clustering.load_similarity",
       [](LoadedConfig& c, const std::string& v) {
         if (v == "gaussian")
           c.scenario.clustering.similarity.load_sign = LoadSimilarity::gaussian;
         else if (v == "paper_literal")
           c.scenario.clustering.similarity.load_sign = LoadSimilarity::paper_literal;
         else
           throw ConfigError("clustering.load_similarity: expected gaussian or paper_literal");
       }},
      {"clustering.laplacian",
       [](LoadedConfig& c, const std::string& v) {
         if (v == "standard")
           c.scenario.clustering.similarity.laplacian = LaplacianKind::standard;
         else if (v == "paper")
           c.scenario.clustering.similarity.laplacian = LaplacianKind::paper;
         else
           throw ConfigError("clustering.laplacian: expected standard or paper");
       }},
      SCN_INT("clustering.recluster_period", clustering.recluster_period),
      SCN_INT("clustering.kmeans_restarts", clustering.kmeans_restarts),
      SCN_DOUBLE("association.delta", association.delta),
      SCN_DOUBLE("association.nu_exponent", association.nu.exponent),
      SCN_DOUBLE("learning.kappa", learning.kappa),
      SCN_DOUBLE("learning.alpha", learning.cost.alpha),
      SCN_DOUBLE("learning.beta", learning.cost.beta),
      SCN_DOUBLE("learning.tau_exponent", learning.rates.utility.exponent),
      SCN_DOUBLE("learning.iota_exponent", learning.rates.regret.exponent),
      SCN_DOUBLE("learning.epsilon_exponent", learning.rates.strategy.exponent),
      {"learning.power_levels",
       [](LoadedConfig& c, const std::string& v) {
         c.scenario.learning.power_levels.clear();
         for (const auto& item : split_list(v))
           c.scenario.learning.power_levels.push_back(as_double("learning.power_levels", item));
       }},
      SCN_INT("learning.action_cap", learning.action_cap),
      {"simulation.mode",
       [](LoadedConfig& c, const std::string& v) {
         c.modes.clear();
         const auto items = split_list(v);
         if (items.size() == 1 && items[0] == "all") {
           c.modes = {Mode::classical, Mode::learning_no_clusters, Mode::learning_clustered};
         } else {
           for (const auto& item : items) c.modes.push_back(parse_mode(item));
         }
         if (c.modes.empty()) throw ConfigError("simulation.mode: no mode given");
         c.scenario.mode = c.modes.front();
       }},
      SCN_INT("simulation.steps", steps),
      SCN_INT("simulation.runs", runs),
      SCN_INT("simulation.seed", seed),
      SCN_DOUBLE("simulation.burn_in_fraction", burn_in_fraction),
      SCN_DOUBLE("simulation.step_duration_s", step_duration_s),
      SCN_DOUBLE("simulation.load_damping", load_solver.damping),
      SCN_DOUBLE("simulation.load_tolerance", load_solver.tolerance),
      SCN_INT("simulation.load_max_iterations", load_solver.max_iterations),
  };
  return table;
}

#undef SCN_DOUBLE
#undef SCN_INT

}  // namespace

LoadedConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  LoadedConfig loaded;
  loaded.modes = {loaded.scenario.mode};
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("config key '" + section + "' must live inside a [section]");
    const auto known = table.lower_bound(section + ".");
    if (known == table.end() || known->first.rfind(section + ".", 0) != 0)
      throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = table.find(full);
      if (it == table.end()) throw ConfigError("unknown config key '" + full + "'");
      it->second(loaded, value.data());
    }
  }
  loaded.scenario.validate();
  return loaded;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace scn
