#include "scn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "scn/errors.hpp"

namespace scn {

namespace {

std::string num(double v) { return fmt::format("{:.9g}", v); }

RunArtifacts run_one(const ScenarioConfig& config, int index, const RunOptions& options) {
  Simulation sim(config, config.seed + static_cast<std::uint64_t>(index), options.keep_dumps);
  sim.run();
  RunArtifacts out;
  out.summary = sim.summarize();
  if (options.keep_logs) out.log = sim.log();
  if (options.keep_dumps) out.dumps = sim.dumps();
  return out;
}

}  // namespace

double ci95(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

ExperimentResult run_experiment(const ScenarioConfig& config, const RunOptions& options) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.runs.resize(static_cast<std::size_t>(config.runs));

  unsigned workers = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(config.runs));
  if (workers <= 1) {
    for (int r = 0; r < config.runs; ++r)
      result.runs[static_cast<std::size_t>(r)] = run_one(config, r, options);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int r = next++; r < config.runs; r = next++)
            result.runs[static_cast<std::size_t>(r)] = run_one(config, r, options);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<double> costs;
  for (const auto& run : result.runs) {
    const auto& s = run.summary;
    costs.push_back(s.mean_cost_per_bs);
    result.mean_cost_per_bs += s.mean_cost_per_bs;
    result.mean_energy_per_bs += s.mean_energy_per_bs;
    result.mean_load += s.mean_load;
    result.cluster_count += s.cluster_count;
    result.mean_cluster_size += s.mean_cluster_size;
    result.energy_samples.insert(result.energy_samples.end(), s.bs_energy.begin(),
                                 s.bs_energy.end());
  }
  const double n = static_cast<double>(result.runs.size());
  result.mean_cost_per_bs /= n;
  result.mean_energy_per_bs /= n;
  result.mean_load /= n;
  result.cluster_count /= n;
  result.mean_cluster_size /= n;
  result.cost_ci95 = ci95(costs);
  return result;
}

SweepAxis parse_sweep_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("sweep axis must look like key=values");
  SweepAxis axis;
  axis.key = text.substr(0, eq);
  const std::string spec = text.substr(eq + 1);
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad sweep value '" + s + "' in '" + text + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(to_double(item));
    if (parts.size() != 3 || parts[2] <= 0 || parts[1] < parts[0])
      throw ConfigError("range must be start:stop:step with step > 0: '" + text + "'");
    const auto count = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (int i = 0; i <= count; ++i) axis.values.push_back(parts[0] + i * parts[2]);
  } else {
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) axis.values.push_back(to_double(item));
  }
  if (axis.values.empty()) throw ConfigError("empty sweep axis '" + text + "'");
  ScenarioConfig probe;
  apply_sweep_value(probe, axis.key, axis.values.front());
  return axis;
}

void apply_sweep_value(ScenarioConfig& config, const std::string& key, double value) {
  if (key == "ues")
    config.layout.ue_count = static_cast<int>(std::lround(value));
  else if (key == "sbs")
    config.layout.sbs_count = static_cast<int>(std::lround(value));
  else if (key == "eps_d")
    config.clustering.similarity.epsilon_d = value;
  else if (key == "theta")
    config.clustering.similarity.theta = value;
  else if (key == "delta")
    config.association.delta = value;
  else
    throw ConfigError("unknown sweep key '" + key + "' (use ues, sbs, eps_d, theta or delta)");
}

std::vector<ExperimentResult> run_sweep(const ScenarioConfig& base, const std::vector<Mode>& modes,
                                        const std::vector<SweepAxis>& axes,
                                        const RunOptions& options) {
  std::vector<ScenarioConfig> points{base};
  for (const auto& axis : axes) {
    std::vector<ScenarioConfig> expanded;
    for (const auto& p : points)
      for (double v : axis.values) {
        ScenarioConfig c = p;
        apply_sweep_value(c, axis.key, v);
        expanded.push_back(std::move(c));
      }
    points = std::move(expanded);
  }
  std::vector<ExperimentResult> results;
  for (const auto& p : points)
    for (Mode m : modes) {
      ScenarioConfig c = p;
      c.mode = m;
      results.push_back(run_experiment(c, options));
    }
  return results;
}

void write_summary_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  out << "mode,ue_count,eps_d,theta,mean_cost_per_bs,mean_energy_per_bs,mean_load,"
         "cluster_count,mean_cluster_size,ci95\n";
  for (const auto& r : results) {
    const auto& c = r.config;
    out << to_string(c.mode) << ',' << c.layout.ue_count << ','
        << num(c.clustering.similarity.epsilon_d) << ',' << num(c.clustering.similarity.theta)
        << ',' << num(r.mean_cost_per_bs) << ',' << num(r.mean_energy_per_bs) << ','
        << num(r.mean_load) << ',' << num(r.cluster_count) << ',' << num(r.mean_cluster_size)
        << ',' << num(r.cost_ci95) << '\n';
  }
}

double quantile(std::vector<double> samples, double p) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double h = (static_cast<double>(samples.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, samples.size() - 1);
  return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

void write_energy_cdf_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  std::map<Mode, std::vector<double>> pooled;
  for (const auto& r : results) {
    auto& v = pooled[r.config.mode];
    v.insert(v.end(), r.energy_samples.begin(), r.energy_samples.end());
  }
  out << "mode,sample,ecdf\n";
  for (auto& [mode, samples] : pooled) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
      out << to_string(mode) << ',' << num(samples[i]) << ',' << num((i + 1) / n) << '\n';
  }
}

void write_steps_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  out << "mode,ue_count,eps_d,theta,run,t,cluster,head,members,ue_count_cluster,action,cost,"
         "utility,penalized,pi_max,regret_max,regret_min,network_cost,uncovered_ues\n";
  for (const auto& r : results) {
    const auto& c = r.config;
    for (std::size_t run = 0; run < r.runs.size(); ++run)
      for (const auto& rec : r.runs[run].log)
        for (std::size_t k = 0; k < rec.clusters.size(); ++k) {
          const auto& cr = rec.clusters[k];
          std::string members;
          for (std::size_t j = 0; j < cr.members.size(); ++j)
            members += (j ? ";" : "") + std::to_string(cr.members[j]);
          out << to_string(c.mode) << ',' << c.layout.ue_count << ','
              << num(c.clustering.similarity.epsilon_d) << ','
              << num(c.clustering.similarity.theta) << ',' << run << ',' << rec.t << ',' << k
              << ',' << cr.head << ',' << members << ',' << cr.ue_count << ',' << cr.action << ','
              << num(cr.cost) << ',' << num(cr.utility) << ',' << (cr.penalized ? 1 : 0) << ','
              << num(cr.pi_max) << ',' << num(cr.regret_max) << ',' << num(cr.regret_min) << ','
              << num(rec.network_cost) << ',' << rec.uncovered_ues << '\n';
        }
  }
}

void write_cluster_dumps(const std::filesystem::path& dir,
                         const std::vector<ExperimentResult>& results) {
  std::ofstream sim(dir / "similarity.csv");
  std::ofstream spec(dir / "spectrum.csv");
  std::ofstream part(dir / "partition.csv");
  sim << "point,run,epoch,bs_i,bs_j,adjacency,s_dist,s_load,s_joint,laplacian\n";
  spec << "point,run,epoch,index,eigenvalue\n";
  part << "point,run,epoch,bs,cluster,head\n";
  for (std::size_t p = 0; p < results.size(); ++p)
    for (std::size_t run = 0; run < results[p].runs.size(); ++run)
      for (const auto& d : results[p].runs[run].dumps) {
        const auto& g = d.graph;
        for (Eigen::Index i = 0; i < g.s_joint.rows(); ++i)
          for (Eigen::Index j = 0; j < g.s_joint.cols(); ++j)
            sim << p << ',' << run << ',' << d.epoch << ',' << d.sbs_ids[static_cast<std::size_t>(i)]
                << ',' << d.sbs_ids[static_cast<std::size_t>(j)] << ',' << num(g.adjacency(i, j))
                << ',' << num(g.s_dist(i, j)) << ',' << num(g.s_load(i, j)) << ','
                << num(g.s_joint(i, j)) << ',' << num(g.laplacian(i, j)) << '\n';
        for (Eigen::Index i = 0; i < g.eigenvalues.size(); ++i)
          spec << p << ',' << run << ',' << d.epoch << ',' << i + 1 << ','
               << num(g.eigenvalues(i)) << '\n';
        for (std::size_t c = 0; c < d.partition.clusters.size(); ++c)
          for (int b : d.partition.clusters[c])
            part << p << ',' << run << ',' << d.epoch << ',' << b << ',' << c << ','
                 << d.partition.heads[c] << '\n';
      }
}

}  // namespace scn
