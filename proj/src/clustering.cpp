#include "scn/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "scn/coordination.hpp"
#include "scn/jacobi.hpp"

namespace scn {

SimilarityGraph build_similarity_graph(const Eigen::Matrix2Xd& positions,
                                       const Eigen::VectorXd& loads,
                                       const SimilarityConfig& config) {
  SimilarityGraph g;
  g.adjacency = build_adjacency(positions, config.epsilon_d);
  g.s_dist = distance_similarity(positions, g.adjacency, config.sigma_d);
  g.s_load = load_similarity(loads, config.sigma_l, config.load_sign);
  g.s_joint = joint_similarity(g.s_dist, g.s_load, config.theta);
  g.laplacian = laplacian(g.s_joint, config.laplacian);
  auto eig = jacobi_eigen(g.laplacian);
  g.eigenvalues = std::move(eig.eigenvalues);
  g.eigenvectors = std::move(eig.eigenvectors);
  return g;
}

std::vector<int> ClusterPartition::labels(int bs_count) const {
  std::vector<int> out(static_cast<std::size_t>(bs_count), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (int b : clusters[c])
      if (b >= 0 && b < bs_count) out[static_cast<std::size_t>(b)] = static_cast<int>(c);
  return out;
}

double ClusterPartition::mean_size() const {
  if (clusters.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.size();
  return static_cast<double>(total) / static_cast<double>(clusters.size());
}

void canonicalize(ClusterPartition& partition) {
  std::vector<std::size_t> order(partition.clusters.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (auto& c : partition.clusters) std::sort(c.begin(), c.end());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return partition.clusters[a].front() < partition.clusters[b].front();
  });
  ClusterPartition sorted;
  sorted.epoch = partition.epoch;
  for (std::size_t i : order) {
    sorted.clusters.push_back(std::move(partition.clusters[i]));
    if (i < partition.heads.size()) sorted.heads.push_back(partition.heads[i]);
  }
  partition = std::move(sorted);
}

int connected_components(const Eigen::MatrixXd& s) {
  const Eigen::Index n = s.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int count = 0;
  std::vector<Eigen::Index> stack;
  for (Eigen::Index root = 0; root < n; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    ++count;
    stack.assign(1, root);
    seen[static_cast<std::size_t>(root)] = true;
    while (!stack.empty()) {
      const Eigen::Index i = stack.back();
      stack.pop_back();
      for (Eigen::Index j = 0; j < n; ++j)
        if (!seen[static_cast<std::size_t>(j)] && (s(i, j) > 0.0 || s(j, i) > 0.0)) {
          seen[static_cast<std::size_t>(j)] = true;
          stack.push_back(j);
        }
    }
  }
  return count;
}

namespace {

struct KMeansRun {
  std::vector<int> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centers.row(0) = points.row(pick(rng));
  Eigen::VectorXd d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    Eigen::Index chosen = pick(rng);
    if (d2.sum() > 0.0) {
      std::discrete_distribution<Eigen::Index> weighted(d2.data(), d2.data() + n);
      chosen = weighted(rng);
    }
    centers.row(c) = points.row(chosen);
    d2 = d2.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

KMeansRun lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centers, int max_iterations) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = centers.rows();
  KMeansRun run;
  run.labels.assign(static_cast<std::size_t>(n), -1);

  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      (centers.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&best);
      if (run.labels[static_cast<std::size_t>(i)] != static_cast<int>(best)) {
        run.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        changed = true;
      }
    }

    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int l : run.labels) ++counts[static_cast<std::size_t>(l)];
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      // Empty cluster: split the largest one at its farthest point.
      const auto largest = static_cast<int>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(points.cols());
      for (Eigen::Index i = 0; i < n; ++i)
        if (run.labels[static_cast<std::size_t>(i)] == largest) centroid += points.row(i);
      centroid /= counts[static_cast<std::size_t>(largest)];
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (run.labels[static_cast<std::size_t>(i)] != largest) continue;
        const double d = (points.row(i) - centroid).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      run.labels[static_cast<std::size_t>(far)] = static_cast<int>(c);
      --counts[static_cast<std::size_t>(largest)];
      counts[static_cast<std::size_t>(c)] = 1;
      changed = true;
    }

    centers.setZero();
    for (Eigen::Index i = 0; i < n; ++i) centers.row(run.labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (Eigen::Index c = 0; c < k; ++c) centers.row(c) /= counts[static_cast<std::size_t>(c)];
    if (!changed && iter > 0) break;
  }

  run.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    run.inertia += (points.row(i) - centers.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
  return run;
}

}  // namespace

std::vector<int> kmeans(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng,
                        const KMeansOptions& options) {
  const auto n = static_cast<int>(points.rows());
  k = std::clamp(k, 1, std::max(n, 1));
  if (n == 0) return {};
  KMeansRun best;
  for (int r = 0; r < std::max(options.restarts, 1); ++r) {
    KMeansRun run = lloyd(points, seed_plus_plus(points, k, rng), options.max_iterations);
    if (run.inertia < best.inertia - 1e-12) best = std::move(run);
  }
  return best.labels;
}

SpectralResult spectral_cluster(const Eigen::MatrixXd& s, std::span<const int> ids,
                                const Eigen::VectorXd& loads, std::mt19937_64& rng,
                                const SpectralOptions& options) {
  SpectralResult out;
  const auto n = static_cast<int>(s.rows());
  if (n == 0) return out;

  out.laplacian = laplacian(s, options.laplacian);
  auto eig = jacobi_eigen(out.laplacian);
  out.eigenvalues = eig.eigenvalues;

  int k = options.k ? *options.k : select_k(eig.eigenvalues);
  k = std::clamp(std::max(k, connected_components(s)), 1, n);
  out.k = k;

  const Eigen::MatrixXd embedding = eig.eigenvectors.leftCols(k);
  const std::vector<int> assignment = kmeans(embedding, k, rng, options.kmeans);

  std::vector<std::vector<int>> groups(static_cast<std::size_t>(k));
  std::vector<std::vector<int>> local(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i) {
    groups[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])].push_back(
        ids[static_cast<std::size_t>(i)]);
    local[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])].push_back(i);
  }
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (groups[c].empty()) continue;
    Eigen::VectorXd member_loads(static_cast<Eigen::Index>(local[c].size()));
    for (std::size_t j = 0; j < local[c].size(); ++j)
      member_loads(static_cast<Eigen::Index>(j)) =
          loads.size() == n ? loads(local[c][j]) : 0.0;
    out.partition.heads.push_back(elect_head(groups[c], member_loads));
    out.partition.clusters.push_back(std::move(groups[c]));
  }
  canonicalize(out.partition);
  return out;
}

}  // namespace scn
