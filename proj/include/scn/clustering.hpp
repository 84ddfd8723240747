#pragma once

// Similarity graph over small cells and spectral clustering with
// eigengap-based selection of the cluster count.

#include <cmath>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace scn {

enum class LoadSimilarity {
  gaussian,       // exp(-d^2 / 2 sigma^2), decreasing in the load gap
  paper_literal,  // exp(+d^2 / 2 sigma^2)
};

enum class LaplacianKind {
  standard,  // D - S
  paper,     // l_bb' = sum_k (s_bk - s_bb'), symmetrized
};

struct SimilarityConfig {
  double epsilon_d = 250.0;  // m
  double sigma_d = 300.0;    // m
  double sigma_l = 1.0;
  double theta = 0.5;
  LoadSimilarity load_sign = LoadSimilarity::gaussian;
  LaplacianKind laplacian = LaplacianKind::standard;
};

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// e_bb' = 1 iff b != b' and the two positions (columns of a 2xN matrix) lie
/// within epsilon_d of each other.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> build_adjacency(const Eigen::MatrixBase<Derived>& positions,
                                                      typename Derived::Scalar epsilon_d) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = positions.cols();
  DenseMatrix<Scalar> e = DenseMatrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if ((positions.col(i) - positions.col(j)).norm() <= epsilon_d) e(i, j) = e(j, i) = Scalar(1);
  return e;
}

template <typename DerivedP, typename DerivedE>
DenseMatrix<typename DerivedP::Scalar> distance_similarity(
    const Eigen::MatrixBase<DerivedP>& positions, const Eigen::MatrixBase<DerivedE>& adjacency,
    typename DerivedP::Scalar sigma_d) {
  using Scalar = typename DerivedP::Scalar;
  const Eigen::Index n = positions.cols();
  DenseMatrix<Scalar> s = DenseMatrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (adjacency(i, j) == Scalar(0)) continue;
      const Scalar d2 = (positions.col(i) - positions.col(j)).squaredNorm();
      s(i, j) = s(j, i) = std::exp(-d2 / (Scalar(2) * sigma_d * sigma_d));
    }
  return s;
}

/// Load similarity over all pairs (the adjacency mask is applied when the
/// joint similarity is formed). The diagonal is left at zero.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> load_similarity(const Eigen::MatrixBase<Derived>& loads,
                                                      typename Derived::Scalar sigma_l,
                                                      LoadSimilarity mode) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = loads.size();
  const Scalar sign = mode == LoadSimilarity::gaussian ? Scalar(-1) : Scalar(1);
  DenseMatrix<Scalar> s = DenseMatrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar d = loads(i) - loads(j);
      s(i, j) = s(j, i) = std::exp(sign * d * d / (Scalar(2) * sigma_l * sigma_l));
    }
  return s;
}

/// s = (s^d)^theta * (s^l)^(1 - theta), forced to zero wherever s^d is zero
/// (no physical link) for every theta, including theta = 0.
template <typename DerivedD, typename DerivedL>
DenseMatrix<typename DerivedD::Scalar> joint_similarity(const Eigen::MatrixBase<DerivedD>& s_dist,
                                                        const Eigen::MatrixBase<DerivedL>& s_load,
                                                        typename DerivedD::Scalar theta) {
  using Scalar = typename DerivedD::Scalar;
  const auto linked = (s_dist.array() > Scalar(0)).template cast<Scalar>();
  return (linked * s_dist.array().pow(theta) * s_load.array().pow(Scalar(1) - theta)).matrix();
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> laplacian(const Eigen::MatrixBase<Derived>& s,
                                                LaplacianKind kind = LaplacianKind::standard) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = s.rows();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> degree = s.rowwise().sum();
  if (kind == LaplacianKind::standard) {
    DenseMatrix<Scalar> l = -s;
    l.diagonal() += degree;
    return l;
  }
  DenseMatrix<Scalar> l(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) l(i, j) = degree(i) - Scalar(n) * s(i, j);
  return (l + l.transpose()) / Scalar(2);
}

/// k = argmax_i |ς_{i+1} - ς_i| over ascending eigenvalues, 1-based; ties go
/// to the smaller k. Fewer than two eigenvalues returns their count.
template <typename Derived>
int select_k(const Eigen::MatrixBase<Derived>& eigenvalues) {
  const Eigen::Index n = eigenvalues.size();
  if (n < 2) return static_cast<int>(n);
  int best = 1;
  auto best_gap = std::abs(eigenvalues(1) - eigenvalues(0));
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const auto gap = std::abs(eigenvalues(i + 1) - eigenvalues(i));
    if (gap > best_gap) {
      best_gap = gap;
      best = static_cast<int>(i) + 1;
    }
  }
  return best;
}

struct SimilarityGraph {
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd s_dist;
  Eigen::MatrixXd s_load;
  Eigen::MatrixXd s_joint;
  Eigen::MatrixXd laplacian;
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;
};

/// Builds every matrix of the graph for small cells at `positions` (2xN)
/// with load estimates `loads`.
SimilarityGraph build_similarity_graph(const Eigen::Matrix2Xd& positions,
                                       const Eigen::VectorXd& loads,
                                       const SimilarityConfig& config);

/// Disjoint clusters of BS ids. Members and clusters are kept sorted (by
/// smallest member) so equal partitions compare equal.
struct ClusterPartition {
  std::vector<std::vector<int>> clusters;
  std::vector<int> heads;
  int epoch = 0;

  /// Per-BS cluster index over ids [0, bs_count); -1 for BSs not covered.
  std::vector<int> labels(int bs_count) const;
  bool same_clusters(const ClusterPartition& other) const { return clusters == other.clusters; }
  double mean_size() const;
};

/// Sorts members and clusters into canonical order.
void canonicalize(ClusterPartition& partition);

/// Number of connected components of the graph with an edge wherever s > 0.
int connected_components(const Eigen::MatrixXd& s);

struct KMeansOptions {
  int max_iterations = 100;
  int restarts = 10;
};

/// Lloyd's k-means on the rows of `points` with k-means++ seeding; the
/// restart with the lowest inertia wins. Empty clusters are repaired by
/// splitting off the point farthest from the centroid of the largest one.
std::vector<int> kmeans(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng,
                        const KMeansOptions& options = {});

struct SpectralOptions {
  LaplacianKind laplacian = LaplacianKind::standard;
  std::optional<int> k;
  KMeansOptions kmeans;
};

struct SpectralResult {
  ClusterPartition partition;
  Eigen::MatrixXd laplacian;
  Eigen::VectorXd eigenvalues;
  int k = 0;
};

/// Spectral clustering of the nodes of `s` (ids[i] names row i). The count
/// comes from the eigengap unless given, is raised to at least the number of
/// connected components and clamped to the node count. Heads are elected
/// with `loads` (indexed like `ids`).
SpectralResult spectral_cluster(const Eigen::MatrixXd& s, std::span<const int> ids,
                                const Eigen::VectorXd& loads, std::mt19937_64& rng,
                                const SpectralOptions& options = {});

}  // namespace scn
