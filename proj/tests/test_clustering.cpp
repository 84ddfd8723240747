#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "scn/clustering.hpp"
#include "scn/jacobi.hpp"

using namespace scn;

namespace {

Eigen::Matrix2Xd points(std::initializer_list<std::pair<double, double>> xy) {
  Eigen::Matrix2Xd p(2, static_cast<Eigen::Index>(xy.size()));
  Eigen::Index i = 0;
  for (const auto& [x, y] : xy) p.col(i++) << x, y;
  return p;
}

std::vector<int> iota_ids(int n) {
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

void check_valid_partition(const ClusterPartition& part, int n) {
  std::multiset<int> seen;
  for (const auto& c : part.clusters) {
    CHECK_FALSE(c.empty());
    seen.insert(c.begin(), c.end());
  }
  CHECK(static_cast<int>(seen.size()) == n);
  CHECK(std::set<int>(seen.begin(), seen.end()).size() == seen.size());
  REQUIRE(part.heads.size() == part.clusters.size());
  for (std::size_t i = 0; i < part.clusters.size(); ++i)
    CHECK(std::find(part.clusters[i].begin(), part.clusters[i].end(), part.heads[i]) !=
          part.clusters[i].end());
}

}  // namespace

TEST_CASE("adjacency within the distance threshold") {
  CHECK(build_adjacency(points({{0, 0}, {100, 0}}), 250.0)(0, 1) == 1.0);
  CHECK(build_adjacency(points({{0, 0}, {300, 0}}), 250.0)(0, 1) == 0.0);

  const Eigen::MatrixXd e = build_adjacency(points({{0, 0}, {200, 0}, {400, 0}}), 250.0);
  Eigen::MatrixXd chain(3, 3);
  chain << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(e == chain);
}

TEST_CASE("distance similarity") {
  const auto p = points({{0, 0}, {0, 0}, {300, 0}, {900, 0}});
  const Eigen::MatrixXd e = build_adjacency(p, 350.0);
  const Eigen::MatrixXd s = distance_similarity(p, e, 300.0);
  CHECK(s(0, 1) == 1.0);
  CHECK(s(0, 2) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(s(0, 3) == 0.0);
  CHECK(s.diagonal().isZero());
  CHECK(s == s.transpose());
}

TEST_CASE("load similarity in both sign conventions") {
  Eigen::Vector3d loads(0.0, 1.0, 0.0);
  const Eigen::MatrixXd g = load_similarity(loads, 1.0, LoadSimilarity::gaussian);
  const Eigen::MatrixXd p = load_similarity(loads, 1.0, LoadSimilarity::paper_literal);
  CHECK(g(0, 1) == doctest::Approx(0.6065306597).epsilon(1e-9));
  CHECK(p(0, 1) == doctest::Approx(1.6487212707).epsilon(1e-9));
  CHECK(g(0, 2) == 1.0);
  CHECK(p(0, 2) == 1.0);
  CHECK(g == g.transpose());
  CHECK(p == p.transpose());
}

TEST_CASE("joint similarity") {
  Eigen::Matrix2d sd, sl;
  sd << 0, 0.36, 0.36, 0;
  sl << 0, 0.64, 0.64, 0;
  CHECK(joint_similarity(sd, sl, 0.5)(0, 1) == doctest::Approx(0.48).epsilon(1e-15));

  const auto p = points({{0, 0}, {100, 0}, {500, 0}});
  const Eigen::MatrixXd d = distance_similarity(p, build_adjacency(p, 250.0), 300.0);
  const Eigen::MatrixXd l = load_similarity(Eigen::Vector3d(0.1, 0.5, 0.9), 1.0,
                                            LoadSimilarity::gaussian);
  CHECK((joint_similarity(d, l, 1.0) - d).cwiseAbs().maxCoeff() <= 1e-12);
  const Eigen::MatrixXd s0 = joint_similarity(d, l, 0.0);
  CHECK(s0(0, 1) == doctest::Approx(l(0, 1)));
  CHECK(s0(0, 2) == 0.0);
  CHECK(s0(1, 2) == 0.0);
  for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Eigen::MatrixXd s = joint_similarity(d, l, theta);
    CHECK(s == s.transpose());
    CHECK(s(0, 2) == 0.0);
    CHECK(s.diagonal().isZero());
  }
}

TEST_CASE("laplacian variants") {
  Eigen::Matrix3d s;
  s << 0, 1, 0.5, 1, 0, 0, 0.5, 0, 0;
  const Eigen::MatrixXd l = laplacian(s);
  CHECK(l.rowwise().sum().isZero(1e-15));
  CHECK(l == l.transpose());
  CHECK(l(0, 0) == 1.5);

  const Eigen::MatrixXd lp = laplacian(s, LaplacianKind::paper);
  CHECK(lp == lp.transpose());
  // d_b - n s_bb' averaged with its transpose.
  CHECK(lp(0, 1) == doctest::Approx(0.5 * ((1.5 - 3.0) + (1.0 - 3.0))));
  CHECK(lp(0, 0) == doctest::Approx(1.5));
}

TEST_CASE("eigengap selection") {
  CHECK(select_k(Eigen::Vector4d(0, 0, 5, 5.1)) == 2);
  CHECK(select_k(Eigen::Vector4d(2, 2, 2, 2)) == 1);
  CHECK(select_k(Eigen::VectorXd::Constant(1, 0.0)) == 1);
  CHECK(select_k(Eigen::VectorXd(0)) == 0);

  Eigen::Matrix4d s;
  s << 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
  const auto eig = jacobi_eigen(laplacian(s));
  CHECK(std::abs(eig.eigenvalues(0)) < 1e-12);
  CHECK(std::abs(eig.eigenvalues(1)) < 1e-12);
  CHECK(select_k(eig.eigenvalues) == 2);
}

TEST_CASE("jacobi eigensolver reconstructs random symmetric matrices") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd a(10, 10);
    for (Eigen::Index i = 0; i < 10; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
    const auto eig = jacobi_eigen(a);
    REQUIRE(eig.converged);
    const Eigen::MatrixXd back =
        eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
    CHECK((back - a).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((eig.eigenvectors.transpose() * eig.eigenvectors - Eigen::MatrixXd::Identity(10, 10))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    for (Eigen::Index i = 1; i < 10; ++i) CHECK(eig.eigenvalues(i - 1) <= eig.eigenvalues(i));

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    CHECK((ref.eigenvalues() - eig.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("jacobi eigensolver is deterministic and works in float") {
  Eigen::Matrix3f a;
  a << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  const auto x = jacobi_eigen(a);
  const auto y = jacobi_eigen(a);
  CHECK(x.eigenvalues == y.eigenvalues);
  CHECK(x.eigenvectors == y.eigenvectors);
  CHECK(x.eigenvalues(0) == doctest::Approx(2.0f - std::sqrt(2.0f)).epsilon(1e-5));
}

TEST_CASE("spectral clustering separates two distant groups") {
  const auto p = points({{0, 0}, {60, 0}, {30, 50}, {800, 0}, {860, 0}, {830, 50}});
  SimilarityConfig cfg;
  cfg.theta = 1.0;
  const auto graph = build_similarity_graph(p, Eigen::VectorXd::Constant(6, 0.3), cfg);
  std::mt19937_64 rng(3);
  const auto ids = iota_ids(6);
  const auto res = spectral_cluster(graph.s_joint, ids, Eigen::VectorXd::Constant(6, 0.3), rng);
  check_valid_partition(res.partition, 6);
  CHECK(res.k == 2);

  double cut = 0.0;
  const auto oracle = oracle::brute_force_min_cut(graph.s_joint, &cut);
  CHECK(cut == 0.0);
  std::vector<int> expect(6);
  for (int i = 0; i < 6; ++i) expect[static_cast<std::size_t>(i)] = oracle[static_cast<std::size_t>(i)];
  CHECK(oracle::same_partition(res.partition.labels(6), expect));
}

TEST_CASE("spectral clustering of a single cell") {
  std::mt19937_64 rng(1);
  const std::vector<int> ids{4};
  const auto res = spectral_cluster(Eigen::MatrixXd::Zero(1, 1), ids, Eigen::VectorXd::Zero(1), rng);
  REQUIRE(res.partition.clusters.size() == 1);
  CHECK(res.partition.clusters[0] == std::vector<int>{4});
  CHECK(res.partition.heads[0] == 4);
}

TEST_CASE("co-located cells split by load at theta zero") {
  const Eigen::Matrix2Xd p = Eigen::Matrix2Xd::Zero(2, 6);
  Eigen::VectorXd loads(6);
  loads << 0.05, 0.9, 0.1, 0.95, 0.0, 0.85;
  SimilarityConfig cfg;
  cfg.theta = 0.0;
  cfg.sigma_l = 0.2;
  const auto graph = build_similarity_graph(p, loads, cfg);
  std::mt19937_64 rng(5);
  const auto ids = iota_ids(6);
  SpectralOptions opts;
  opts.k = 2;
  const auto res = spectral_cluster(graph.s_joint, ids, loads, rng, opts);
  check_valid_partition(res.partition, 6);
  CHECK(oracle::same_partition(res.partition.labels(6), {0, 1, 0, 1, 0, 1}));
  for (std::size_t c = 0; c < res.partition.clusters.size(); ++c) {
    double best = -1.0;
    for (int m : res.partition.clusters[c]) best = std::max(best, loads(m));
    CHECK(loads(res.partition.heads[c]) == best);
  }
}

TEST_CASE("disconnected components are never merged") {
  const auto p = points({{0, 0}, {100, 0}, {1000, 0}, {2000, 0}});
  const auto graph = build_similarity_graph(p, Eigen::VectorXd::Zero(4), SimilarityConfig{});
  CHECK(connected_components(graph.s_joint) == 3);
  std::mt19937_64 rng(9);
  const auto ids = iota_ids(4);
  const auto res = spectral_cluster(graph.s_joint, ids, Eigen::VectorXd::Zero(4), rng);
  CHECK(res.partition.clusters.size() >= 3);
  const auto labels = res.partition.labels(4);
  CHECK(labels[2] != labels[0]);
  CHECK(labels[3] != labels[2]);
}

TEST_CASE("requested k is clamped to the node count") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(3, 3, 0.5);
  s.diagonal().setZero();
  std::mt19937_64 rng(2);
  const auto ids = iota_ids(3);
  SpectralOptions opts;
  opts.k = 7;
  const auto res = spectral_cluster(s, ids, Eigen::VectorXd::Zero(3), rng, opts);
  CHECK(res.k == 3);
  CHECK(res.partition.clusters.size() == 3);
}

TEST_CASE("spectral clustering is deterministic under a seed") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 600.0);
  Eigen::Matrix2Xd p(2, 12);
  for (Eigen::Index i = 0; i < 12; ++i) p.col(i) << u(gen), u(gen);
  const Eigen::VectorXd loads = Eigen::VectorXd::LinSpaced(12, 0.0, 1.0);
  const auto graph = build_similarity_graph(p, loads, SimilarityConfig{});
  const auto ids = iota_ids(12);
  std::mt19937_64 a(77), b(77);
  const auto x = spectral_cluster(graph.s_joint, ids, loads, a);
  const auto y = spectral_cluster(graph.s_joint, ids, loads, b);
  CHECK(x.partition.clusters == y.partition.clusters);
  CHECK(x.partition.heads == y.partition.heads);
  check_valid_partition(x.partition, 12);
}

TEST_CASE("k-means finds well separated centers") {
  Eigen::MatrixXd pts(6, 1);
  pts << 0.0, 0.1, 0.2, 10.0, 10.1, 10.2;
  std::mt19937_64 rng(4);
  const auto labels = kmeans(pts, 2, rng);
  CHECK(oracle::same_partition(labels, {0, 0, 0, 1, 1, 1}));

  std::mt19937_64 rng2(4);
  const auto all = kmeans(pts, 6, rng2);
  CHECK(std::set<int>(all.begin(), all.end()).size() == 6);
}

TEST_CASE("partition labels and mean size") {
  ClusterPartition part;
  part.clusters = {{3, 1}, {2}};
  part.heads = {3, 2};
  canonicalize(part);
  CHECK(part.clusters == std::vector<std::vector<int>>{{1, 3}, {2}});
  CHECK(part.heads == std::vector<int>{3, 2});
  CHECK(part.labels(5) == std::vector<int>{-1, 0, 1, 0, -1});
  CHECK(part.mean_size() == 1.5);
}
