#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "scn/coordination.hpp"
#include "scn/errors.hpp"

using namespace scn;

namespace {

std::vector<int> iota_ids(int n) {
  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
  return ids;
}

Eigen::MatrixXd random_costs(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> u(0.01, 0.5);
  Eigen::MatrixXd c(rows, cols);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = u(rng);
  return c;
}

double binary_objective(const Eigen::MatrixXd& costs, const Eigen::MatrixXi& z) {
  return (costs.array() * z.cast<double>().array()).sum();
}

}  // namespace

TEST_CASE("cluster head election") {
  const std::vector<int> members{1, 2, 3};
  CHECK(elect_head(members, Eigen::Vector3d(0.2, 0.7, 0.1)) == 2);

  const std::vector<int> single{7};
  CHECK(elect_head(single, Eigen::VectorXd::Constant(1, 0.0)) == 7);

  const std::vector<int> pair{4, 2};
  CHECK(elect_head(pair, Eigen::Vector2d(0.5, 0.5)) == 2);

  CHECK_THROWS_AS(elect_head(std::span<const int>{}, Eigen::VectorXd(0)), std::invalid_argument);
}

TEST_CASE("single active cell takes every UE") {
  const Eigen::MatrixXd costs = Eigen::RowVector3d(0.1, 0.2, 0.05);
  const std::vector<int> bs{5};
  const auto s = solve_cluster_schedule(costs, bs, iota_ids(3));
  CHECK(s.fractional == Eigen::MatrixXd::Ones(1, 3));
  CHECK(s.binary == Eigen::MatrixXi::Ones(1, 3));
  CHECK(s.serving() == std::vector<int>{5, 5, 5});
  CHECK(s.cluster_load == doctest::Approx(0.35));
}

TEST_CASE("two cells one UE") {
  Eigen::MatrixXd costs(2, 1);
  costs << 0.1, 0.3;
  const auto s = solve_cluster_schedule(costs, iota_ids(2), iota_ids(1));
  CHECK(s.fractional(0, 0) == 1.0);
  CHECK(s.fractional(1, 0) == 0.0);
  CHECK(s.binary(0, 0) == 1);
  CHECK(s.cluster_load == doctest::Approx(0.1));
  CHECK_FALSE(s.overloaded);
}

TEST_CASE("sleeping cells are skipped and an all-asleep cluster is uncovered") {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd costs(2, 2);
  costs << inf, inf, 0.4, 0.2;
  const auto s = solve_cluster_schedule(costs, std::vector<int>{3, 8}, iota_ids(2));
  CHECK(s.serving() == std::vector<int>{8, 8});

  costs.row(1).setConstant(inf);
  CHECK_THROWS_AS(solve_cluster_schedule(costs, std::vector<int>{3, 8}, iota_ids(2)), UncoveredUes);
}

TEST_CASE("overload flag") {
  Eigen::MatrixXd costs(1, 3);
  costs << 0.5, 0.4, 0.3;
  const auto s = solve_cluster_schedule(costs, std::vector<int>{0}, iota_ids(3));
  CHECK(s.cluster_load == doctest::Approx(1.2));
  CHECK(s.overloaded);
}

TEST_CASE("3x4 instance matches exhaustive search over all 81 assignments") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto costs = random_costs(rng, 3, 4);
    const auto s = solve_cluster_schedule(costs, iota_ids(3), iota_ids(4));
    CHECK(binary_objective(costs, s.binary) == doctest::Approx(oracle::brute_force_assignment(costs)));
  }
}

TEST_CASE("relaxed LP form and vertex enumeration") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int rows = 1 + trial % 4;
    const int cols = 1 + trial % 5;
    const auto costs = random_costs(rng, rows, cols);
    const auto lp = relaxed_lp(costs);
    REQUIRE(lp.equality_lhs.rows() == cols);
    REQUIRE(lp.equality_lhs.cols() == rows * cols);

    const auto s = solve_cluster_schedule(costs, iota_ids(rows), iota_ids(cols));
    const Eigen::VectorXd z = s.fractional.reshaped();
    CHECK((lp.equality_lhs * z - lp.equality_rhs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(lp.objective.dot(z) == doctest::Approx(s.fractional_load).epsilon(1e-12));

    int vertices = 0;
    const double best = oracle::lp_vertex_minimum(lp.objective, lp.equality_lhs, lp.equality_rhs,
                                                  &vertices, 1.0);
    CHECK(vertices > 0);
    CHECK(s.fractional_load == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("fractional objective lower-bounds every binary assignment") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 1 + trial % 4;
    const int cols = 1 + trial % 6;
    const auto costs = random_costs(rng, rows, cols);
    const auto s = solve_cluster_schedule(costs, iota_ids(rows), iota_ids(cols));
    CHECK(s.fractional_load <= oracle::brute_force_assignment(costs) + 1e-12);
    CHECK((s.fractional.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(s.binary.colwise().sum() == Eigen::RowVectorXi::Ones(cols));
  }
}

TEST_CASE("rounding picks the largest share, first on ties") {
  Eigen::MatrixXd frac(3, 3);
  frac << 0.2, 0.5, 0.0,
          0.7, 0.5, 0.0,
          0.1, 0.0, 1.0;
  Eigen::MatrixXi expect(3, 3);
  expect << 0, 1, 0,
            1, 0, 0,
            0, 0, 1;
  CHECK(round_schedule(frac) == expect);
}

TEST_CASE("tied costs go to the lowest row") {
  Eigen::MatrixXd costs(3, 1);
  costs << 0.2, 0.1, 0.1;
  const auto s = solve_cluster_schedule(costs, iota_ids(3), iota_ids(1));
  CHECK(s.binary(1, 0) == 1);
}
