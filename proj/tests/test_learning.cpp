#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "scn/errors.hpp"
#include "scn/learning.hpp"

using namespace scn;

namespace {

std::vector<ClusterAction> two_actions() {
  return build_action_set(std::vector<int>{0}, std::vector<double>{1.0});
}

// Root of p = 1 / (1 + exp(-kappa * gap * (1 - p))), the stationary mass on
// the better of two actions whose utilities differ by `gap`.
double two_action_fixed_point(double kappa, double gap) {
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double p = 0.5 * (lo + hi);
    const double f = 1.0 / (1.0 + std::exp(-kappa * gap * (1.0 - p))) - p;
    (f > 0.0 ? lo : hi) = p;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("action set sizes and order") {
  const std::vector<double> full{1.0};
  const auto single = build_action_set(std::vector<int>{4}, full);
  REQUIRE(single.size() == 2);
  CHECK(single[0] == ClusterAction{{4, 1.0, true}});
  CHECK(single[1] == ClusterAction{{4, 1.0, false}});

  const auto pair = build_action_set(std::vector<int>{1, 2}, full);
  REQUIRE(pair.size() == 4);
  CHECK(pair[1] == ClusterAction{{1, 1.0, true}, {2, 1.0, false}});
  CHECK(pair[2] == ClusterAction{{1, 1.0, false}, {2, 1.0, true}});

  const std::vector<double> two{1.0, 0.5};
  const auto triple = build_action_set(std::vector<int>{0, 1, 2}, two);
  CHECK(triple.size() == 27);
  CHECK(triple[0][0].power == 0.5);
  CHECK(triple[1][2].power == 1.0);
  for (const auto& a : triple) CHECK(a.size() == 3);
}

TEST_CASE("action set cap") {
  const std::vector<int> ten{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<double> full{1.0};
  CHECK(build_action_set(ten, full).size() == 1024);
  const std::vector<int> eleven{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK_THROWS_AS(build_action_set(eleven, full), ActionSpaceTooLarge);
  CHECK_THROWS_AS(build_action_set(std::vector<int>{0, 1}, full, 3), ActionSpaceTooLarge);
}

TEST_CASE("applying an action writes powers and states") {
  NetworkConfiguration cfg;
  cfg.power = Eigen::VectorXd::Zero(3);
  cfg.active = Eigen::VectorXi::Zero(3);
  cfg.load = Eigen::VectorXd::Zero(3);
  apply_action(ClusterAction{{0, 0.5, true}, {2, 1.0, false}}, cfg);
  CHECK(cfg.power(0) == 0.5);
  CHECK(cfg.active(0) == 1);
  CHECK(cfg.active(2) == 0);
}

TEST_CASE("cluster cost") {
  std::vector<BaseStation> bss(2);
  bss[0].id = 0;
  bss[1].id = 1;
  for (auto& b : bss) {
    b.p_idle = 0.1;
    b.q = 1.1;
  }
  NetworkConfiguration cfg;
  cfg.power = Eigen::Vector2d(1.0, 1.0);
  cfg.active = Eigen::Vector2i(0, 0);
  cfg.load = Eigen::Vector2d::Zero();
  const std::vector<int> both{0, 1};
  const CostParams params;
  CHECK(cluster_cost(both, bss, cfg, Eigen::Vector2d::Zero(), params) == doctest::Approx(0.1));

  // P = 0.975 W at rho = 0.4: P_total = 0.39 + 0.11 = 0.5 W.
  cfg.active(0) = 1;
  cfg.power(0) = 0.39 / 0.4;
  cfg.load(0) = 0.4;
  REQUIRE(total_power(bss[0], cfg) == doctest::Approx(0.5));
  CHECK(bs_cost(bss[0], cfg, 0.4, params) == doctest::Approx(0.45));

  cfg.active(0) = 0;
  const CostParams doubled{1.0, 0.5};
  CHECK(cluster_cost(both, bss, cfg, Eigen::Vector2d::Zero(), doubled) ==
        doctest::Approx(2.0 * cluster_cost(both, bss, cfg, Eigen::Vector2d::Zero(), params)));
  CHECK(bs_cost(bss[0], cfg, 0.7, params) == doctest::Approx(0.05));
}

TEST_CASE("Boltzmann-Gibbs distribution") {
  const Eigen::Vector2d p = bg_distribution(Eigen::Vector2d(0.1, 0.0), 10.0);
  CHECK(p(0) == doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 1.0)).epsilon(1e-12));
  CHECK(p(1) == doctest::Approx(0.2689414214).epsilon(1e-9));

  const Eigen::Vector3d u = bg_distribution(Eigen::Vector3d(-1.0, 0.0, -0.2), 10.0);
  CHECK((u.array() - 1.0 / 3.0).abs().maxCoeff() < 1e-15);

  Eigen::VectorXd r(4);
  r << 0.3, -0.1, 0.05, 0.2;
  const Eigen::VectorXd base = bg_distribution(r, 10.0);
  Eigen::VectorXi perm(4);
  perm << 2, 0, 3, 1;
  Eigen::VectorXd rp(4);
  for (int i = 0; i < 4; ++i) rp(i) = r(perm(i));
  const Eigen::VectorXd permuted = bg_distribution(rp, 10.0);
  for (int i = 0; i < 4; ++i) CHECK(permuted(i) == doctest::Approx(base(perm(i))).epsilon(1e-14));

  const Eigen::VectorXd cool = bg_distribution(r, 1e-6);
  CHECK((cool.array() - 0.25).abs().maxCoeff() < 1e-3);

  const Eigen::Vector2d huge = bg_distribution(Eigen::Vector2d(1e4, 0.0), 10.0);
  CHECK(huge(0) == 1.0);
  CHECK(std::isfinite(huge(1)));
}

TEST_CASE("full utility step") {
  ClusterLearner learner(two_actions(), 10.0);
  learner.update(1, -0.7, 1.0, 0.5, 0.5);
  CHECK(learner.utility_estimates()(1) == -0.7);
  CHECK(learner.utility_estimates()(0) == 0.0);
}

TEST_CASE("full strategy step lands on the Boltzmann-Gibbs distribution") {
  ClusterLearner learner(two_actions(), 10.0);
  learner.update(0, -1.0, 1.0, 1.0, 0.3);
  learner.update(1, -0.2, 1.0, 1.0, 0.3);
  const Eigen::VectorXd regrets = learner.regrets();
  learner.update(0, -1.0, 0.5, 0.5, 1.0);
  CHECK((learner.pi() - bg_distribution(regrets, 10.0)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("regrets track utility estimates against the previous utility") {
  ClusterLearner learner(two_actions(), 10.0);
  learner.update(0, -1.0, 1.0, 1.0, 0.0);
  // First call: regret toward u_hat_old - u(t) with u_hat_old = 0.
  CHECK(learner.regrets()(0) == doctest::Approx(1.0));
  learner.update(1, 0.0, 1.0, 1.0, 0.0);
  // u_hat = (-1, 0) before this call; previous utility was -1.
  CHECK(learner.regrets()(0) == doctest::Approx(0.0));
  CHECK(learner.regrets()(1) == doctest::Approx(1.0));
  CHECK(learner.steps() == 2);
}

TEST_CASE("one-player game drifts to the better action and stays on the simplex") {
  const double kappa = 10.0;
  ClusterLearner learner(two_actions(), kappa);
  std::mt19937_64 rng(2024);
  for (int t = 1; t <= 10000; ++t) {
    const int a = learner.sample(rng);
    learner.update(a, a == 0 ? -1.0 : 0.0);
    REQUIRE(std::abs(learner.pi().sum() - 1.0) < 1e-9);
    REQUIRE(learner.pi().minCoeff() >= 0.0);
  }
  const double target = two_action_fixed_point(kappa, 1.0);
  CHECK(learner.pi()(1) > 0.5);
  CHECK(learner.pi()(1) == doctest::Approx(target).epsilon(0.05));
}

TEST_CASE("sampling") {
  std::mt19937_64 rng(5);
  ClusterLearner learner(build_action_set(std::vector<int>{0, 1}, std::vector<double>{1.0}), 10.0);
  std::vector<int> counts(4, 0);
  constexpr int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(learner.sample(rng))];
  for (int c : counts) CHECK(std::abs(c / static_cast<double>(draws) - 0.25) < 0.01);

  std::mt19937_64 a(17), b(17);
  for (int i = 0; i < 100; ++i) CHECK(learner.sample(a) == learner.sample(b));

  ClusterLearner sure(two_actions(), 10.0);
  for (int i = 0; i < 50; ++i) sure.update(0, 0.0, 1.0, 1.0, 1.0);
  for (int i = 0; i < 20; ++i) sure.update(1, -5.0, 1.0, 1.0, 1.0);
  CHECK(sure.pi()(0) > 0.999);
}

TEST_CASE("update rejects unknown actions") {
  ClusterLearner learner(two_actions(), 10.0);
  CHECK_THROWS_AS(learner.update(2, 0.0), std::out_of_range);
}

TEST_CASE("learning rate admissibility") {
  CHECK(PowerRate{0.6}.admissible());
  CHECK(PowerRate{0.7}.admissible());
  CHECK(PowerRate{0.8}.admissible());
  CHECK(PowerRate{1.0}.admissible());
  CHECK_FALSE(PowerRate{0.5}.admissible());
  CHECK_FALSE(PowerRate{1.2}.admissible());
  CHECK(PowerRate{0.6}(1) == 1.0);
  CHECK(PowerRate{0.5}(4) == doctest::Approx(0.5));
}
