#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pevgame/errors.hpp"
#include "pevgame/stackelberg.hpp"

using namespace pevgame;

namespace {

Scenario make(std::vector<double> b, std::vector<double> s, double capacity, double price = 17.0) {
  Scenario sc;
  sc.grid = {capacity, price};
  for (std::size_t n = 0; n < b.size(); ++n) sc.pevgs.push_back({b[n], s[n], 0});
  return sc;
}

Scenario random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_dist(2, 25), c_dist(0, 3);
  std::uniform_real_distribution<double> b(35, 65), s(1, 2);
  const double caps[] = {60, 80, 90, 99};
  const int n = n_dist(rng);
  Scenario sc;
  sc.grid = {caps[c_dist(rng)], 17};
  for (int i = 0; i < n; ++i) sc.pevgs.push_back({b(rng), s(rng), 0});
  return sc;
}

double sum(const std::vector<double>& v) {
  double t = 0;
  for (double x : v) t += x;
  return t;
}

}  // namespace

TEST_CASE("worked instance: multiplier, price, demands and revenue") {
  const Scenario sc = make({40, 50}, {1, 2}, 30);
  const GseOutcome out = gse_solve(sc);
  CHECK(std::abs(out.lambda_initial - 19.0 / 3) <= 1e-7);
  CHECK(out.p_star == doctest::Approx(70.0 / 3).epsilon(1e-9));
  CHECK(out.x_star[0] == doctest::Approx(50.0 / 3).epsilon(1e-9));
  CHECK(out.x_star[1] == doctest::Approx(40.0 / 3).epsilon(1e-9));
  CHECK(out.revenue == doctest::Approx(700).epsilon(1e-9));
  CHECK(std::abs(out.lambda) <= 1e-6);
  CHECK_FALSE(out.slack_at_initial_price);
}

TEST_CASE("worked instance agrees with a brute-force price scan over the 2-D KKT followers") {
  const auto scan = oracle::scan_price_2d(40, 50, 1, 2, 30, 50, 0.01);
  // First grid price at or above 70/3 where the capacity stops binding.
  CHECK(scan.price == doctest::Approx(23.34).epsilon(1e-12));
  const GseOutcome out = closed_form_gse(make({40, 50}, {1, 2}, 30));
  CHECK(out.revenue >= scan.revenue - 1e-9);
  CHECK(out.revenue - scan.revenue <= 30 * 0.01 + 1e-9);

  const auto ve = oracle::kkt_2d(40, 50, 1, 2, 30, 17);
  CHECK(ve.lambda == doctest::Approx(19.0 / 3).epsilon(1e-12));
  CHECK(17 + ve.lambda == doctest::Approx(out.p_star).epsilon(1e-12));
}

TEST_CASE("optimal price examples") {
  SUBCASE("symmetric pair") {
    const GseOutcome out = gse_solve(make({50, 50}, {1, 1}, 20));
    CHECK(out.p_star == doctest::Approx(40).epsilon(1e-9));
    CHECK(out.x_star[0] == doctest::Approx(10).epsilon(1e-9));
    CHECK(out.x_star[1] == doctest::Approx(10).epsilon(1e-9));
  }
  SUBCASE("single group binding") {
    const GseOutcome out = gse_solve(make({40}, {2}, 5));
    CHECK(out.p_star == doctest::Approx(30).epsilon(1e-9));
    CHECK(out.x_star[0] == doctest::Approx(5).epsilon(1e-9));
  }
  SUBCASE("symmetric five groups") {
    const Scenario sc = make({50, 50, 50, 50, 50}, {1, 1, 1, 1, 1}, 99);
    const GseOutcome out = gse_solve(sc);
    CHECK(out.p_star == doctest::Approx(30.2).epsilon(1e-9));
    for (double x : out.x_star) CHECK(x == doctest::Approx(19.8).epsilon(1e-9));
    const GseOutcome cf = closed_form_gse(sc);
    CHECK(cf.p_star == doctest::Approx(30.2).epsilon(1e-12));
  }
  SUBCASE("optimal price from a VE") {
    const Scenario sc = make({40, 50}, {1, 2}, 30);
    const VeSolution ve = ss_solve(sc, 17, std::vector<double>{0, 0});
    CHECK(optimal_price(sc, ve, 17) == doctest::Approx(70.0 / 3).epsilon(1e-8));
  }
  SUBCASE("no interior coordinate") {
    const Scenario sc = make({40, 50}, {1, 2}, 30);
    VeSolution ve;
    ve.x_star = {0, 0};
    CHECK_THROWS_AS(optimal_price(sc, ve, 17), DegenerateScenario);
  }
}

TEST_CASE("inactive group is dropped by the active-set iteration") {
  // All active: (40 + 25 + 10 - 30) / 2.5 = 18 > 10, so group 3 leaves.
  // Then (40 + 25 - 30) / 1.5 = 70/3.
  const Scenario sc = make({40, 50, 10}, {1, 2, 1}, 30);
  const GseOutcome cf = closed_form_gse(sc);
  CHECK(cf.p_star == doctest::Approx(70.0 / 3).epsilon(1e-12));
  CHECK(cf.x_star[2] == 0.0);
  CHECK(cf.x_star[0] == doctest::Approx(50.0 / 3).epsilon(1e-12));

  const GseOutcome out = gse_solve(sc);
  CHECK(out.p_star == doctest::Approx(cf.p_star).epsilon(1e-9));
  CHECK(std::abs(out.x_star[2]) <= 1e-9);

  // Brute force over prices against water-filled followers.
  double best_p = 0, best_rev = -1;
  for (int i = 0; i <= 5000; ++i) {
    const double p = i * 0.01;
    const auto ve = oracle::water_fill({40, 50, 10}, {1, 2, 1}, 30, p);
    if (sum(ve.x) < 30 - 1e-9) continue;
    const double rev = p * sum(ve.x);
    if (rev > best_rev) best_rev = rev, best_p = p;
  }
  CHECK(best_p == doctest::Approx(23.33).epsilon(1e-12));
}

TEST_CASE("binding price level and closed-form VE") {
  const Scenario sc = make({40, 50}, {1, 2}, 30);
  CHECK(binding_price_level(sc) == doctest::Approx(70.0 / 3).epsilon(1e-12));
  for (double p : {0.0, 5.0, 17.0, 23.0, 30.0}) {
    const VeSolution cf = closed_form_ve(sc, p);
    const auto oracle_ve = oracle::kkt_2d(40, 50, 1, 2, 30, p);
    CHECK(cf.lambda == doctest::Approx(oracle_ve.lambda).epsilon(1e-9));
    CHECK(cf.x_star[0] == doctest::Approx(oracle_ve.x[0]).epsilon(1e-9));
    CHECK(cf.x_star[1] == doctest::Approx(oracle_ve.x[1]).epsilon(1e-9));
  }
}

TEST_CASE("slack capacity at the initial price") {
  SUBCASE("binds at zero price") {
    // (40 - L) + (50 - L)/2 = 50 gives L = 10.
    const GseOutcome out = gse_solve(make({40, 50}, {1, 2}, 50));
    CHECK(out.slack_at_initial_price);
    CHECK(out.lambda_initial == 0.0);
    CHECK(out.p_star == doctest::Approx(10).epsilon(1e-9));
    CHECK(sum(out.x_star) == doctest::Approx(50).epsilon(1e-9));
  }
  SUBCASE("never binds") {
    const Scenario sc = make({40, 50}, {1, 2}, 100);
    const GseOutcome out = gse_solve(sc);
    CHECK(out.p_star == 0.0);
    CHECK(out.x_star[0] == doctest::Approx(40).epsilon(1e-9));
    CHECK(out.x_star[1] == doctest::Approx(25).epsilon(1e-9));
    CHECK(closed_form_gse(sc).p_star == 0.0);
  }
}

TEST_CASE("gse_solve matches the closed form on random instances") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 150; ++i) {
    const Scenario sc = random_instance(rng);
    const GseOutcome out = gse_solve(sc);
    const GseOutcome cf = closed_form_gse(sc);
    CHECK(std::abs(out.p_star - cf.p_star) <= 1e-6);
    CHECK(std::abs(out.revenue - cf.revenue) <= 1e-6);
    for (std::size_t n = 0; n < sc.size(); ++n) {
      CHECK(std::abs(out.x_star[n] - cf.x_star[n]) <= 1e-6);
    }
    // Re-solving at p* gives the unconstrained optima with a vanishing multiplier.
    CHECK(out.lambda <= 1e-6);
    for (std::size_t n = 0; n < sc.size(); ++n) {
      const auto& g = sc.pevgs[n];
      CHECK(std::abs(out.x_star[n] - std::max(0.0, (g.b - out.p_star) / g.s)) <= 1e-6);
    }
  }
}

TEST_CASE("price equals initial price plus multiplier when all groups are interior") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const Scenario sc = random_instance(rng);
    const GseOutcome out = gse_solve(sc);
    bool interior = true;
    for (double x : out.x_star) interior = interior && x > 1e-7;
    if (out.lambda_initial <= 0 || !interior) continue;
    CHECK(std::abs(out.p_star - (17 + out.lambda_initial)) <= 1e-8);
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("equilibrium allocation is socially optimal at p*") {
  std::mt19937_64 rng(99);
  for (int inst = 0; inst < 5; ++inst) {
    const Scenario sc = random_instance(rng);
    const GseOutcome out = gse_solve(sc);
    const double best = joint_utility(sc, out.x_star, out.p_star);
    std::uniform_real_distribution<double> unit(0, 1);
    std::vector<double> y(sc.size());
    for (int k = 0; k < 10000; ++k) {
      double w = 0;
      for (double& v : y) w += (v = unit(rng));
      const double total = sc.capacity() * unit(rng);
      for (double& v : y) v *= total / w;
      CHECK(joint_utility(sc, y, out.p_star) <= best + 1e-9);
    }
  }
  // 2-D: grid maximizer of the joint utility sits at the equilibrium.
  const auto grid = oracle::joint_utility_grid_2d(40, 50, 1, 2, 30, 70.0 / 3, 0.01);
  const GseOutcome out = gse_solve(make({40, 50}, {1, 2}, 30));
  CHECK(joint_utility(make({40, 50}, {1, 2}, 30), out.x_star, out.p_star) >= grid.value - 1e-9);
  CHECK(grid.x1 == doctest::Approx(16.67).epsilon(1e-9));
}

TEST_CASE("check_gse") {
  const Scenario sc = make({40, 50}, {1, 2}, 30);
  const GseOutcome cf = closed_form_gse(sc);

  SUBCASE("closed form passes") {
    const GseCheck check = check_gse(sc, cf);
    CHECK(check.pass);
    CHECK(check.max_violation <= 1e-6);
  }
  SUBCASE("iterative outcome passes") {
    CHECK(check_gse(sc, gse_solve(sc)).pass);
  }
  SUBCASE("perturbed allocation fails") {
    GseOutcome bad = cf;
    bad.x_star[0] += 1;
    bad.x_star[1] -= 1;
    bad.utilities = {};
    const GseCheck check = check_gse(sc, bad);
    CHECK_FALSE(check.pass);
    // Group 1 moving back from 50/3 + 1 to 50/3 gains s/2 * 1^2.
    CHECK(check.follower_violation == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("a higher price earns strictly less") {
    const double p = cf.p_star + 5;
    const VeSolution ve = closed_form_ve(sc, p);
    CHECK(grid_revenue(p, ve.x_star) < cf.revenue);
    const auto oracle_ve = oracle::kkt_2d(40, 50, 1, 2, 30, p);
    CHECK(p * (oracle_ve.x[0] + oracle_ve.x[1]) < 700);
  }
  SUBCASE("underpricing is a leader violation") {
    GseOutcome low = cf;
    low.p_star -= 3;
    low.revenue = low.p_star * 30;
    const GseCheck check = check_gse(sc, low);
    CHECK_FALSE(check.pass);
    // Best binding grid price is 23.33: 30 * (23.33 - (70/3 - 3)).
    CHECK(check.leader_violation == doctest::Approx(30 * (23.33 - (70.0 / 3 - 3))).epsilon(1e-9));
  }
}
