#include <cmath>
#include <random>

#include "doctest.h"
#include "dddr/ambiguity.hpp"
#include "dddr/inner.hpp"
#include "random_problems.hpp"

using namespace dddr;

namespace {

// One customer with fixed moments and no facilities (so h = (p - r) d).
Problem bare_customer(double mu, double sigma, Support support, double penalty = 5.0, double revenue = 2.0) {
  Instance inst({}, {{1, {0, 0}, penalty, revenue}}, {});
  DemandModel m;
  m.bar_mu = {mu};
  m.bar_sigma = {sigma};
  m.lambda_mu = {{}};
  m.lambda_sigma = {{}};
  m.support = std::move(support);
  m = apply_robustness_level(m, 0.0);
  return {inst, m};
}

LocationDecision random_plan(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  LocationDecision y(n);
  for (std::size_t i = 0; i < n; ++i) y.set(i, coin(rng));
  return y;
}

}  // namespace

TEST_CASE("no facilities and a pinned mean: value is linear in the mean") {
  const Problem p = bare_customer(30.0, 20.0, Support::range(1, 100, 1));
  const auto res = worst_case_expectation(p.instance, p.demand, LocationDecision(0));
  CHECK(res.value == doctest::Approx((5.0 - 2.0) * 30.0));
}

TEST_CASE("two-point support with pinned moments forces the distribution") {
  const Problem p = bare_customer(5.0, 5.0, Support({0.0, 10.0}));
  const auto res = worst_case_expectation(p.instance, p.demand, LocationDecision(0));
  CHECK(res.distribution.pi[0][0] == doctest::Approx(0.5));
  CHECK(res.distribution.pi[0][1] == doctest::Approx(0.5));
}

TEST_CASE("strong duality and certificates") {
  std::mt19937_64 rng(314);
  std::uniform_int_distribution<std::size_t> size(1, 5);
  std::uniform_real_distribution<double> kappa(0.0, 0.3);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = testing::random_problem(
        rng, {.facilities = size(rng), .customers = size(rng), .support_points = 12, .kappa = kappa(rng), .cv = 0.6});
    const auto y = random_plan(rng, p.instance.num_facilities());
    REQUIRE(ambiguity_feasible(p.instance, p.demand, y).feasible);
    const auto primal = worst_case_expectation(p.instance, p.demand, y);
    DualCertificate cert;
    const double dual = dual_lp_value(p.instance, p.demand, y, &cert);
    CHECK(std::abs(primal.value - dual) <= 1e-6 * std::max(1.0, std::abs(dual)));
    CHECK(dual_value(p.instance, p.demand, y, cert) == doctest::Approx(dual));
    CHECK(dual_value(p.instance, p.demand, y, primal.certificate) == doctest::Approx(primal.value));

    // the worst case distribution belongs to the ambiguity set
    for (std::size_t j = 0; j < p.instance.num_customers(); ++j) {
      double total = 0, mean = 0, second = 0;
      for (std::size_t k = 0; k < p.demand.support.size(); ++k) {
        const double pi = primal.distribution.pi[j][k];
        const double d = p.demand.support[k];
        total += pi;
        mean += pi * d;
        second += pi * d * d;
      }
      CHECK(total == doctest::Approx(1.0));
      const double mu = mean_of(p.demand, y, j);
      CHECK(mean <= mu + p.demand.eps_mu[j] + 1e-7);
      CHECK(mean >= mu - p.demand.eps_mu[j] - 1e-7);
      const auto w = second_moment_window(p.demand, y, j);
      CHECK(second <= w.hi * (1 + 1e-9) + 1e-7);
      CHECK(second >= w.lo * (1 - 1e-9) - 1e-7);
    }

    DualCertificate loose = cert;
    for (double& a : loose.alpha) a += 1e6;
    CHECK(dual_value(p.instance, p.demand, y, loose) >= primal.value);
    DualCertificate short_alpha = cert;
    for (double& a : short_alpha.alpha) a -= 1.0;
    CHECK_THROWS_AS(dual_value(p.instance, p.demand, y, short_alpha), std::invalid_argument);
    DualCertificate negative = cert;
    negative.gamma1[0] = -1.0;
    CHECK_THROWS_AS(dual_value(p.instance, p.demand, y, negative), std::invalid_argument);
  }
}

TEST_CASE("a zero certificate fails when costs are positive") {
  const Problem p = bare_customer(30.0, 20.0, Support::range(1, 100, 1));
  DualCertificate zero;
  zero.resize(1);
  CHECK_THROWS_AS(dual_value(p.instance, p.demand, LocationDecision(0), zero), std::invalid_argument);
}

TEST_CASE("widening the radii never lowers the worst case") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_problem(rng, {.facilities = 3, .customers = 3, .support_points = 15, .cv = 0.5});
    const auto y = random_plan(rng, 3);
    double last = -1e300;
    for (double kappa : {0.0, 0.1, 0.2, 0.3}) {
      const double v = worst_case_expectation(p.instance, apply_robustness_level(p.demand, kappa), y).value;
      CHECK(v >= last - 1e-7 * std::abs(v));
      last = v;
    }
  }
}

TEST_CASE("worst case bounds the expectation of any member distribution") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = testing::random_problem(rng, {.facilities = 3, .customers = 2, .support_points = 34, .cv = 0.4});
    p.demand.eps_sigma_lo.assign(2, 0.0);
    const auto y = random_plan(rng, 3);
    const double worst = worst_case_expectation(p.instance, p.demand, y).value;
    // member: the two-point law on the support points bracketing the mean
    double member = 0;
    for (std::size_t j = 0; j < 2; ++j) {
      const double mu = mean_of(p.demand, y, j);
      std::size_t k = 0;
      while (k + 2 < p.demand.support.size() && p.demand.support[k + 1] < mu) ++k;
      const double a = p.demand.support[k], b = p.demand.support[k + 1];
      const double w = (b - mu) / (b - a);
      REQUIRE(mu * mu + (mu - a) * (b - mu) <= second_moment_window(p.demand, y, j).hi);
      member += w * h_j_closed_form(p.instance, y, j, a).value + (1 - w) * h_j_closed_form(p.instance, y, j, b).value;
    }
    CHECK(worst >= member - 1e-7);
  }
}

TEST_CASE("extreme rays of the dual cone") {
  const auto rays = extreme_rays(Support::range(1, 100, 1));
  CHECK(rays[0].alpha == 2);
  CHECK(rays[0].delta1 == 0);
  CHECK(rays[0].delta2 == 3);
  CHECK(rays[0].gamma1 == 1);
  CHECK(rays[0].gamma2 == 0);
  CHECK(rays[1].alpha == 9900);
  CHECK(rays[1].delta2 == 199);
  CHECK(rays[2].alpha == -100);
  CHECK(rays[2].delta1 == 101);
  CHECK(rays[2].gamma2 == 1);

  const auto two = extreme_rays(Support({3.0, 8.0}));
  CHECK(two[0].alpha == two[1].alpha);
  CHECK(two[0].delta2 == two[1].delta2);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> gap(0.1, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v{gap(rng)};
    const std::size_t k = 2 + trial % 9;
    while (v.size() < k) v.push_back(v.back() + gap(rng));
    const Support s(v);
    for (const DualRay& r : dual_cone_generators(s))
      for (double d : s.values()) CHECK(r.at(d) >= -1e-12 * (1 + d * d));
  }
}

TEST_CASE("feasibility by rays") {
  SUBCASE("hand-checked third ray") {
    const Problem p = bare_customer(30.0, 30.0, Support::range(1, 100, 1));
    const auto rep = ambiguity_feasible(p.instance, p.demand, LocationDecision(0));
    CHECK(rep.feasible);
    CHECK(rep.checks[2].slack == doctest::Approx(1130.0));
  }
  SUBCASE("mean outside the support") {
    const Problem p = bare_customer(120.0, 1.0, Support::range(1, 100, 1));
    CHECK_FALSE(ambiguity_feasible(p.instance, p.demand, LocationDecision(0)).feasible);
    CHECK_FALSE(moment_lp_feasible(p.demand, LocationDecision(0), 0));
    CHECK_THROWS_AS(worst_case_expectation(p.instance, p.demand, LocationDecision(0)), AmbiguityInfeasible);
  }
  SUBCASE("variance too large for the support") {
    const Problem p = bare_customer(50.0, 80.0, Support::range(1, 100, 1));
    const auto rep = ambiguity_feasible(p.instance, p.demand, LocationDecision(0));
    CHECK_FALSE(rep.feasible);
    REQUIRE_FALSE(rep.violations().empty());
    CHECK(rep.violations().front().ray == 2);
    try {
      worst_case_expectation(p.instance, p.demand, LocationDecision(0));
      FAIL("expected an infeasibility error");
    } catch (const AmbiguityInfeasible& e) {
      CHECK(std::string(e.what()).find("ray 3") != std::string::npos);
    }
  }
  SUBCASE("interior chord catches what the three named rays miss") {
    // mean pinned at 50.5, second moment capped just under the lower hull
    Problem p = bare_customer(50.5, 0.0, Support::range(1, 100, 1));
    p.demand.bar_sigma = {std::sqrt(2550.3 - 50.5 * 50.5)};
    const auto rep = ambiguity_feasible(p.instance, p.demand, LocationDecision(0));
    CHECK_FALSE(rep.feasible);
    CHECK(rep.checks[0].slack >= 0);
    CHECK(rep.checks[1].slack >= 0);
    CHECK(rep.checks[2].slack >= 0);
    CHECK_FALSE(moment_lp_feasible(p.demand, LocationDecision(0), 0));
  }
}

TEST_CASE("ray certificate agrees with direct LP feasibility") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> mu(-10.0, 120.0), sd(0.0, 70.0), kap(0.0, 1.0);
  int infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> pts;
    std::uniform_int_distribution<int> step(1, 15);
    pts.push_back(step(rng));
    const std::size_t k = 2 + trial % 12;
    while (pts.size() < k) pts.push_back(pts.back() + step(rng));
    Problem p = bare_customer(std::max(0.0, mu(rng)), sd(rng), Support(pts));
    p.demand = apply_robustness_level(p.demand, trial % 3 == 0 ? 0.0 : kap(rng));
    const bool rays = ambiguity_feasible(p.instance, p.demand, LocationDecision(0)).feasible;
    const bool lp = moment_lp_feasible(p.demand, LocationDecision(0), 0);
    CHECK(rays == lp);
    infeasible += !lp;
  }
  CHECK(infeasible > 30);
  CHECK(infeasible < 270);
}
