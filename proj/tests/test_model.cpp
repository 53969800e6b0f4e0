#include <cmath>
#include <random>

#include "doctest.h"
#include "dddr/io.hpp"
#include "dddr/model.hpp"

using namespace dddr;

namespace {

// One customer, two facilities, with the small numbers used throughout the
// moment examples.
DemandModel two_facility_model() {
  DemandModel m;
  m.bar_mu = {10.0};
  m.bar_sigma = {10.0};
  m.lambda_mu = {{0.3, 0.2}};
  m.lambda_sigma = {{0.3, 0.2}};
  m.support = Support::range(1, 100, 1);
  m.eps_mu = {0.0};
  m.eps_sigma_lo = {1.0};
  m.eps_sigma_hi = {1.0};
  return m;
}

Instance line_instance(std::vector<double> costs, double penalty = 100.0) {
  std::vector<Facility> fs;
  Matrix c;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    fs.push_back({static_cast<int>(i + 1), {0, 0}, 1000.0, 10.0});
    c.push_back({costs[i]});
  }
  return Instance(fs, {{1, {0, 0}, penalty, 50.0}}, c);
}

}  // namespace

TEST_CASE("mean and variance follow the decision") {
  const DemandModel m = two_facility_model();
  CHECK(mean_of(m, LocationDecision({0, 0}), 0) == doctest::Approx(10.0));
  CHECK(mean_of(m, LocationDecision({1, 0}), 0) == doctest::Approx(13.0));
  CHECK(mean_of(m, LocationDecision({1, 1}), 0) == doctest::Approx(15.0));
  CHECK(variance_of(m, LocationDecision({0, 0}), 0) == doctest::Approx(100.0));
  CHECK(variance_of(m, LocationDecision({1, 1}), 0) == doctest::Approx(50.0));
  CHECK_THROWS_AS(mean_of(m, LocationDecision({0, 0}), 3), std::out_of_range);
  CHECK_THROWS_AS(variance_of(m, LocationDecision({0, 0}), 1), std::out_of_range);

  const DemandModel flat = m.without_dependency();
  for (std::uint64_t mask = 0; mask < 4; ++mask) {
    const auto y = LocationDecision::from_mask(mask, 2);
    CHECK(variance_of(flat, y, 0) == 100.0);
    CHECK(mean_of(flat, y, 0) == 10.0);
  }
}

TEST_CASE("moments are monotone in the plan") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  DemandModel m = two_facility_model();
  m.lambda_mu = {{u(rng), u(rng), u(rng), u(rng)}};
  m.lambda_sigma = {{u(rng), u(rng), u(rng), u(rng)}};
  for (std::uint64_t mask = 0; mask < 16; ++mask)
    for (std::size_t i = 0; i < 4; ++i) {
      if ((mask >> i) & 1u) continue;
      const auto y = LocationDecision::from_mask(mask, 4);
      const auto y2 = LocationDecision::from_mask(mask | (1u << i), 4);
      CHECK(mean_of(m, y2, 0) >= mean_of(m, y, 0));
      CHECK(variance_of(m, y2, 0) <= variance_of(m, y, 0));
      const auto w = second_moment_window(m, y, 0);
      CHECK(w.lo <= w.hi);
    }
}

TEST_CASE("second moment window") {
  DemandModel m = two_facility_model();
  // mu = 13 and sigma^2 = 50 at y = (1,0) with these weights
  m.lambda_sigma = {{0.5, 0.0}};
  m.eps_sigma_lo = {0.8};
  m.eps_sigma_hi = {1.2};
  const auto w = second_moment_window(m, LocationDecision({1, 0}), 0);
  CHECK(w.lo == doctest::Approx(175.2));
  CHECK(w.hi == doctest::Approx(262.8));

  m.eps_sigma_lo = {1.0};
  m.eps_sigma_hi = {1.0};
  const auto exact = second_moment_window(m, LocationDecision({1, 0}), 0);
  CHECK(exact.lo == exact.hi);
  CHECK(exact.lo == doctest::Approx(219.0));

  m.eps_sigma_lo = {0.0};
  CHECK(second_moment_window(m, LocationDecision({1, 1}), 0).lo == 0.0);
}

TEST_CASE("big lambda") {
  DemandModel m = two_facility_model();
  m.lambda_mu = {{0.3, 0.0}};
  m.lambda_sigma = {{0.3, 0.5}};
  CHECK(big_lambda(m, 0, 0) == doctest::Approx(39.0));
  m.bar_sigma = {2.0};
  CHECK(big_lambda(m, 0, 1) == doctest::Approx(-2.0));
  CHECK(big_lambda(m.without_dependency(), 0, 0) == 0.0);
}

TEST_CASE("big lambda agrees with expanding the raw second moment") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lam(0.0, 0.2), mom(5.0, 40.0);
  for (int trial = 0; trial < 50; ++trial) {
    DemandModel m = two_facility_model();
    m.bar_mu = {mom(rng)};
    m.bar_sigma = {mom(rng)};
    m.lambda_mu = {{lam(rng), lam(rng), lam(rng)}};
    m.lambda_sigma = {{lam(rng), lam(rng), lam(rng)}};
    auto raw = [&](const LocationDecision& y) {
      const double mu = mean_of(m, y, 0);
      return variance_of(m, y, 0) + mu * mu;
    };
    const double base = raw(LocationDecision(3));
    for (std::size_t i = 0; i < 3; ++i) {
      LocationDecision e(3);
      e.set(i, true);
      CHECK(std::abs(big_lambda(m, 0, i) - (raw(e) - base)) < 1e-9 * std::max(1.0, std::abs(base)));
    }
  }
}

TEST_CASE("distance-based dependency weights") {
  SUBCASE("single facility takes the whole row sum") {
    const auto w = lambda_from_distance(line_instance({42.0}), 25.0, 0.5);
    CHECK(w.lambda_mu[0][0] == doctest::Approx(0.5));
  }
  SUBCASE("two facilities") {
    const auto w = lambda_from_distance(line_instance({0.0, 25.0}), 25.0, 0.5);
    CHECK(w.lambda_mu[0][0] == doctest::Approx(0.3655).epsilon(1e-4));
    CHECK(w.lambda_mu[0][1] == doctest::Approx(0.1345).epsilon(1e-4));
    CHECK(w.lambda_sigma == w.lambda_mu);
  }
  SUBCASE("rows sum to the target") {
    const auto w = lambda_from_distance(line_instance({3.0, 9.0, 27.0, 81.0}), 25.0, 0.37);
    double s = 0;
    for (double v : w.lambda_mu[0]) s += v;
    CHECK(std::abs(s - 0.37) < 1e-12);
  }
  CHECK_THROWS_AS(lambda_from_distance(line_instance({1.0}), 25.0, 1.0), std::invalid_argument);
}

TEST_CASE("rho-means weights") {
  const Instance inst = line_instance({3.0, 7.0, 3.0, 1.0});
  SUBCASE("rho equal to the facility count") {
    const auto w = lambda_rho_means(inst, 4);
    for (double v : w.lambda_mu[0]) CHECK(v == doctest::Approx(0.25));
    double s = 0;
    for (double v : w.lambda_sigma[0]) s += v;
    CHECK(s < 1.0);
    CHECK(w.sigma_scale == 0.99);
  }
  SUBCASE("nearest facility") {
    const auto w = lambda_rho_means(line_instance({3.0, 7.0}), 1);
    CHECK(w.lambda_mu[0] == std::vector<double>{1.0, 0.0});
  }
  SUBCASE("distance ties go to the lower index") {
    const auto w = lambda_rho_means(inst, 2);
    CHECK(w.lambda_mu[0] == std::vector<double>{0.5, 0.0, 0.0, 0.5});
  }
  CHECK_THROWS_AS(lambda_rho_means(inst, 5), std::invalid_argument);
}

TEST_CASE("robustness level") {
  const DemandModel base = two_facility_model();
  const DemandModel k0 = apply_robustness_level(base, 0.0);
  CHECK(k0.eps_mu[0] == 0.0);
  CHECK(k0.eps_sigma_lo[0] == 1.0);
  CHECK(k0.eps_sigma_hi[0] == 1.0);
  const DemandModel k2 = apply_robustness_level(base, 0.2);
  CHECK(k2.eps_sigma_lo[0] == doctest::Approx(0.8));
  CHECK(k2.eps_sigma_hi[0] == doctest::Approx(1.2));
  CHECK(k2.eps_mu[0] == doctest::Approx(2.0));
  CHECK(apply_robustness_level(base, 1.0).eps_sigma_lo[0] == 0.0);
  CHECK_THROWS_AS(apply_robustness_level(base, 1.5), std::invalid_argument);
}

TEST_CASE("validation names the broken rule") {
  const Instance inst = line_instance({3.0, 7.0});
  DemandModel m = two_facility_model();
  CHECK(validate(inst, m).empty());

  const auto bad_penalty = validate(line_instance({3.0, 7.0}, 7.0), m);
  REQUIRE(bad_penalty.size() == 1);
  CHECK(bad_penalty[0].rule.find("penalty not strictly greater") != std::string::npos);

  m.lambda_sigma = {{0.6, 0.4}};
  const auto bad_sigma = validate(inst, m);
  REQUIRE(bad_sigma.size() == 1);
  CHECK(bad_sigma[0].entity == "customer 1");

  m = two_facility_model();
  m.bar_mu.push_back(1.0);
  CHECK_FALSE(validate(inst, m).empty());
}

TEST_CASE("supports and decisions") {
  const Support s = Support::range(1, 100, 1);
  CHECK(s.size() == 100);
  double lo, hi, step;
  CHECK(s.as_range(lo, hi, step));
  CHECK(step == 1.0);
  CHECK_FALSE(Support({1.0, 2.0, 4.0}).as_range(lo, hi, step));
  CHECK_THROWS_AS(Support({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Support({1.0, 1.0}), std::invalid_argument);

  const auto y = LocationDecision::from_mask(0b101, 4);
  CHECK(y.to_string() == "1010");
  CHECK(y.open_count() == 2);
  CHECK(y.open_indices() == std::vector<std::size_t>{0, 2});
  CHECK_THROWS_AS(LocationDecision({0, 2}), std::invalid_argument);
}

TEST_CASE("problem documents round-trip losslessly") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<Facility> fs;
  std::vector<Customer> cs;
  for (int i = 0; i < 3; ++i) fs.push_back({i + 1, {u(rng), u(rng)}, 5000 + u(rng), 10 + u(rng) / 10});
  for (int j = 0; j < 4; ++j) cs.push_back({j + 1, {u(rng), u(rng)}, 225.0, 150.0});
  const Instance inst = Instance::euclidean(fs, cs);
  DemandModel m;
  for (int j = 0; j < 4; ++j) {
    m.bar_mu.push_back(20 + u(rng) / 5);
    m.bar_sigma.push_back(m.bar_mu.back() / 3.0);
  }
  const auto w = lambda_from_distance(inst, 25.0, 0.5);
  m.lambda_mu = w.lambda_mu;
  m.lambda_sigma = w.lambda_sigma;
  m.support = Support::range(1, 100, 1);
  m = apply_robustness_level(m, 0.1);

  const Problem p{inst, m};
  const auto doc = problem_to_json(p);
  CHECK(doc.at("facilities")[0].contains("C"));
  CHECK(doc.at("demand").at("support").at("step") == 1.0);
  const Problem back = problem_from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back.instance.cost_matrix() == inst.cost_matrix());
  CHECK(back.demand.lambda_mu == m.lambda_mu);
  CHECK(back.demand.bar_sigma == m.bar_sigma);
  CHECK(back.demand.support.values() == m.support.values());
  CHECK(back.instance.facility(2).capacity == inst.facility(2).capacity);
  CHECK(problem_to_json(back).dump() == doc.dump());

  DemandModel irregular = m;
  irregular.support = Support({1.0, 2.5, 7.0});
  const Problem q = problem_from_json(problem_to_json(Problem{inst, irregular}));
  CHECK(q.demand.support.values() == irregular.support.values());
}
