#pragma once

// Out-of-sample testing of location plans: demand scenario generators, the
// per-scenario evaluation of a fixed plan, and the method comparison table.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dddr/model.hpp"
#include "dddr/scenarios.hpp"
#include "dddr/solvers.hpp"

namespace dddr {

// ---- scenario generators -------------------------------------------------

/// splitmix64 of (base, tag): independent seeds for sub-streams. The SP
/// training set of size n in a comparison uses derive_seed(train_seed, n).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);

/// Normal(mu_j(y), sigma_j^2(y)) per customer, negative draws clamped to 0.
ScenarioSet gen_normal(const DemandModel& model, const LocationDecision& y, std::size_t n, std::uint64_t seed);

struct GammaParameters {
  double shape = 0.0;
  double scale = 0.0;
};
/// scale = variance / mean, shape = mean / scale.
GammaParameters gamma_parameters(double mean, double variance);

/// Gamma with the plan's mean and variance per customer.
ScenarioSet gen_gamma(const DemandModel& model, const LocationDecision& y, std::size_t n, std::uint64_t seed);

/// Mean and standard deviation used by one block of perturbed draws.
struct BlockParameters {
  std::vector<double> mean;  // per customer
  std::vector<double> std;
};

/// Per block: mean ~ U[(1-kappa) mu_j(y), (1+kappa) mu_j(y)] and standard
/// deviation ~ U[(1-kappa) sigma_j(y), (1+kappa) sigma_j(y)].
std::vector<BlockParameters> perturbed_parameters(const DemandModel& model, const LocationDecision& y, double kappa,
                                                  std::size_t reps, std::uint64_t seed);

/// `reps` blocks of `per_rep` Normal draws, each block with its own
/// perturbed_parameters. With kappa = 0 the output equals
/// gen_normal(model, y, reps * per_rep, seed).
ScenarioSet gen_perturbed(const DemandModel& model, const LocationDecision& y, double kappa, std::uint64_t seed,
                          std::size_t reps = 10, std::size_t per_rep = 100);

/// SP training data: Normal(bar_mu_j, bar_sigma_j^2), ignoring any plan.
ScenarioSet gen_training(const DemandModel& model, std::size_t n, std::uint64_t seed);

enum class TestDistribution { normal, gamma, perturbed };
const char* to_string(TestDistribution d);
TestDistribution test_distribution_from_string(const std::string& name);

struct TestSetSpec {
  TestDistribution distribution = TestDistribution::normal;
  std::size_t size = 1000;  // reps * per_rep for the perturbed set
  double kappa = 0.0;       // perturbed only
  std::size_t reps = 10;    // perturbed only
};

ScenarioSet gen_test_set(const DemandModel& model, const LocationDecision& y, const TestSetSpec& spec,
                         std::uint64_t seed);

// ---- evaluation ------------------------------------------------------------

inline constexpr std::array<int, 4> kPercentileLevels{95, 90, 75, 50};

/// Upper-tail order statistic: with equal weights, the q% value is the
/// ceil((100 - q) * n / 100)-th largest entry, so 95% lies in the bad tail of a
/// cost. Weighted sets use the same rule on cumulative probability.
double upper_percentile(const std::vector<double>& values, const std::vector<double>& probabilities, int q);

struct EvaluationReport {
  double mean_objective = 0.0;
  double std_objective = 0.0;
  std::array<double, 4> objective_percentiles{};  // in kPercentileLevels order
  double mean_unmet = 0.0;
  double std_unmet = 0.0;
  std::array<double, 4> unmet_percentiles{};
  std::vector<double> objective;  // per scenario
  std::vector<double> unmet;      // per scenario
};

/// Per scenario: f.y + h(y, d) and the unmet demand of the optimal shipment.
/// Means and standard deviations (population form, probability weighted)
/// are accumulated over sorted values so they do not depend on scenario order.
EvaluationReport evaluate_plan(const Instance& instance, const LocationDecision& y, const ScenarioSet& scenarios);

// ---- method comparison -----------------------------------------------------

struct CompareConfig {
  std::vector<std::size_t> sp_sizes{20, 100};
  bool include_dr = true;
  bool include_dddr = true;
  TestSetSpec test;
  std::uint64_t train_seed = 1;
  std::uint64_t test_seed = 2;  // shared by every plan's test set
  PlanOptions plan;
};

struct MethodOutcome {
  PlanResult plan;
  EvaluationReport report;
};

struct Comparison {
  std::vector<MethodOutcome> methods;  // SP sizes ascending, then DR, then DDDR
  const MethodOutcome* find(const std::string& method) const;
};

Comparison compare_methods(const Instance& instance, const DemandModel& model, const CompareConfig& config);

/// Rows "method,statistic,value" under that header, '\n' line ends.
std::string comparison_csv(const Comparison& comparison);

/// Two row groups (objective, unmet demand) with mean, std and percentile
/// rows, one value per method, plus each plan's open facilities.
nlohmann::json comparison_table(const Comparison& comparison);

/// Relative improvement of `better` over `baseline` for a cost: (baseline - better) / |baseline|.
double relative_improvement(double baseline, double better);

}  // namespace dddr
