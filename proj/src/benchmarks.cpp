#include "dddr/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dddr/inner.hpp"

namespace dddr {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

void check_plan(const DemandModel& model, const LocationDecision& y) {
  if (y.size() != model.num_facilities())
    throw std::invalid_argument("location decision size does not match the demand model");
}

ScenarioSet empty_set(std::uint64_t seed, std::string generator) {
  ScenarioSet s;
  s.seed = seed;
  s.generator = std::move(generator);
  return s;
}

}  // namespace

ScenarioSet gen_normal(const DemandModel& model, const LocationDecision& y, std::size_t n, std::uint64_t seed) {
  return gen_perturbed(model, y, 0.0, seed, 1, n);
}

std::vector<BlockParameters> perturbed_parameters(const DemandModel& model, const LocationDecision& y, double kappa,
                                                  std::size_t reps, std::uint64_t seed) {
  check_plan(model, y);
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in [0, 1]");
  const std::size_t nc = model.num_customers();
  BlockParameters base;
  for (std::size_t j = 0; j < nc; ++j) {
    base.mean.push_back(mean_of(model, y, j));
    base.std.push_back(std::sqrt(variance_of(model, y, j)));
  }
  std::vector<BlockParameters> out(reps, base);
  if (kappa == 0.0) return out;
  // a stream separate from the demand draws, so kappa = 0 leaves those untouched
  std::mt19937_64 rng(derive_seed(seed, 0x5eed));
  for (BlockParameters& b : out)
    for (std::size_t j = 0; j < nc; ++j) {
      b.mean[j] = std::uniform_real_distribution<double>((1 - kappa) * base.mean[j], (1 + kappa) * base.mean[j])(rng);
      b.std[j] = std::uniform_real_distribution<double>((1 - kappa) * base.std[j], (1 + kappa) * base.std[j])(rng);
    }
  return out;
}

ScenarioSet gen_perturbed(const DemandModel& model, const LocationDecision& y, double kappa, std::uint64_t seed,
                          std::size_t reps, std::size_t per_rep) {
  if (reps == 0 || per_rep == 0) throw std::invalid_argument("scenario count must be positive");
  const std::vector<BlockParameters> blocks = perturbed_parameters(model, y, kappa, reps, seed);
  const std::size_t nc = model.num_customers();
  ScenarioSet out = empty_set(seed, kappa == 0.0 && reps == 1 ? "normal" : "perturbed");
  std::mt19937_64 draws(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  for (const BlockParameters& b : blocks)
    for (std::size_t w = 0; w < per_rep; ++w) {
      std::vector<double> d(nc);
      for (std::size_t j = 0; j < nc; ++j) d[j] = std::max(0.0, b.mean[j] + b.std[j] * z(draws));
      out.demands.push_back(std::move(d));
    }
  return out;
}

GammaParameters gamma_parameters(double mean, double variance) {
  if (!(mean > 0.0) || !(variance > 0.0)) throw std::invalid_argument("gamma needs a positive mean and variance");
  GammaParameters g;
  g.scale = variance / mean;
  g.shape = mean / g.scale;
  return g;
}

ScenarioSet gen_gamma(const DemandModel& model, const LocationDecision& y, std::size_t n, std::uint64_t seed) {
  check_plan(model, y);
  if (n == 0) throw std::invalid_argument("scenario count must be positive");
  const std::size_t nc = model.num_customers();
  std::vector<std::gamma_distribution<double>::param_type> params;
  for (std::size_t j = 0; j < nc; ++j) {
    const GammaParameters g = gamma_parameters(mean_of(model, y, j), variance_of(model, y, j));
    params.emplace_back(g.shape, g.scale);
  }
  ScenarioSet out = empty_set(seed, "gamma");
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma;
  for (std::size_t w = 0; w < n; ++w) {
    std::vector<double> d(nc);
    for (std::size_t j = 0; j < nc; ++j) d[j] = gamma(rng, params[j]);
    out.demands.push_back(std::move(d));
  }
  return out;
}

ScenarioSet gen_training(const DemandModel& model, std::size_t n, std::uint64_t seed) {
  ScenarioSet s = gen_normal(model.without_dependency(), LocationDecision(model.num_facilities()), n, seed);
  s.generator = "training";
  return s;
}

const char* to_string(TestDistribution d) {
  switch (d) {
    case TestDistribution::normal: return "normal";
    case TestDistribution::gamma: return "gamma";
    case TestDistribution::perturbed: return "perturbed";
  }
  return "unknown";
}

TestDistribution test_distribution_from_string(const std::string& name) {
  if (name == "normal") return TestDistribution::normal;
  if (name == "gamma") return TestDistribution::gamma;
  if (name == "perturbed") return TestDistribution::perturbed;
  throw std::invalid_argument("unknown test distribution '" + name + "' (expected normal, gamma or perturbed)");
}

ScenarioSet gen_test_set(const DemandModel& model, const LocationDecision& y, const TestSetSpec& spec,
                         std::uint64_t seed) {
  switch (spec.distribution) {
    case TestDistribution::normal: return gen_normal(model, y, spec.size, seed);
    case TestDistribution::gamma: return gen_gamma(model, y, spec.size, seed);
    case TestDistribution::perturbed:
      if (spec.reps == 0 || spec.size % spec.reps != 0)
        throw std::invalid_argument("perturbed test set size must be a multiple of the repetitions");
      return gen_perturbed(model, y, spec.kappa, seed, spec.reps, spec.size / spec.reps);
  }
  throw std::invalid_argument("unknown test distribution");
}

double upper_percentile(const std::vector<double>& values, const std::vector<double>& probabilities, int q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (q <= 0 || q > 100) throw std::invalid_argument("percentile level must lie in (0, 100]");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (probabilities.empty()) {
    const std::size_t n = values.size();
    const std::size_t rank = std::max<std::size_t>(1, (static_cast<std::size_t>(100 - q) * n + 99) / 100);
    return values[order[rank - 1]];
  }
  const double tail = (100.0 - q) / 100.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    acc += probabilities[order[k]];
    if (acc >= tail - 1e-12) return values[order[k]];
  }
  return values[order.back()];
}

namespace {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

// Weighted population moments accumulated in ascending value order.
Moments moments(const std::vector<double>& values, const ScenarioSet& s) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return s.probability(a) < s.probability(b);
  });
  Moments m;
  for (std::size_t k : order) m.mean += s.probability(k) * values[k];
  double var = 0.0;
  for (std::size_t k : order) var += s.probability(k) * (values[k] - m.mean) * (values[k] - m.mean);
  m.std = std::sqrt(std::max(0.0, var));
  return m;
}

}  // namespace

EvaluationReport evaluate_plan(const Instance& instance, const LocationDecision& y, const ScenarioSet& scenarios) {
  if (y.size() != instance.num_facilities())
    throw std::invalid_argument("location decision size does not match the number of facilities");
  scenarios.check(instance.num_customers());
  double opening = 0.0;
  for (std::size_t i = 0; i < instance.num_facilities(); ++i) opening += instance.facility(i).open_cost * y.value(i);

  EvaluationReport r;
  for (const auto& d : scenarios.demands) {
    r.objective.push_back(opening + h_closed_form(instance, y, d));
    r.unmet.push_back(recover_allocation(instance, y, d).unmet());
  }
  const Moments obj = moments(r.objective, scenarios);
  const Moments un = moments(r.unmet, scenarios);
  r.mean_objective = obj.mean;
  r.std_objective = obj.std;
  r.mean_unmet = un.mean;
  r.std_unmet = un.std;
  for (std::size_t k = 0; k < kPercentileLevels.size(); ++k) {
    r.objective_percentiles[k] = upper_percentile(r.objective, scenarios.probabilities, kPercentileLevels[k]);
    r.unmet_percentiles[k] = upper_percentile(r.unmet, scenarios.probabilities, kPercentileLevels[k]);
  }
  return r;
}

const MethodOutcome* Comparison::find(const std::string& method) const {
  for (const MethodOutcome& m : methods)
    if (m.plan.method == method) return &m;
  return nullptr;
}

Comparison compare_methods(const Instance& instance, const DemandModel& model, const CompareConfig& config) {
  Comparison out;
  std::vector<PlanResult> plans;
  std::vector<std::size_t> sizes = config.sp_sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (std::size_t n : sizes) plans.push_back(solve_sp(instance, gen_training(model, n, derive_seed(config.train_seed, n)), config.plan));
  if (config.include_dr) plans.push_back(solve_dr(instance, model, config.plan));
  if (config.include_dddr) plans.push_back(solve_dddr(instance, model, config.plan));
  for (PlanResult& plan : plans) {
    if (plan.status != MipStatus::optimal)
      throw std::runtime_error(plan.method + " did not produce an optimal plan (" + to_string(plan.status) + ")");
    const ScenarioSet test = gen_test_set(model, plan.y, config.test, config.test_seed);
    EvaluationReport report = evaluate_plan(instance, plan.y, test);
    out.methods.push_back({std::move(plan), std::move(report)});
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

}  // namespace

std::string comparison_csv(const Comparison& comparison) {
  std::ostringstream os;
  os << "method,statistic,value\n";
  for (const MethodOutcome& m : comparison.methods) {
    const EvaluationReport& r = m.report;
    auto put = [&](const std::string& stat, double v) { os << m.plan.method << "," << stat << "," << fmt(v) << "\n"; };
    put("mean_objective", r.mean_objective);
    put("std_objective", r.std_objective);
    for (std::size_t k = 0; k < kPercentileLevels.size(); ++k)
      put("objective_p" + std::to_string(kPercentileLevels[k]), r.objective_percentiles[k]);
    put("mean_unmet", r.mean_unmet);
    put("std_unmet", r.std_unmet);
    for (std::size_t k = 0; k < kPercentileLevels.size(); ++k)
      put("unmet_p" + std::to_string(kPercentileLevels[k]), r.unmet_percentiles[k]);
    put("open_facilities", static_cast<double>(m.plan.y.open_count()));
    put("model_objective", m.plan.objective);
  }
  return os.str();
}

nlohmann::json comparison_table(const Comparison& comparison) {
  nlohmann::json t;
  t["columns"] = nlohmann::json::array();
  for (const MethodOutcome& m : comparison.methods) t["columns"].push_back(m.plan.method);
  auto group = [&](const char* title, auto mean, auto stdev, auto pct) {
    nlohmann::json g;
    g["group"] = title;
    g["rows"] = nlohmann::json::array();
    auto row = [&](const std::string& label, auto value) {
      nlohmann::json r;
      r["statistic"] = label;
      r["values"] = nlohmann::json::array();
      for (const MethodOutcome& m : comparison.methods) r["values"].push_back(value(m.report));
      g["rows"].push_back(std::move(r));
    };
    row("average", mean);
    row("std. dev.", stdev);
    for (std::size_t k = 0; k < kPercentileLevels.size(); ++k)
      row(std::to_string(kPercentileLevels[k]) + "%", [&](const EvaluationReport& r) { return pct(r)[k]; });
    return g;
  };
  t["groups"] = nlohmann::json::array();
  t["groups"].push_back(group(
      "average opt. objective", [](const EvaluationReport& r) { return r.mean_objective; },
      [](const EvaluationReport& r) { return r.std_objective; },
      [](const EvaluationReport& r) { return r.objective_percentiles; }));
  t["groups"].push_back(group(
      "average unmet demand", [](const EvaluationReport& r) { return r.mean_unmet; },
      [](const EvaluationReport& r) { return r.std_unmet; },
      [](const EvaluationReport& r) { return r.unmet_percentiles; }));
  nlohmann::json plans = nlohmann::json::object();
  for (const MethodOutcome& m : comparison.methods) {
    nlohmann::json ids = nlohmann::json::array();
    for (std::size_t i : m.plan.y.open_indices()) ids.push_back(i + 1);
    plans[m.plan.method] = ids;
  }
  t["open_facilities"] = plans;
  return t;
}

double relative_improvement(double baseline, double better) {
  if (baseline == 0.0) throw std::invalid_argument("relative improvement over a zero baseline");
  return (baseline - better) / std::abs(baseline);
}

}  // namespace dddr
