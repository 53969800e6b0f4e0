#pragma once

// Experiment configuration, seeded instance generation and the run pipeline
// behind the command-line tool.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dddr/benchmarks.hpp"
#include "dddr/model.hpp"
#include "dddr/solvers.hpp"

namespace dddr {

inline constexpr const char* kVersion = "0.1.0";

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct LambdaRecipe {
  std::string kind = "distance";  // "distance" or "rho_means"
  double scale = 25.0;            // distance: exp(-c / scale)
  double row_sum = 0.5;           // distance: target row sum; 0 removes the dependency
  std::size_t rho = 3;            // rho_means
  double sigma_scale = 0.99;      // rho_means: factor on the sigma rows
};

struct SupportSpec {
  double min = 1.0;
  double max = 100.0;
  std::size_t points = 100;  // evenly spaced over [min, max]
};

struct ExperimentConfig {
  std::size_t facilities = 10;
  std::size_t customers = 20;
  std::string layout = "random";  // or "figure2" for the fixed 10 x 20 coordinates
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> methods{"sp", "dr", "dddr"};
  std::vector<std::size_t> sp_scenarios{20, 100};
  double penalty = 225.0;
  double revenue = 150.0;
  SupportSpec support;
  double kappa = 0.0;
  std::optional<std::size_t> budget;
  LambdaRecipe lambda;
  double cv2 = 1.0;  // squared coefficient of variation: bar_sigma^2 = cv2 * bar_mu^2
  double cost_multiplier = 1.0;
  Interval coordinate{0.0, 100.0};
  Interval open_cost{5000.0, 10000.0};
  Interval capacity{10.0, 20.0};
  Interval mean{20.0, 40.0};
  TestSetSpec test;
  double dual_bound = 100.0;
  bool cuts = false;
  std::string engine = "auto";
  bool export_lp = false;

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

/// Unknown keys are rejected so typos do not silently fall back to defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// FNV-1a (64 bit) of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Seeded instance: coordinates, costs, capacities and moments drawn from the
/// configured ranges, dependency weights from the configured recipe.
Problem generate_instance(const ExperimentConfig& config, std::uint64_t seed);

struct Layout {
  std::vector<Point> facilities;
  std::vector<Point> customers;
};

/// The fixed case-study coordinates: 10 candidate facilities, 20 customers.
Layout fixture_figure2();

/// Plan options implied by the configuration.
PlanOptions plan_options(const ExperimentConfig& config, std::size_t customers);

/// Comparison settings implied by the configuration and one instance seed.
CompareConfig compare_config(const ExperimentConfig& config, std::uint64_t seed);

/// JSON record of a solved plan; open facility ids are listed ascending.
nlohmann::json plan_to_json(const Instance& instance, const PlanResult& plan);
LocationDecision plan_from_json(const nlohmann::json& doc, const Instance& instance);

struct RunSummary {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;  // relative to directory, in write order
  std::vector<Comparison> comparisons;       // one per seed
};

/// For every seed: generate, solve each method, evaluate, write
///   seed_<s>/instance.json, seed_<s>/plans/<method>.json,
///   seed_<s>/comparison.csv, seed_<s>/table.json, optional LP exports,
/// then summary.csv (means over seeds) and manifest.json. Files are written
/// via temp-and-rename and contain no timestamps.
RunSummary run(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace dddr
