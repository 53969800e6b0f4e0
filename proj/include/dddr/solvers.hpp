#pragma once

// Exact MILP solution by LP-based branch-and-bound, and the exhaustive
// enumeration oracle it is checked against.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dddr/milp_builder.hpp"
#include "dddr/milp_model.hpp"
#include "dddr/model.hpp"
#include "dddr/scenarios.hpp"
#include "dddr/simplex.hpp"

namespace dddr {

enum class MipStatus { optimal, infeasible, unbounded, node_limit };
const char* to_string(MipStatus s);

struct MipOptions {
  double absolute_gap = 1e-6;
  /// Added to the absolute gap, scaled by |incumbent|, to absorb LP round-off.
  double relative_gap = 1e-9;
  /// Checked before each node is expanded; an expansion solves up to three
  /// LPs, so node_count can end slightly above the limit.
  std::size_t node_limit = 1'000'000;
  double integrality_tolerance = 1e-6;
  SimplexOptions lp;
};

struct MipSolution {
  MipStatus status = MipStatus::infeasible;
  std::vector<double> values;
  double objective = kInfinity;
  double bound = -kInfinity;
  std::size_t node_count = 0;  // LP relaxations solved
  std::size_t lp_iterations = 0;
  std::vector<double> incumbent_history;  // objective after each improvement
};

/// Best-bound branch-and-bound over the binary variables. Branches on the most
/// fractional binary (ties: lowest index); children start from the parent's
/// basis.
MipSolution branch_and_bound(const MilpModel& model, const MipOptions& options = {});

struct OracleResult {
  LocationDecision y;
  double objective = kInfinity;
  std::size_t evaluated = 0;
  std::size_t skipped_infeasible = 0;  // plans whose ambiguity set is empty
};

/// Scans every plan (within the budget), scoring f.y plus the worst-case
/// expected cost. Ties go to the lexicographically smallest bit string.
OracleResult enumerate_oracle(const Instance& instance, const DemandModel& model,
                              std::optional<std::size_t> budget = std::nullopt);

/// SP counterpart of enumerate_oracle: f.y plus the scenario average of the
/// closed-form second-stage cost. Same ordering and tie rule.
OracleResult enumerate_sp(const Instance& instance, const ScenarioSet& scenarios,
                          std::optional<std::size_t> budget = std::nullopt);

// ---- plan-level solves ----------------------------------------------------

enum class Engine {
  branch_and_bound,  // build the MILP and run branch_and_bound
  enumeration,       // scan all plans with the closed forms
  automatic,         // branch_and_bound for small models (see PlanOptions), enumeration otherwise
};
const char* to_string(Engine e);
Engine engine_from_string(const std::string& name);  // "bnb", "enum", "auto"

struct PlanOptions {
  Engine engine = Engine::automatic;
  /// Engine::automatic uses branch_and_bound only up to this many facilities
  /// and, for the robust models, this many support points. Cover rows grow
  /// with the support and the relaxation is weak, so larger robust models
  /// are scanned plan by plan instead.
  std::size_t auto_bnb_facilities = 6;
  std::size_t auto_bnb_support = 30;
  std::optional<std::size_t> budget;
  bool with_cuts = false;
  /// Dual multiplier bounds for the robust models; defaults to 100 each.
  std::optional<DualBounds> bounds;
  /// Re-solve with doubled bounds while some bound is binding at the optimum.
  bool double_on_binding = true;
  std::size_t max_doublings = 8;
  MipOptions mip;
};

struct PlanResult {
  LocationDecision y;
  double objective = kInfinity;
  std::string method;
  Engine engine = Engine::branch_and_bound;
  MipStatus status = MipStatus::infeasible;
  std::size_t node_count = 0;
  std::size_t lp_iterations = 0;
  std::size_t plans_evaluated = 0;
  double bound_scale = 1.0;  // final dual bounds relative to the initial ones
  std::size_t doublings = 0;
  /// Names of dual multipliers still at their bound after the last attempt.
  std::vector<std::string> binding;
  std::size_t variables = 0;
  std::size_t constraints = 0;
};

PlanResult solve_dddr(const Instance& instance, const DemandModel& model, const PlanOptions& options = {});
/// solve_dddr on the model with its dependency weights removed.
PlanResult solve_dr(const Instance& instance, const DemandModel& model, const PlanOptions& options = {});
/// Sample-average plan; bounds, cuts and doubling do not apply.
PlanResult solve_sp(const Instance& instance, const ScenarioSet& scenarios, const PlanOptions& options = {});

// ---- external solver ------------------------------------------------------

struct ExternalResult {
  std::string status;
  double objective = 0.0;
  std::map<std::string, double> values;  // keyed by exported (sanitized) name
};

/// Runs `command` with the LP file path appended and parses its JSON reply
/// {"status": ..., "objective": ..., "values": {...}}. Throws std::runtime_error
/// when the command fails or prints something else.
ExternalResult external_solve(const std::string& command, const std::string& lp_path);

/// Command from the DDDR_EXTERNAL_SOLVER environment variable; empty when unset.
std::string external_solver_command();

}  // namespace dddr
