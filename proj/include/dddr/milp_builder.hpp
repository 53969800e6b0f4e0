#pragma once

// Builders for the facility-location MILPs: the decision-dependent robust
// model, its decision-independent special case, the sample-average model,
// and a plain-text export.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dddr/milp_model.hpp"
#include "dddr/model.hpp"
#include "dddr/scenarios.hpp"

namespace dddr {

/// Upper bounds on the dual multipliers, one entry per customer.
struct DualBounds {
  std::vector<double> ub_delta1, ub_delta2, ub_gamma1, ub_gamma2;

  static DualBounds uniform(std::size_t customers, double value = 100.0);
  DualBounds scaled(double factor) const;
  void check(std::size_t customers) const;
};

/// Four inequalities making w = eta * z exact for binary z and eta in [lo, hi].
std::vector<Constraint> mccormick_bilinear(const std::string& w_name, std::size_t w, std::size_t eta, std::size_t z,
                                           double eta_lo, double eta_hi);

/// Six inequalities making w = eta * z1 * z2 exact for binary z1, z2 and
/// eta in [lo, hi] with lo >= 0. The caller declares w with bounds [0, hi];
/// without w >= 0 the rows allow w down to -lo when both binaries are zero.
std::vector<Constraint> mccormick_trilinear(const std::string& w_name, std::size_t w, std::size_t eta, std::size_t z1,
                                            std::size_t z2, double eta_lo, double eta_hi);

struct DddrOptions {
  std::optional<std::size_t> budget;  // at most this many open facilities
  bool with_cuts = false;
};

/// Exact MILP of the decision-dependent robust problem. Variables y_1..y_n
/// come first, in facility order. Product variables are only created where
/// their objective coefficient is nonzero.
MilpModel build_dddr(const Instance& instance, const DemandModel& model, const DualBounds& bounds,
                     const DddrOptions& options = {});

/// The same model with all dependency weights zeroed.
MilpModel build_dr(const Instance& instance, const DemandModel& model, const DualBounds& bounds,
                   const DddrOptions& options = {});

/// Sample-average model over the scenarios, with the plan as binaries.
MilpModel build_sp_saa(const Instance& instance, const ScenarioSet& scenarios,
                       std::optional<std::size_t> budget = std::nullopt);

/// Plan encoded in a solution of any of the models above.
LocationDecision decision_from(const MilpModel& model, const std::vector<double>& values);

/// Names of the bounded dual multipliers whose value is within `tol` of the
/// upper bound.
std::vector<std::string> binding_dual_bounds(const MilpModel& model, const std::vector<double>& values,
                                             double tol = 1e-6);

/// CPLEX-style LP text: objective, constraints, bounds, binaries.
std::string export_lp_text(const MilpModel& model);

/// Counts of variables and constraints, overall and per name family.
nlohmann::json model_statistics(const MilpModel& model);

}  // namespace dddr
