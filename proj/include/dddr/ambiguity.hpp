#pragma once

// Worst-case expected second-stage cost over the moment ambiguity set of a
// fixed plan. The set is separable by customer, so everything here works one
// customer at a time and sums.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dddr/model.hpp"

namespace dddr {

struct WorstCaseDistribution {
  Matrix pi;          // [customer][support index]
  double value = 0.0;
};

/// Multipliers of the dual moment problem, one entry per customer.
struct DualCertificate {
  std::vector<double> alpha, delta1, delta2, gamma1, gamma2;
  std::size_t size() const { return alpha.size(); }
  void resize(std::size_t n);
};

struct WorstCaseResult {
  double value = 0.0;
  std::vector<double> per_customer;
  WorstCaseDistribution distribution;
  DualCertificate certificate;  // read off the primal solve
};

/// Direction (alpha, delta1, delta2, gamma1, gamma2) of the dual feasible cone.
struct DualRay {
  std::string name;
  double alpha = 0.0, delta1 = 0.0, delta2 = 0.0, gamma1 = 0.0, gamma2 = 0.0;
  /// alpha + (delta1 - delta2) d + (gamma1 - gamma2) d^2
  double at(double d) const { return alpha + (delta1 - delta2) * d + (gamma1 - gamma2) * d * d; }
};

/// The three rays named in the literature for the ordered support.
std::array<DualRay, 3> extreme_rays(const Support& support);

/// Full generator set of the dual cone: the three rays above, then the chord
/// rays of interior consecutive support pairs and the two mean-hull rays.
std::vector<DualRay> dual_cone_generators(const Support& support);

struct RayCheck {
  std::size_t customer = 0;
  std::size_t ray = 0;  // index into dual_cone_generators
  std::string name;
  double slack = 0.0;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<RayCheck> checks;
  std::vector<RayCheck> violations() const;
  std::string describe() const;
};

/// Nonemptiness of the ambiguity set at every customer, certified ray by ray.
/// A generator is violated when its slack is below -tolerance.
FeasibilityReport ambiguity_feasible(const Instance& instance, const DemandModel& model, const LocationDecision& y,
                                     double tolerance = 1e-9);

/// Direct check: is the moment LP of customer j feasible? Solved by simplex.
bool moment_lp_feasible(const DemandModel& model, const LocationDecision& y, std::size_t j);

class AmbiguityInfeasible : public std::runtime_error {
 public:
  explicit AmbiguityInfeasible(FeasibilityReport report);
  const FeasibilityReport& report() const { return report_; }

 private:
  FeasibilityReport report_;
};

/// Solves one primal moment LP per customer. Throws AmbiguityInfeasible when
/// some customer's set is empty.
WorstCaseResult worst_case_expectation(const Instance& instance, const DemandModel& model, const LocationDecision& y);

/// Solves the dual moment LPs directly; fills `cert` when given.
double dual_lp_value(const Instance& instance, const DemandModel& model, const LocationDecision& y,
                     DualCertificate* cert = nullptr);

/// Dual objective of a certificate. Throws std::invalid_argument when the
/// certificate has negative multipliers or misses a covering constraint by
/// more than `tolerance` (relative to the constraint's scale).
double dual_value(const Instance& instance, const DemandModel& model, const LocationDecision& y,
                  const DualCertificate& cert, double tolerance = 1e-7);

}  // namespace dddr
