#pragma once

// Second-stage cost of a fixed plan: ship from open facilities, pay the
// penalty on whatever is left, collect revenue on all demand.

#include <cstddef>
#include <vector>

#include "dddr/model.hpp"

namespace dddr {

/// Index 0 stands for the penalty column; facility i is reported as i + 1.
inline constexpr std::size_t kPenaltyColumn = 0;

struct InnerValue {
  double value = 0.0;
  std::size_t argmax = kPenaltyColumn;
};

/// Cost at customer j for realized demand d (transport + penalty - revenue).
InnerValue h_j_closed_form(const Instance& instance, const LocationDecision& y, std::size_t j, double d);

/// Sum over customers of h_j_closed_form.
double h_closed_form(const Instance& instance, const LocationDecision& y, const std::vector<double>& d);

struct Allocation {
  Matrix x;                // shipped [facility][customer]
  std::vector<double> s;   // unmet per customer
  double value = 0.0;
  double unmet() const;
};

/// Per-customer greedy fill in ascending transport cost; remainder unmet.
Allocation recover_allocation(const Instance& instance, const LocationDecision& y, const std::vector<double>& d);

/// Optimal value of the transportation LP, solved with the simplex engine.
double transport_lp_oracle(const Instance& instance, const LocationDecision& y, const std::vector<double>& d);

/// One member of the family whose pointwise max over i* is h_j(y, d):
/// constant + sum_i coeff[i] y_i.
struct AffineMember {
  std::size_t i_star = kPenaltyColumn;
  double constant = 0.0;
  std::vector<double> coeff;
  double at(const LocationDecision& y) const;
};

/// Every candidate i* in {penalty} + facilities:
/// (c_{i*j} - r_j) d + sum_{c_ij < c_{i*j}} C_i (c_ij - c_{i*j}) y_i.
std::vector<AffineMember> theta_affine(const Instance& instance, std::size_t j, double d);
std::vector<AffineMember> theta_affine(const Instance& instance, const Support& support, std::size_t j, std::size_t k);

}  // namespace dddr
