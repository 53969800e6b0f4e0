#include "dddr/milp_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dddr {

void MilpModel::require_open() const {
  if (sealed_) throw std::logic_error("MilpModel is sealed");
}

std::size_t MilpModel::add_variable(std::string name, VarKind kind, double lower, double upper) {
  require_open();
  if (lower > upper) throw std::invalid_argument("variable " + name + ": lower bound exceeds upper bound");
  if (kind == VarKind::binary && (lower < 0.0 || upper > 1.0))
    throw std::invalid_argument("binary variable " + name + " must have bounds within [0,1]");
  if (index_.count(name)) throw std::invalid_argument("duplicate variable name " + name);
  const std::size_t id = variables_.size();
  index_.emplace(name, id);
  variables_.push_back(Variable{std::move(name), kind, lower, upper});
  return id;
}

void MilpModel::add_constraint(Constraint c) {
  require_open();
  for (const Term& t : c.terms)
    if (t.var >= variables_.size())
      throw std::out_of_range("constraint " + c.name + " references undeclared variable");
  if (constraint_names_.count(c.name)) throw std::invalid_argument("duplicate constraint name " + c.name);
  constraint_names_.emplace(c.name, constraints_.size());
  constraints_.push_back(std::move(c));
}

void MilpModel::add_constraints(std::vector<Constraint> cs) {
  for (Constraint& c : cs) add_constraint(std::move(c));
}

void MilpModel::add_objective_term(std::size_t var, double coeff) {
  require_open();
  if (var >= variables_.size()) throw std::out_of_range("objective references undeclared variable");
  if (coeff != 0.0) objective_.terms.push_back(Term{var, coeff});
}

void MilpModel::add_objective_constant(double value) {
  require_open();
  objective_.constant += value;
}

void MilpModel::set_bounds(std::size_t var, double lower, double upper) {
  require_open();
  Variable& v = variables_.at(var);
  if (lower > upper) throw std::invalid_argument("variable " + v.name + ": lower bound exceeds upper bound");
  v.lower = lower;
  v.upper = upper;
}

std::optional<std::size_t> MilpModel::find_variable(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MilpModel::variable_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("unknown variable " + name);
  return it->second;
}

std::size_t MilpModel::num_binaries() const {
  return static_cast<std::size_t>(
      std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) { return v.kind == VarKind::binary; }));
}

std::size_t MilpModel::num_nonzeros() const {
  std::size_t nnz = 0;
  for (const Constraint& c : constraints_) nnz += c.terms.size();
  return nnz;
}

double MilpModel::evaluate_objective(const std::vector<double>& values) const {
  double total = objective_.constant;
  for (const Term& t : objective_.terms) total += t.coeff * values.at(t.var);
  return total;
}

double MilpModel::max_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    worst = std::max(worst, variables_[i].lower - values.at(i));
    worst = std::max(worst, values.at(i) - variables_[i].upper);
  }
  for (const Constraint& c : constraints_) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coeff * values.at(t.var);
    switch (c.sense) {
      case Sense::less_equal: worst = std::max(worst, lhs - c.rhs); break;
      case Sense::greater_equal: worst = std::max(worst, c.rhs - lhs); break;
      case Sense::equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

std::vector<std::string> MilpModel::check_invariants() const {
  std::vector<std::string> problems;
  for (const Variable& v : variables_) {
    if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0))
      problems.push_back("binary " + v.name + " has bounds outside [0,1]");
    if (v.lower > v.upper) problems.push_back("variable " + v.name + " has empty domain");
  }
  for (const Constraint& c : constraints_) {
    for (const Term& t : c.terms) {
      if (t.var >= variables_.size()) problems.push_back("constraint " + c.name + " references undeclared variable");
      if (!std::isfinite(t.coeff)) problems.push_back("constraint " + c.name + " has a non-finite coefficient");
    }
    if (!std::isfinite(c.rhs)) problems.push_back("constraint " + c.name + " has a non-finite right-hand side");
  }
  return problems;
}

}  // namespace dddr
