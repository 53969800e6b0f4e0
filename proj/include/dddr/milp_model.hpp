#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace dddr {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { continuous, binary };
enum class Sense { less_equal, equal, greater_equal };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInfinity;
};

struct Term {
  std::size_t var;
  double coeff;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::less_equal;
  double rhs = 0.0;
};

/// Linear objective (always minimized) with a constant offset.
struct Objective {
  std::vector<Term> terms;
  double constant = 0.0;
};

/// Solver-agnostic container for a mixed-binary linear program.
///
/// Variables and constraints are addressed by insertion index; names are
/// unique. Once sealed the model rejects further edits.
class MilpModel {
 public:
  std::size_t add_variable(std::string name, VarKind kind, double lower, double upper);
  std::size_t add_continuous(std::string name, double lower, double upper) {
    return add_variable(std::move(name), VarKind::continuous, lower, upper);
  }
  std::size_t add_binary(std::string name) { return add_variable(std::move(name), VarKind::binary, 0.0, 1.0); }

  void add_constraint(Constraint c);
  void add_constraints(std::vector<Constraint> cs);

  void add_objective_term(std::size_t var, double coeff);
  void add_objective_constant(double value);

  void set_bounds(std::size_t var, double lower, double upper);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Objective& objective() const { return objective_; }
  const Variable& variable(std::size_t i) const { return variables_.at(i); }

  std::optional<std::size_t> find_variable(const std::string& name) const;
  std::size_t variable_index(const std::string& name) const;  // throws std::out_of_range

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  std::size_t num_binaries() const;
  std::size_t num_nonzeros() const;

  /// Free-form annotations carried along with the model (e.g. recipe notes).
  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  /// Objective value of an assignment, including the constant.
  double evaluate_objective(const std::vector<double>& values) const;
  /// Largest violation over all constraints and bounds for an assignment.
  double max_violation(const std::vector<double>& values) const;

  /// Structural problems (dangling references, bad binary bounds, ...).
  std::vector<std::string> check_invariants() const;

  void seal() { sealed_ = true; }
  bool sealed() const { return sealed_; }

 private:
  void require_open() const;

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  Objective objective_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> constraint_names_;
  std::map<std::string, std::string> metadata_;
  bool sealed_ = false;
};

}  // namespace dddr
