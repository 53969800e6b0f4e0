#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "dddr/milp_model.hpp"

namespace dddr {

/// minimize cost'x + offset  s.t.  row_lower <= A x <= row_upper,  col_lower <= x <= col_upper.
struct LinearProgram {
  Eigen::SparseMatrix<double> matrix;  // rows x cols, column major
  std::vector<double> cost;
  std::vector<double> col_lower, col_upper;
  std::vector<double> row_lower, row_upper;
  double offset = 0.0;

  std::size_t rows() const { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(matrix.cols()); }
};

/// Row i of `model` becomes row i of the program. Binaries are kept at their
/// [0,1] bounds, i.e. relaxed.
LinearProgram to_linear_program(const MilpModel& model);

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };
const char* to_string(LpStatus s);

enum class VarState : std::uint8_t { basic, at_lower, at_upper, free_zero };

/// Simplex basis over structural columns followed by one logical per row.
struct Basis {
  std::vector<VarState> state;  // cols + rows entries
  std::vector<std::size_t> head;  // basic variable per basis position
  bool empty() const { return head.empty(); }
};

struct SimplexOptions {
  double pivot_tolerance = 1e-7;
  double feasibility_tolerance = 1e-8;
  double optimality_tolerance = 1e-9;
  std::size_t max_iterations = 2'000'000;
  std::size_t refactor_interval = 100;
  /// Consecutive degenerate pivots before Bland's rule takes over.
  std::size_t degenerate_limit = 50;
  bool bland_only = false;
  bool record_trace = false;
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> primal;         // structural values
  std::vector<double> row_activity;   // A x
  std::vector<double> duals;          // d objective / d rhs, per row
  std::vector<double> reduced_costs;  // per structural column
  double objective = 0.0;
  std::size_t iterations = 0;
  Basis basis;
  /// (entering, leaving) per basis change; populated when record_trace is set.
  std::vector<std::pair<std::size_t, std::size_t>> trace;
};

/// Bounded-variable revised primal simplex (composite phase 1, Dantzig
/// pricing with a Bland fallback). `warm` may hold a basis from a program
/// with the same shape; bounds and costs may differ.
LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options = {}, const Basis* warm = nullptr);

/// Solves a purely continuous model. Throws std::invalid_argument when the
/// model declares binaries; relax them with relax_binaries() first.
LpSolution simplex_solve(const MilpModel& model, const SimplexOptions& options = {});

/// Copy of `model` with every binary turned into a continuous [lower,upper] variable.
MilpModel relax_binaries(const MilpModel& model);

/// Largest |primal objective - dual objective| for an optimal solution, using
/// row and column duals. Used to certify LP duality in tests.
double duality_gap(const LinearProgram& lp, const LpSolution& sol);

}  // namespace dddr
