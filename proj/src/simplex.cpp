#include "dddr/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "basis_factor.hpp"

namespace dddr {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

LinearProgram to_linear_program(const MilpModel& model) {
  LinearProgram lp;
  const std::size_t n = model.num_variables();
  const std::size_t m = model.num_constraints();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(model.num_nonzeros());
  lp.row_lower.resize(m);
  lp.row_upper.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& c = model.constraints()[i];
    for (const Term& t : c.terms)
      if (t.coeff != 0.0) triplets.emplace_back(static_cast<int>(i), static_cast<int>(t.var), t.coeff);
    lp.row_lower[i] = c.sense == Sense::less_equal ? -kInfinity : c.rhs;
    lp.row_upper[i] = c.sense == Sense::greater_equal ? kInfinity : c.rhs;
  }
  lp.matrix.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  lp.matrix.setFromTriplets(triplets.begin(), triplets.end());  // duplicates summed
  lp.matrix.makeCompressed();
  lp.cost.assign(n, 0.0);
  for (const Term& t : model.objective().terms) lp.cost[t.var] += t.coeff;
  lp.offset = model.objective().constant;
  lp.col_lower.resize(n);
  lp.col_upper.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    lp.col_lower[j] = model.variables()[j].lower;
    lp.col_upper[j] = model.variables()[j].upper;
  }
  return lp;
}

MilpModel relax_binaries(const MilpModel& model) {
  MilpModel relaxed;
  for (const Variable& v : model.variables()) relaxed.add_continuous(v.name, v.lower, v.upper);
  for (const Constraint& c : model.constraints()) relaxed.add_constraint(c);
  for (const Term& t : model.objective().terms) relaxed.add_objective_term(t.var, t.coeff);
  relaxed.add_objective_constant(model.objective().constant);
  relaxed.metadata() = model.metadata();
  return relaxed;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class SimplexEngine {
 public:
  SimplexEngine(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp), opt_(options), pivot_tol_(options.pivot_tolerance), m_(lp.rows()), n_(lp.cols()), total_(n_ + m_) {
    lower_.resize(total_);
    upper_.resize(total_);
    cost_.assign(total_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = lp.col_lower[j];
      upper_[j] = lp.col_upper[j];
      cost_[j] = lp.cost[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      lower_[n_ + i] = lp.row_lower[i];
      upper_[n_ + i] = lp.row_upper[i];
    }
    for (std::size_t j = 0; j < total_; ++j)
      if (lower_[j] > upper_[j]) trivially_infeasible_ = true;
    x_.assign(total_, 0.0);
    state_.assign(total_, VarState::at_lower);
    position_.assign(total_, kNone);
    head_.assign(m_, kNone);
    factor_ = detail::make_basis_factor(m_);
  }

  LpSolution run(const Basis* warm) {
    LpSolution sol;
    if (trivially_infeasible_) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    if (!(warm && install_basis(*warm))) install_slack_basis();
    if (!refactor()) {
      restart_from_slacks();
    }

    // A warm basis that is still dual feasible (typical after bound changes)
    // is repaired with dual pivots before the primal loop takes over.
    if (warm && !opt_.bland_only && primal_infeasibility() > 0.0 && count_dual_infeasible() == 0) {
      const LpStatus dual = dual_iterate(sol);
      if (dual == LpStatus::infeasible) {
        finish(sol, LpStatus::infeasible);
        return sol;
      }
      if (!refactor()) {
        restart_from_slacks();
      }
    }

    LpStatus status = LpStatus::iteration_limit;
    for (int attempt = 0; attempt < 4; ++attempt) {
      status = iterate(sol);
      if (status != LpStatus::optimal) break;
      // Clean up accumulated drift and confirm the final basis.
      if (!refactor()) {
        restart_from_slacks();
        continue;
      }
      if (primal_infeasibility() <= 0.0 && count_dual_infeasible() == 0) break;
      status = LpStatus::iteration_limit;
    }
    finish(sol, status);
    return sol;
  }

 private:
  // ---- basis bookkeeping -------------------------------------------------

  void place_nonbasic(std::size_t j) {
    if (std::isfinite(lower_[j])) {
      state_[j] = VarState::at_lower;
      x_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
      state_[j] = VarState::at_upper;
      x_[j] = upper_[j];
    } else {
      state_[j] = VarState::free_zero;
      x_[j] = 0.0;
    }
  }

  // A singular basis came from accepting a pivot that was too small; restart
  // with a stricter threshold so the same sequence is not replayed.
  void restart_from_slacks() {
    pivot_tol_ = std::min(pivot_tol_ * 100.0, 1e-4);
    install_slack_basis();
    refactor();
  }

  void install_slack_basis() {
    std::fill(position_.begin(), position_.end(), kNone);
    for (std::size_t j = 0; j < n_; ++j) place_nonbasic(j);
    for (std::size_t i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      position_[n_ + i] = i;
      state_[n_ + i] = VarState::basic;
    }
  }

  bool install_basis(const Basis& b) {
    if (b.state.size() != total_ || b.head.size() != m_) return false;
    std::fill(position_.begin(), position_.end(), kNone);
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = b.head[i];
      if (j >= total_ || position_[j] != kNone || b.state[j] != VarState::basic) return false;
      position_[j] = i;
      head_[i] = j;
    }
    for (std::size_t j = 0; j < total_; ++j) {
      if (position_[j] != kNone) {
        state_[j] = VarState::basic;
        continue;
      }
      switch (b.state[j]) {
        case VarState::at_upper:
          if (std::isfinite(upper_[j])) {
            state_[j] = VarState::at_upper;
            x_[j] = upper_[j];
          } else {
            place_nonbasic(j);
          }
          break;
        case VarState::basic: return false;
        default:
          place_nonbasic(j);
          break;
      }
    }
    return true;
  }

  detail::SparseColumn column(std::size_t j) const {
    detail::SparseColumn c;
    if (j < n_) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(lp_.matrix, static_cast<Eigen::Index>(j)); it; ++it) {
        c.index.push_back(static_cast<int>(it.row()));
        c.value.push_back(it.value());
      }
    } else {
      c.index.push_back(static_cast<int>(j - n_));
      c.value.push_back(-1.0);
    }
    return c;
  }

  void load_column(std::size_t j, Eigen::VectorXd& v) const {
    v.setZero(static_cast<Eigen::Index>(m_));
    if (j < n_) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(lp_.matrix, static_cast<Eigen::Index>(j)); it; ++it)
        v(it.row()) = it.value();
    } else {
      v(static_cast<Eigen::Index>(j - n_)) = -1.0;
    }
  }

  bool refactor() {
    std::vector<detail::SparseColumn> cols;
    cols.reserve(m_);
    for (std::size_t i = 0; i < m_; ++i) cols.push_back(column(head_[i]));
    if (m_ > 0 && !factor_->factor(cols)) return false;
    recompute_basic_values();
    return true;
  }

  void recompute_basic_values() {
    if (m_ == 0) return;
    // [A | -I] x = 0  =>  B x_B = -N x_N
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
    for (std::size_t j = 0; j < total_; ++j) {
      if (state_[j] == VarState::basic || x_[j] == 0.0) continue;
      if (j < n_) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(lp_.matrix, static_cast<Eigen::Index>(j)); it; ++it)
          rhs(it.row()) -= it.value() * x_[j];
      } else {
        rhs(static_cast<Eigen::Index>(j - n_)) += x_[j];
      }
    }
    factor_->ftran(rhs);
    for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] = rhs(static_cast<Eigen::Index>(i));
  }

  double tol_for(double bound) const { return opt_.feasibility_tolerance * (1.0 + std::abs(bound)); }

  bool below(std::size_t j) const { return x_[j] < lower_[j] - tol_for(lower_[j]); }
  bool above(std::size_t j) const { return x_[j] > upper_[j] + tol_for(upper_[j]); }

  double primal_infeasibility() const {
    double total = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = head_[i];
      if (below(j)) total += lower_[j] - x_[j];
      if (above(j)) total += x_[j] - upper_[j];
    }
    return total;
  }

  // ---- pricing -----------------------------------------------------------

  /// Phase-dependent cost of a basic variable.
  double basic_cost(std::size_t j, bool phase_one) const {
    if (!phase_one) return cost_[j];
    if (below(j)) return -1.0;
    if (above(j)) return 1.0;
    return 0.0;
  }

  void compute_duals(bool phase_one) {
    duals_.setZero(static_cast<Eigen::Index>(m_));
    for (std::size_t i = 0; i < m_; ++i) duals_(static_cast<Eigen::Index>(i)) = basic_cost(head_[i], phase_one);
    if (m_ > 0) factor_->btran(duals_);
  }

  double reduced_cost(std::size_t j, bool phase_one) const {
    const double c = phase_one ? 0.0 : cost_[j];
    if (j < n_) {
      double dot = 0.0;
      for (Eigen::SparseMatrix<double>::InnerIterator it(lp_.matrix, static_cast<Eigen::Index>(j)); it; ++it)
        dot += it.value() * duals_(it.row());
      return c - dot;
    }
    return c + duals_(static_cast<Eigen::Index>(j - n_));
  }

  /// Sign of the desirable move for nonbasic j given reduced cost d, or 0.
  int improving_direction(std::size_t j, double d) const {
    const double tol = opt_.optimality_tolerance;
    switch (state_[j]) {
      case VarState::at_lower:
        if (d < -tol && upper_[j] > lower_[j]) return +1;
        return 0;
      case VarState::at_upper:
        if (d > tol && upper_[j] > lower_[j]) return -1;
        return 0;
      case VarState::free_zero:
        if (d < -tol) return +1;
        if (d > tol) return -1;
        return 0;
      case VarState::basic: return 0;
    }
    return 0;
  }

  std::size_t count_dual_infeasible() {
    compute_duals(false);
    std::size_t count = 0;
    for (std::size_t j = 0; j < total_; ++j)
      if (state_[j] != VarState::basic && improving_direction(j, reduced_cost(j, false)) != 0) ++count;
    return count;
  }

  // ---- dual simplex ------------------------------------------------------

  /// Dual simplex from a dual feasible basis. Returns optimal when primal
  /// feasibility is reached, infeasible on a dual ray, iteration_limit when it
  /// gives up (numerical trouble or its own pivot cap); the caller then falls
  /// back to the primal loop.
  LpStatus dual_iterate(LpSolution& sol) {
    compute_duals(false);
    std::vector<double> d(total_, 0.0);
    for (std::size_t j = 0; j < total_; ++j)
      if (state_[j] != VarState::basic) d[j] = reduced_cost(j, false);
    Eigen::VectorXd rho, alpha;
    std::vector<double> row(total_, 0.0);
    const std::size_t cap = std::min<std::size_t>(opt_.max_iterations, 20 * (m_ + 10));
    for (std::size_t it = 0; it < cap; ++it) {
      if (iterations_ >= opt_.max_iterations) return LpStatus::iteration_limit;
      // leaving row: largest bound violation (ties: lowest position)
      std::size_t r = kNone;
      double worst = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t j = head_[i];
        double v = 0.0;
        if (below(j)) v = lower_[j] - x_[j];
        else if (above(j)) v = x_[j] - upper_[j];
        if (v > worst) {
          worst = v;
          r = i;
        }
      }
      if (r == kNone) return LpStatus::optimal;
      const std::size_t leaving = head_[r];
      const bool to_lower = below(leaving);
      const double target = to_lower ? lower_[leaving] : upper_[leaving];

      rho.setZero(static_cast<Eigen::Index>(m_));
      rho(static_cast<Eigen::Index>(r)) = 1.0;
      factor_->btran(rho);
      // row r of B^{-1} [A | -I]
      for (std::size_t j = 0; j < total_; ++j) {
        if (state_[j] == VarState::basic) {
          row[j] = 0.0;
          continue;
        }
        if (j < n_) {
          double dot = 0.0;
          for (Eigen::SparseMatrix<double>::InnerIterator c(lp_.matrix, static_cast<Eigen::Index>(j)); c; ++c)
            dot += c.value() * rho(c.row());
          row[j] = dot;
        } else {
          row[j] = -rho(static_cast<Eigen::Index>(j - n_));
        }
      }

      // Ratio test with Harris tolerance: x_leaving moves by -row[j] * dx_j.
      auto eligible = [&](std::size_t j) -> bool {
        if (state_[j] == VarState::basic || upper_[j] == lower_[j]) return false;
        const double a = row[j];
        if (std::abs(a) <= pivot_tol_) return false;
        // need the leaving variable to rise (to_lower) or fall
        const double want = to_lower ? -1.0 : 1.0;  // sign of a * dx_j required
        switch (state_[j]) {
          case VarState::at_lower: return a * want > 0;
          case VarState::at_upper: return a * want < 0;
          case VarState::free_zero: return true;
          default: return false;
        }
      };
      const double dtol = opt_.optimality_tolerance;
      double bound = kInfinity;
      for (std::size_t j = 0; j < total_; ++j) {
        if (!eligible(j)) continue;
        bound = std::min(bound, (std::abs(d[j]) + dtol) / std::abs(row[j]));
      }
      if (!std::isfinite(bound)) return LpStatus::infeasible;
      std::size_t entering = kNone;
      double best_pivot = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (!eligible(j)) continue;
        if (std::abs(d[j]) / std::abs(row[j]) <= bound && std::abs(row[j]) > best_pivot) {
          best_pivot = std::abs(row[j]);
          entering = j;
        }
      }
      if (entering == kNone) return LpStatus::iteration_limit;

      load_column(entering, alpha);
      factor_->ftran(alpha);
      const double arq = alpha(static_cast<Eigen::Index>(r));
      if (std::abs(arq) <= pivot_tol_ || std::abs(arq - row[entering]) > 1e-6 * (1.0 + std::abs(arq)))
        return LpStatus::iteration_limit;  // row and column disagree: refactor and let primal finish

      // primal step: move the entering variable until the leaving one hits its bound
      const double dx = (x_[leaving] - target) / arq;
      x_[entering] += dx;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = alpha(static_cast<Eigen::Index>(i));
        if (a != 0.0) x_[head_[i]] -= dx * a;
      }
      // dual step
      const double theta = d[entering] / arq;
      for (std::size_t j = 0; j < total_; ++j)
        if (state_[j] != VarState::basic && row[j] != 0.0) d[j] -= theta * row[j];
      d[entering] = 0.0;
      d[leaving] = -theta;

      x_[leaving] = target;
      state_[leaving] = to_lower ? VarState::at_lower : VarState::at_upper;
      position_[leaving] = kNone;
      head_[r] = entering;
      position_[entering] = r;
      state_[entering] = VarState::basic;
      ++iterations_;
      if (opt_.record_trace) sol.trace.emplace_back(entering, leaving);

      factor_->update(r, alpha);
      if (factor_->num_updates() >= opt_.refactor_interval && !refactor()) return LpStatus::iteration_limit;
    }
    return LpStatus::iteration_limit;
  }

  // ---- main loop ---------------------------------------------------------

  LpStatus iterate(LpSolution& sol) {
    Eigen::VectorXd alpha;
    std::size_t degenerate_run = 0;
    bool bland = opt_.bland_only;

    while (true) {
      if (iterations_ >= opt_.max_iterations) return LpStatus::iteration_limit;
      const bool phase_one = primal_infeasibility() > 0.0;

      compute_duals(phase_one);

      // Entering variable.
      std::size_t entering = kNone;
      int direction = 0;
      double best = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (state_[j] == VarState::basic) continue;
        const double d = reduced_cost(j, phase_one);
        const int dir = improving_direction(j, d);
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          direction = dir;
        }
      }
      if (entering == kNone) return phase_one ? LpStatus::infeasible : LpStatus::optimal;

      load_column(entering, alpha);
      if (m_ > 0) factor_->ftran(alpha);

      // Ratio test. Basic i moves by -direction * t * alpha_i.
      const std::size_t leaving_pos = ratio_test(alpha, direction, phase_one, bland);
      double step;
      bool flip = false;
      const double span = upper_[entering] - lower_[entering];
      if (leaving_pos == kNone) {
        if (std::isfinite(span)) {
          flip = true;
          step = span;
        } else {
          if (phase_one) return LpStatus::infeasible;  // should not happen; guard
          return LpStatus::unbounded;
        }
      } else {
        step = std::max(0.0, step_to_bound(leaving_pos, alpha, direction, phase_one));
        if (std::isfinite(span) && span <= step) {
          flip = true;
          step = span;
        }
      }

      // The leaving variable settles on the bound it is driven into; decide
      // before moving, since phase-1 targets depend on the current side.
      bool leave_at_upper = false;
      if (!flip) {
        const std::size_t b = head_[leaving_pos];
        const double rate = direction * alpha(static_cast<Eigen::Index>(leaving_pos));
        if (rate > 0)
          leave_at_upper = (phase_one && above(b)) || !std::isfinite(lower_[b]);
        else
          leave_at_upper = !((phase_one && below(b)) || !std::isfinite(upper_[b]));
      }

      if (step != 0.0) {
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = alpha(static_cast<Eigen::Index>(i));
          if (a != 0.0) x_[head_[i]] -= direction * step * a;
        }
      }
      ++iterations_;
      if (step <= 1e-12) {
        if (++degenerate_run >= opt_.degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = opt_.bland_only;
      }

      if (flip) {
        if (direction > 0) {
          state_[entering] = VarState::at_upper;
          x_[entering] = upper_[entering];
        } else {
          state_[entering] = VarState::at_lower;
          x_[entering] = lower_[entering];
        }
        continue;
      }

      x_[entering] += direction * step;
      const std::size_t leaving = head_[leaving_pos];
      if (leave_at_upper) {
        state_[leaving] = VarState::at_upper;
        x_[leaving] = upper_[leaving];
      } else {
        state_[leaving] = VarState::at_lower;
        x_[leaving] = lower_[leaving];
      }
      if (!std::isfinite(x_[leaving])) {
        state_[leaving] = VarState::free_zero;
        x_[leaving] = 0.0;
      }
      position_[leaving] = kNone;
      head_[leaving_pos] = entering;
      position_[entering] = leaving_pos;
      state_[entering] = VarState::basic;
      if (opt_.record_trace) sol.trace.emplace_back(entering, leaving);

      factor_->update(leaving_pos, alpha);
      if (factor_->num_updates() >= opt_.refactor_interval) {
        if (!refactor()) {
          restart_from_slacks();
        }
      }
    }
  }

  /// Distance the entering variable may travel before basic position i hits
  /// the bound it is heading to (+inf when unblocked). `slack` widens bounds.
  double limit_for(std::size_t i, double rate, bool phase_one, double slack_scale) const {
    const std::size_t j = head_[i];
    const double x = x_[j];
    if (phase_one && below(j)) {
      if (rate < 0) return (lower_[j] - x) / (-rate);  // rises to feasibility
      return kInfinity;
    }
    if (phase_one && above(j)) {
      if (rate > 0) return (x - upper_[j]) / rate;
      return kInfinity;
    }
    if (rate > 0) {
      if (!std::isfinite(lower_[j])) return kInfinity;
      return (x - lower_[j] + slack_scale * tol_for(lower_[j])) / rate;
    }
    if (!std::isfinite(upper_[j])) return kInfinity;
    return (upper_[j] - x + slack_scale * tol_for(upper_[j])) / (-rate);
  }

  std::size_t ratio_test(const Eigen::VectorXd& alpha, int direction, bool phase_one, bool bland) const {
    if (bland) {
      std::size_t chosen = kNone;
      double best = kInfinity;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = alpha(static_cast<Eigen::Index>(i));
        if (std::abs(a) <= pivot_tol_) continue;
        const double lim = limit_for(i, direction * a, phase_one, 0.0);
        if (!std::isfinite(lim)) continue;
        if (lim < best - 1e-12 || (lim <= best + 1e-12 && chosen != kNone && head_[i] < head_[chosen])) {
          if (lim < best) best = lim;
          chosen = i;
        }
      }
      return chosen;
    }
    // Harris two-pass: widest admissible step, then the largest pivot within it.
    double bound = kInfinity;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = alpha(static_cast<Eigen::Index>(i));
      if (std::abs(a) <= pivot_tol_) continue;
      bound = std::min(bound, limit_for(i, direction * a, phase_one, 1.0));
    }
    if (!std::isfinite(bound)) return kNone;
    std::size_t chosen = kNone;
    double best_pivot = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = alpha(static_cast<Eigen::Index>(i));
      if (std::abs(a) <= pivot_tol_) continue;
      const double lim = limit_for(i, direction * a, phase_one, 0.0);
      if (lim <= bound && std::abs(a) > best_pivot) {
        best_pivot = std::abs(a);
        chosen = i;
      }
    }
    return chosen;
  }

  double step_to_bound(std::size_t i, const Eigen::VectorXd& alpha, int direction, bool phase_one) const {
    return limit_for(i, direction * alpha(static_cast<Eigen::Index>(i)), phase_one, 0.0);
  }

  // ---- results -----------------------------------------------------------

  void finish(LpSolution& sol, LpStatus status) {
    sol.status = status;
    sol.iterations = iterations_;
    sol.primal.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    sol.row_activity.assign(m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(lp_.matrix, static_cast<Eigen::Index>(j)); it; ++it)
        sol.row_activity[static_cast<std::size_t>(it.row())] += it.value() * x_[j];
    sol.objective = lp_.offset;
    for (std::size_t j = 0; j < n_; ++j) sol.objective += cost_[j] * x_[j];
    sol.basis.state = state_;
    sol.basis.head = head_;
    if (status == LpStatus::optimal) {
      compute_duals(false);
      sol.duals.resize(m_);
      for (std::size_t i = 0; i < m_; ++i) sol.duals[i] = duals_(static_cast<Eigen::Index>(i));
      sol.reduced_costs.resize(n_);
      for (std::size_t j = 0; j < n_; ++j)
        sol.reduced_costs[j] = state_[j] == VarState::basic ? 0.0 : reduced_cost(j, false);
    }
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  double pivot_tol_;
  std::size_t m_, n_, total_;
  std::vector<double> lower_, upper_, cost_, x_;
  std::vector<VarState> state_;
  std::vector<std::size_t> position_, head_;
  std::unique_ptr<detail::BasisFactor> factor_;
  Eigen::VectorXd duals_;
  std::size_t iterations_ = 0;
  bool trivially_infeasible_ = false;
};

}  // namespace

LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options, const Basis* warm) {
  if (lp.cost.size() != lp.cols() || lp.col_lower.size() != lp.cols() || lp.col_upper.size() != lp.cols() ||
      lp.row_lower.size() != lp.rows() || lp.row_upper.size() != lp.rows())
    throw std::invalid_argument("simplex_solve: inconsistent program dimensions");
  SimplexEngine engine(lp, options);
  return engine.run(warm);
}

LpSolution simplex_solve(const MilpModel& model, const SimplexOptions& options) {
  if (model.num_binaries() > 0)
    throw std::invalid_argument("simplex_solve: model has binary variables; relax them first");
  return simplex_solve(to_linear_program(model), options);
}

double duality_gap(const LinearProgram& lp, const LpSolution& sol) {
  if (sol.status != LpStatus::optimal) throw std::invalid_argument("duality_gap: solution is not optimal");
  double dual_objective = lp.offset;
  for (std::size_t i = 0; i < lp.rows(); ++i) {
    const double y = sol.duals[i];
    double b = y >= 0 ? lp.row_lower[i] : lp.row_upper[i];
    if (!std::isfinite(b)) b = sol.row_activity[i];
    dual_objective += y * b;
  }
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    const double d = sol.reduced_costs[j];
    double b = d >= 0 ? lp.col_lower[j] : lp.col_upper[j];
    if (!std::isfinite(b)) b = sol.primal[j];
    dual_objective += d * b;
  }
  return std::abs(sol.objective - dual_objective);
}

}  // namespace dddr
