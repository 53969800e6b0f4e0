#include "dddr/inner.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dddr/simplex.hpp"

namespace dddr {

namespace {

void check_plan(const Instance& instance, const LocationDecision& y) {
  if (y.size() != instance.num_facilities())
    throw std::invalid_argument("location decision size does not match the number of facilities");
}

// c_{i*j} with the penalty in slot 0
double column_cost(const Instance& instance, std::size_t j, std::size_t col) {
  return col == kPenaltyColumn ? instance.customer(j).penalty : instance.cost(col - 1, j);
}

}  // namespace

InnerValue h_j_closed_form(const Instance& instance, const LocationDecision& y, std::size_t j, double d) {
  check_plan(instance, y);
  if (j >= instance.num_customers()) throw std::out_of_range("unknown customer index " + std::to_string(j));
  if (!(d >= 0.0)) throw std::invalid_argument("demand must be nonnegative");
  const std::size_t nf = instance.num_facilities();
  InnerValue best;
  bool first = true;
  for (std::size_t col = 0; col <= nf; ++col) {
    const double cstar = column_cost(instance, j, col);
    double v = cstar * d;
    for (std::size_t i = 0; i < nf; ++i) {
      const double cij = instance.cost(i, j);
      if (y.is_open(i) && cij < cstar) v += instance.facility(i).capacity * (cij - cstar);
    }
    if (first || v > best.value) {
      best = {v, col};
      first = false;
    }
  }
  best.value -= instance.customer(j).revenue * d;
  return best;
}

double h_closed_form(const Instance& instance, const LocationDecision& y, const std::vector<double>& d) {
  if (d.size() != instance.num_customers()) throw std::invalid_argument("demand vector needs one entry per customer");
  double total = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) total += h_j_closed_form(instance, y, j, d[j]).value;
  return total;
}

double Allocation::unmet() const { return std::accumulate(s.begin(), s.end(), 0.0); }

Allocation recover_allocation(const Instance& instance, const LocationDecision& y, const std::vector<double>& d) {
  check_plan(instance, y);
  const std::size_t nf = instance.num_facilities();
  const std::size_t nc = instance.num_customers();
  if (d.size() != nc) throw std::invalid_argument("demand vector needs one entry per customer");
  Allocation a;
  a.x.assign(nf, std::vector<double>(nc, 0.0));
  a.s.assign(nc, 0.0);
  std::vector<std::size_t> order(nf);
  for (std::size_t j = 0; j < nc; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t p, std::size_t q) { return instance.cost(p, j) < instance.cost(q, j); });
    double left = d[j];
    double cost = 0.0;
    for (std::size_t i : order) {
      if (left <= 0.0) break;
      if (!y.is_open(i)) continue;
      const double ship = std::min(left, instance.facility(i).capacity);
      a.x[i][j] = ship;
      cost += ship * instance.cost(i, j);
      left -= ship;
    }
    a.s[j] = std::max(left, 0.0);
    const Customer& c = instance.customer(j);
    a.value += cost + c.penalty * a.s[j] - c.revenue * d[j];
  }
  return a;
}

double transport_lp_oracle(const Instance& instance, const LocationDecision& y, const std::vector<double>& d) {
  check_plan(instance, y);
  const std::size_t nf = instance.num_facilities();
  const std::size_t nc = instance.num_customers();
  if (d.size() != nc) throw std::invalid_argument("demand vector needs one entry per customer");
  MilpModel m;
  std::vector<std::vector<std::size_t>> x(nf, std::vector<std::size_t>(nc));
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      x[i][j] = m.add_continuous("x_" + std::to_string(i) + "_" + std::to_string(j), 0.0, kInfinity);
      m.add_objective_term(x[i][j], instance.cost(i, j));
      m.add_constraint({"cap_" + std::to_string(i) + "_" + std::to_string(j), {{x[i][j], 1.0}}, Sense::less_equal,
                        instance.facility(i).capacity * y.value(i)});
    }
  for (std::size_t j = 0; j < nc; ++j) {
    const std::size_t s = m.add_continuous("s_" + std::to_string(j), 0.0, kInfinity);
    m.add_objective_term(s, instance.customer(j).penalty);
    m.add_objective_constant(-instance.customer(j).revenue * d[j]);
    Constraint bal{"balance_" + std::to_string(j), {{s, 1.0}}, Sense::equal, d[j]};
    for (std::size_t i = 0; i < nf; ++i) bal.terms.push_back({x[i][j], 1.0});
    m.add_constraint(std::move(bal));
  }
  const LpSolution sol = simplex_solve(m);
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error(std::string("transportation LP not solved: ") + to_string(sol.status));
  return sol.objective;
}

double AffineMember::at(const LocationDecision& y) const {
  double v = constant;
  for (std::size_t i = 0; i < coeff.size(); ++i) v += coeff[i] * y.value(i);
  return v;
}

std::vector<AffineMember> theta_affine(const Instance& instance, std::size_t j, double d) {
  if (j >= instance.num_customers()) throw std::out_of_range("unknown customer index " + std::to_string(j));
  const std::size_t nf = instance.num_facilities();
  std::vector<AffineMember> family;
  family.reserve(nf + 1);
  for (std::size_t col = 0; col <= nf; ++col) {
    const double cstar = column_cost(instance, j, col);
    AffineMember a;
    a.i_star = col;
    a.constant = (cstar - instance.customer(j).revenue) * d;
    a.coeff.assign(nf, 0.0);
    for (std::size_t i = 0; i < nf; ++i) {
      const double cij = instance.cost(i, j);
      if (cij < cstar) a.coeff[i] = instance.facility(i).capacity * (cij - cstar);
    }
    family.push_back(std::move(a));
  }
  return family;
}

std::vector<AffineMember> theta_affine(const Instance& instance, const Support& support, std::size_t j,
                                       std::size_t k) {
  if (k >= support.size()) throw std::out_of_range("support index out of range");
  return theta_affine(instance, j, support[k]);
}

}  // namespace dddr
