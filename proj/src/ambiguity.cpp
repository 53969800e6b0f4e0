#include "dddr/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dddr/inner.hpp"
#include "dddr/simplex.hpp"

namespace dddr {

void DualCertificate::resize(std::size_t n) {
  alpha.assign(n, 0.0);
  delta1.assign(n, 0.0);
  delta2.assign(n, 0.0);
  gamma1.assign(n, 0.0);
  gamma2.assign(n, 0.0);
}

namespace {

// (alpha, delta, gamma) with the sign split applied
DualRay split(std::string name, double alpha, double delta, double gamma) {
  DualRay r;
  r.name = std::move(name);
  r.alpha = alpha;
  r.delta1 = std::max(0.0, delta);
  r.delta2 = std::max(0.0, -delta);
  r.gamma1 = std::max(0.0, gamma);
  r.gamma2 = std::max(0.0, -gamma);
  return r;
}

DualRay chord(std::string name, double a, double b) { return split(std::move(name), a * b, -(a + b), 1.0); }

struct MomentBox {
  double mean_lo, mean_hi, second_lo, second_hi;
};

MomentBox box_of(const DemandModel& model, const LocationDecision& y, std::size_t j) {
  const double mu = mean_of(model, y, j);
  const MomentWindow w = second_moment_window(model, y, j);
  return {mu - model.eps_mu[j], mu + model.eps_mu[j], w.lo, w.hi};
}

// Dual objective along a direction; nonnegative for every generator iff the
// moment set is nonempty.
double slack(const DualRay& r, const MomentBox& b) {
  return r.alpha + r.delta1 * b.mean_hi - r.delta2 * b.mean_lo + r.gamma1 * b.second_hi - r.gamma2 * b.second_lo;
}

std::vector<double> customer_costs(const Instance& instance, const LocationDecision& y, const Support& support,
                                   std::size_t j) {
  std::vector<double> h(support.size());
  for (std::size_t k = 0; k < support.size(); ++k) h[k] = h_j_closed_form(instance, y, j, support[k]).value;
  return h;
}

void check_model(const Instance& instance, const DemandModel& model, const LocationDecision& y) {
  if (model.num_customers() != instance.num_customers() || model.num_facilities() != instance.num_facilities())
    throw std::invalid_argument("demand model does not match the instance dimensions");
  if (y.size() != instance.num_facilities())
    throw std::invalid_argument("location decision size does not match the number of facilities");
  if (model.eps_mu.size() != model.num_customers() || model.eps_sigma_lo.size() != model.num_customers() ||
      model.eps_sigma_hi.size() != model.num_customers())
    throw std::invalid_argument("ambiguity radii need one entry per customer");
}

LinearProgram moment_program(const Support& support, const MomentBox& b, const std::vector<double>& h) {
  const std::size_t n = support.size();
  LinearProgram lp;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(3 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const int c = static_cast<int>(k);
    t.emplace_back(0, c, 1.0);
    if (support[k] != 0.0) {
      t.emplace_back(1, c, support[k]);
      t.emplace_back(2, c, support[k] * support[k]);
    }
  }
  lp.matrix.resize(3, static_cast<Eigen::Index>(n));
  lp.matrix.setFromTriplets(t.begin(), t.end());
  lp.cost.resize(n);
  for (std::size_t k = 0; k < n; ++k) lp.cost[k] = h.empty() ? 0.0 : -h[k];
  lp.col_lower.assign(n, 0.0);
  lp.col_upper.assign(n, kInfinity);
  lp.row_lower = {1.0, b.mean_lo, b.second_lo};
  lp.row_upper = {1.0, b.mean_hi, b.second_hi};
  return lp;
}

}  // namespace

std::array<DualRay, 3> extreme_rays(const Support& support) {
  if (support.size() < 2) throw std::invalid_argument("support needs at least two points");
  const std::size_t k = support.size();
  const double d1 = support[0], d2 = support[1], dk1 = support[k - 2], dk = support[k - 1];
  return {chord("ray 1: chord d(1),d(2)", d1, d2), chord("ray 2: chord d(K-1),d(K)", dk1, dk),
          split("ray 3: chord d(1),d(K) from above", -d1 * dk, d1 + dk, -1.0)};
}

std::vector<DualRay> dual_cone_generators(const Support& support) {
  const auto paper = extreme_rays(support);
  std::vector<DualRay> out(paper.begin(), paper.end());
  const std::size_t k = support.size();
  for (std::size_t m = 1; m + 2 < k; ++m)
    out.push_back(chord("chord d(" + std::to_string(m + 1) + "),d(" + std::to_string(m + 2) + ")", support[m],
                        support[m + 1]));
  out.push_back(split("mean at least d(1)", -support[0], 1.0, 0.0));
  out.push_back(split("mean at most d(K)", support[k - 1], -1.0, 0.0));
  double lo2 = kInfinity, hi2 = 0.0;
  for (double d : support.values()) {
    lo2 = std::min(lo2, d * d);
    hi2 = std::max(hi2, d * d);
  }
  out.push_back(split("second moment at least min d^2", -lo2, 0.0, 1.0));
  out.push_back(split("second moment at most max d^2", hi2, 0.0, -1.0));
  out.push_back(split("alpha", 1.0, 0.0, 0.0));
  DualRay dd = split("mean window ordered", 0.0, 0.0, 0.0);
  dd.delta1 = dd.delta2 = 1.0;
  out.push_back(dd);
  DualRay gg = split("second moment window ordered", 0.0, 0.0, 0.0);
  gg.gamma1 = gg.gamma2 = 1.0;
  out.push_back(gg);
  return out;
}

std::vector<RayCheck> FeasibilityReport::violations() const {
  std::vector<RayCheck> out;
  for (const RayCheck& c : checks)
    if (c.slack < 0.0) out.push_back(c);
  return out;
}

std::string FeasibilityReport::describe() const {
  if (feasible) return "ambiguity set nonempty for every customer";
  std::ostringstream os;
  os << "empty ambiguity set:";
  for (const RayCheck& c : violations()) os << " [customer index " << c.customer << ", " << c.name << ", slack " << c.slack << "]";
  return os.str();
}

FeasibilityReport ambiguity_feasible(const Instance& instance, const DemandModel& model, const LocationDecision& y,
                                     double tolerance) {
  check_model(instance, model, y);
  const auto gens = dual_cone_generators(model.support);
  FeasibilityReport rep;
  for (std::size_t j = 0; j < model.num_customers(); ++j) {
    const MomentBox b = box_of(model, y, j);
    for (std::size_t r = 0; r < gens.size(); ++r) {
      double s = slack(gens[r], b);
      if (s < -tolerance)
        rep.feasible = false;
      else if (s < 0.0)
        s = 0.0;  // within tolerance counts as satisfied
      rep.checks.push_back({j, r, gens[r].name, s});
    }
  }
  return rep;
}

bool moment_lp_feasible(const DemandModel& model, const LocationDecision& y, std::size_t j) {
  const LinearProgram lp = moment_program(model.support, box_of(model, y, j), {});
  SimplexOptions opt;
  opt.bland_only = true;
  return simplex_solve(lp, opt).status == LpStatus::optimal;
}

AmbiguityInfeasible::AmbiguityInfeasible(FeasibilityReport report)
    : std::runtime_error(report.describe()), report_(std::move(report)) {}

WorstCaseResult worst_case_expectation(const Instance& instance, const DemandModel& model, const LocationDecision& y) {
  FeasibilityReport rep = ambiguity_feasible(instance, model, y);
  if (!rep.feasible) throw AmbiguityInfeasible(std::move(rep));
  const std::size_t nc = model.num_customers();
  WorstCaseResult res;
  res.per_customer.assign(nc, 0.0);
  res.distribution.pi.assign(nc, {});
  res.certificate.resize(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    const LinearProgram lp = moment_program(model.support, box_of(model, y, j), customer_costs(instance, y, model.support, j));
    const LpSolution sol = simplex_solve(lp);
    if (sol.status != LpStatus::optimal) {
      // numerically on the boundary: the ray check passed within tolerance
      rep.feasible = false;
      throw AmbiguityInfeasible(std::move(rep));
    }
    res.per_customer[j] = -sol.objective;
    res.distribution.pi[j] = sol.primal;
    for (double& p : res.distribution.pi[j]) p = std::max(p, 0.0);
    // duals of the minimization; the maximization's multipliers are their negation
    res.certificate.alpha[j] = -sol.duals[0];
    const double mean = -sol.duals[1];
    const double second = -sol.duals[2];
    res.certificate.delta1[j] = std::max(0.0, mean);
    res.certificate.delta2[j] = std::max(0.0, -mean);
    res.certificate.gamma1[j] = std::max(0.0, second);
    res.certificate.gamma2[j] = std::max(0.0, -second);
    res.value += res.per_customer[j];
  }
  res.distribution.value = res.value;
  return res;
}

double dual_lp_value(const Instance& instance, const DemandModel& model, const LocationDecision& y,
                     DualCertificate* cert) {
  check_model(instance, model, y);
  const std::size_t nc = model.num_customers();
  const Support& s = model.support;
  const std::size_t n = s.size();
  if (cert) cert->resize(nc);
  double total = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    const MomentBox b = box_of(model, y, j);
    const std::vector<double> h = customer_costs(instance, y, s, j);
    // columns: alpha, delta1, delta2, gamma1, gamma2
    LinearProgram lp;
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t k = 0; k < n; ++k) {
      const int r = static_cast<int>(k);
      const double d = s[k];
      t.emplace_back(r, 0, 1.0);
      if (d != 0.0) {
        t.emplace_back(r, 1, d);
        t.emplace_back(r, 2, -d);
        t.emplace_back(r, 3, d * d);
        t.emplace_back(r, 4, -d * d);
      }
    }
    lp.matrix.resize(static_cast<Eigen::Index>(n), 5);
    lp.matrix.setFromTriplets(t.begin(), t.end());
    lp.cost = {1.0, b.mean_hi, -b.mean_lo, b.second_hi, -b.second_lo};
    lp.col_lower = {-kInfinity, 0.0, 0.0, 0.0, 0.0};
    lp.col_upper.assign(5, kInfinity);
    lp.row_lower = h;
    lp.row_upper.assign(n, kInfinity);
    const LpSolution sol = simplex_solve(lp);
    if (sol.status == LpStatus::unbounded) {
      FeasibilityReport rep = ambiguity_feasible(instance, model, y);
      rep.feasible = false;
      throw AmbiguityInfeasible(std::move(rep));
    }
    if (sol.status != LpStatus::optimal)
      throw std::runtime_error(std::string("dual moment LP not solved: ") + to_string(sol.status));
    total += sol.objective;
    if (cert) {
      cert->alpha[j] = sol.primal[0];
      cert->delta1[j] = std::max(0.0, sol.primal[1]);
      cert->delta2[j] = std::max(0.0, sol.primal[2]);
      cert->gamma1[j] = std::max(0.0, sol.primal[3]);
      cert->gamma2[j] = std::max(0.0, sol.primal[4]);
    }
  }
  return total;
}

double dual_value(const Instance& instance, const DemandModel& model, const LocationDecision& y,
                  const DualCertificate& cert, double tolerance) {
  check_model(instance, model, y);
  const std::size_t nc = model.num_customers();
  if (cert.size() != nc || cert.delta1.size() != nc || cert.delta2.size() != nc || cert.gamma1.size() != nc ||
      cert.gamma2.size() != nc)
    throw std::invalid_argument("certificate needs one multiplier set per customer");
  double total = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    if (cert.delta1[j] < 0 || cert.delta2[j] < 0 || cert.gamma1[j] < 0 || cert.gamma2[j] < 0)
      throw std::invalid_argument("certificate multipliers must be nonnegative (customer index " + std::to_string(j) + ")");
    const std::vector<double> h = customer_costs(instance, y, model.support, j);
    for (std::size_t k = 0; k < model.support.size(); ++k) {
      const double d = model.support[k];
      const double lhs = cert.alpha[j] + (cert.delta1[j] - cert.delta2[j]) * d + (cert.gamma1[j] - cert.gamma2[j]) * d * d;
      if (lhs < h[k] - tolerance * (1.0 + std::abs(h[k])))
        throw std::invalid_argument("certificate violates the covering constraint at customer index " +
                                    std::to_string(j) + ", support index " + std::to_string(k));
    }
    const MomentBox b = box_of(model, y, j);
    total += cert.alpha[j] + cert.delta1[j] * b.mean_hi - cert.delta2[j] * b.mean_lo + cert.gamma1[j] * b.second_hi -
             cert.gamma2[j] * b.second_lo;
  }
  return total;
}

}  // namespace dddr
