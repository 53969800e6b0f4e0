#include "dddr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dddr {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Instance::Instance(std::vector<Facility> facilities, std::vector<Customer> customers, Matrix cost)
    : facilities_(std::move(facilities)), customers_(std::move(customers)), cost_(std::move(cost)) {
  if (cost_.size() != facilities_.size()) throw std::invalid_argument("cost matrix needs one row per facility");
  for (const auto& row : cost_)
    if (row.size() != customers_.size()) throw std::invalid_argument("cost matrix needs one column per customer");
}

Instance Instance::euclidean(std::vector<Facility> facilities, std::vector<Customer> customers,
                             double cost_multiplier) {
  Matrix cost(facilities.size(), std::vector<double>(customers.size()));
  for (std::size_t i = 0; i < facilities.size(); ++i)
    for (std::size_t j = 0; j < customers.size(); ++j)
      cost[i][j] = cost_multiplier * distance(facilities[i].coord, customers[j].coord);
  return Instance(std::move(facilities), std::move(customers), std::move(cost));
}

Instance Instance::with_penalty(double penalty) const {
  Instance copy = *this;
  for (Customer& c : copy.customers_) c.penalty = penalty;
  return copy;
}

Support::Support(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("support needs at least two points");
  for (std::size_t k = 1; k < values_.size(); ++k)
    if (!(values_[k] > values_[k - 1])) throw std::invalid_argument("support must be strictly increasing");
}

Support Support::range(double min, double max, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("support step must be positive");
  std::vector<double> v;
  // integer stepping avoids accumulating rounding error
  for (std::size_t k = 0;; ++k) {
    const double value = min + static_cast<double>(k) * step;
    if (value > max + 1e-9 * std::max(1.0, std::abs(max))) break;
    v.push_back(value);
  }
  return Support(std::move(v));
}

bool Support::as_range(double& min, double& max, double& step) const {
  if (values_.size() < 2) return false;
  min = values_.front();
  max = values_.back();
  step = values_[1] - values_[0];
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (min + static_cast<double>(k) * step != values_[k]) return false;
  return true;
}

DemandModel DemandModel::without_dependency() const {
  DemandModel copy = *this;
  for (auto& row : copy.lambda_mu) std::fill(row.begin(), row.end(), 0.0);
  for (auto& row : copy.lambda_sigma) std::fill(row.begin(), row.end(), 0.0);
  return copy;
}

LocationDecision::LocationDecision(std::vector<int> bits) {
  open_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("location decision entries must be 0 or 1");
    open_.push_back(static_cast<std::uint8_t>(b));
  }
}

LocationDecision LocationDecision::from_mask(std::uint64_t mask, std::size_t n) {
  LocationDecision y(n);
  for (std::size_t i = 0; i < n; ++i) y.set(i, ((mask >> i) & 1u) != 0);
  return y;
}

std::size_t LocationDecision::open_count() const {
  return static_cast<std::size_t>(std::count(open_.begin(), open_.end(), 1));
}

std::vector<std::size_t> LocationDecision::open_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < open_.size(); ++i)
    if (open_[i]) out.push_back(i);
  return out;
}

std::vector<int> LocationDecision::bits() const { return {open_.begin(), open_.end()}; }

std::string LocationDecision::to_string() const {
  std::string s;
  for (auto b : open_) s.push_back(b ? '1' : '0');
  return s;
}

namespace {

void check_args(const DemandModel& model, const LocationDecision& y, std::size_t j) {
  if (j >= model.num_customers()) throw std::out_of_range("unknown customer index " + std::to_string(j));
  if (y.size() != model.lambda_mu.at(j).size())
    throw std::invalid_argument("location decision size does not match the number of facilities");
}

double weighted_open(const std::vector<double>& weights, const LocationDecision& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (y.is_open(i)) s += weights[i];
  return s;
}

}  // namespace

double mean_of(const DemandModel& model, const LocationDecision& y, std::size_t j) {
  check_args(model, y, j);
  return model.bar_mu[j] * (1.0 + weighted_open(model.lambda_mu[j], y));
}

double variance_of(const DemandModel& model, const LocationDecision& y, std::size_t j) {
  check_args(model, y, j);
  return model.bar_variance(j) * (1.0 - weighted_open(model.lambda_sigma[j], y));
}

MomentWindow second_moment_window(const DemandModel& model, const LocationDecision& y, std::size_t j) {
  const double mu = mean_of(model, y, j);
  const double raw = variance_of(model, y, j) + mu * mu;
  return {raw * model.eps_sigma_lo[j], raw * model.eps_sigma_hi[j]};
}

double big_lambda(const DemandModel& model, std::size_t j, std::size_t i) {
  if (j >= model.num_customers()) throw std::out_of_range("unknown customer index " + std::to_string(j));
  const double lm = model.lambda_mu[j].at(i);
  const double ls = model.lambda_sigma[j].at(i);
  const double mu2 = model.bar_mu[j] * model.bar_mu[j];
  return -model.bar_variance(j) * ls + mu2 * (2.0 * lm + lm * lm);
}

DependencyWeights lambda_from_distance(const Instance& instance, double decay_scale, double target_row_sum) {
  if (!(target_row_sum > 0.0 && target_row_sum < 1.0))
    throw std::invalid_argument("target row sum must lie in (0,1) to keep variances positive");
  if (!(decay_scale > 0.0)) throw std::invalid_argument("decay scale must be positive");
  const std::size_t nf = instance.num_facilities();
  const std::size_t nc = instance.num_customers();
  DependencyWeights w;
  w.lambda_mu.assign(nc, std::vector<double>(nf, 0.0));
  for (std::size_t j = 0; j < nc; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
      w.lambda_mu[j][i] = std::exp(-instance.cost(i, j) / decay_scale);
      total += w.lambda_mu[j][i];
    }
    for (double& v : w.lambda_mu[j]) v = target_row_sum * v / total;
  }
  w.lambda_sigma = w.lambda_mu;
  return w;
}

DependencyWeights lambda_rho_means(const Instance& instance, std::size_t rho, double sigma_scale) {
  const std::size_t nf = instance.num_facilities();
  const std::size_t nc = instance.num_customers();
  if (rho == 0 || rho > nf) throw std::invalid_argument("rho must lie in [1, number of facilities]");
  if (!(sigma_scale > 0.0 && sigma_scale < 1.0)) throw std::invalid_argument("sigma scale must lie in (0,1)");
  DependencyWeights w;
  w.sigma_scale = sigma_scale;
  w.lambda_mu.assign(nc, std::vector<double>(nf, 0.0));
  w.lambda_sigma.assign(nc, std::vector<double>(nf, 0.0));
  std::vector<std::size_t> order(nf);
  for (std::size_t j = 0; j < nc; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return instance.cost(a, j) < instance.cost(b, j); });
    for (std::size_t r = 0; r < rho; ++r) {
      w.lambda_mu[j][order[r]] = 1.0 / static_cast<double>(rho);
      w.lambda_sigma[j][order[r]] = sigma_scale / static_cast<double>(rho);
    }
  }
  return w;
}

DemandModel apply_robustness_level(const DemandModel& model, double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("robustness level must lie in [0,1]");
  DemandModel out = model;
  const std::size_t nc = model.num_customers();
  out.eps_mu.resize(nc);
  out.eps_sigma_lo.assign(nc, 1.0 - kappa);
  out.eps_sigma_hi.assign(nc, 1.0 + kappa);
  for (std::size_t j = 0; j < nc; ++j) out.eps_mu[j] = kappa * model.bar_mu[j];
  return out;
}

std::vector<Violation> validate(const Instance& instance, const DemandModel& model) {
  std::vector<Violation> out;
  auto add = [&](std::string entity, std::string rule) { out.push_back({std::move(entity), std::move(rule)}); };
  const std::size_t nf = instance.num_facilities();
  const std::size_t nc = instance.num_customers();
  if (nf == 0) add("instance", "at least one facility required");
  if (nc == 0) add("instance", "at least one customer required");

  std::set<int> ids;
  for (const Facility& f : instance.facilities()) {
    const std::string name = "facility " + std::to_string(f.id);
    if (!ids.insert(f.id).second) add(name, "duplicate facility id");
    if (!(f.capacity > 0.0)) add(name, "capacity must be positive");
    if (!(f.open_cost >= 0.0)) add(name, "open cost must be nonnegative");
  }
  ids.clear();
  for (std::size_t j = 0; j < nc; ++j) {
    const Customer& c = instance.customer(j);
    const std::string name = "customer " + std::to_string(c.id);
    if (!ids.insert(c.id).second) add(name, "duplicate customer id");
    if (!(c.revenue >= 0.0)) add(name, "revenue must be nonnegative");
    for (std::size_t i = 0; i < nf; ++i) {
      const double cij = instance.cost(i, j);
      if (!(cij >= 0.0))
        add(name + ", facility " + std::to_string(instance.facility(i).id), "transport cost must be nonnegative");
      if (!(c.penalty > cij))
        add(name + ", facility " + std::to_string(instance.facility(i).id),
            "penalty not strictly greater than transport cost");
    }
  }

  auto sized = [&](std::size_t got, const char* what) {
    if (got != nc) add("demand", std::string(what) + " needs one entry per customer");
    return got == nc;
  };
  bool dims = sized(model.bar_mu.size(), "bar_mu") & sized(model.bar_sigma.size(), "bar_sigma") &
              sized(model.lambda_mu.size(), "lambda_mu") & sized(model.lambda_sigma.size(), "lambda_sigma") &
              sized(model.eps_mu.size(), "eps_mu") & sized(model.eps_sigma_lo.size(), "eps_lo") &
              sized(model.eps_sigma_hi.size(), "eps_hi");
  if (!dims) return out;
  for (std::size_t j = 0; j < nc; ++j) {
    if (model.lambda_mu[j].size() != nf || model.lambda_sigma[j].size() != nf) {
      add("demand", "lambda rows need one entry per facility");
      return out;
    }
  }
  if (model.support.size() < 2) add("support", "at least two support points required");

  for (std::size_t j = 0; j < nc; ++j) {
    const std::string name = "customer " + std::to_string(instance.customer(j).id);
    if (!(model.bar_mu[j] >= 0.0)) add(name, "empirical mean must be nonnegative");
    if (!(model.bar_sigma[j] >= 0.0)) add(name, "empirical std must be nonnegative");
    double sigma_sum = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
      const double lm = model.lambda_mu[j][i];
      const double ls = model.lambda_sigma[j][i];
      if (!(lm >= 0.0 && lm <= 1.0)) add(name, "lambda_mu entries must lie in [0,1]");
      if (!(ls >= 0.0 && ls <= 1.0)) add(name, "lambda_sigma entries must lie in [0,1]");
      sigma_sum += ls;
    }
    if (!(sigma_sum < 1.0)) add(name, "lambda_sigma row sum must be strictly below 1");
    if (!(model.eps_mu[j] >= 0.0)) add(name, "eps_mu must be nonnegative");
    if (!(model.eps_sigma_lo[j] >= 0.0 && model.eps_sigma_lo[j] <= 1.0)) add(name, "eps_lo must lie in [0,1]");
    if (!(model.eps_sigma_hi[j] >= 1.0)) add(name, "eps_hi must be at least 1");
  }
  return out;
}

}  // namespace dddr
