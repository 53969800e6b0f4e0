#pragma once

// Problem data for decision-dependent facility location: facilities,
// customers, the demand model whose first two moments respond to the
// location plan, and the parameter recipes used by the experiments.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dddr {

using Matrix = std::vector<std::vector<double>>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct Facility {
  int id = 0;
  Point coord;
  double open_cost = 0.0;  // f_i
  double capacity = 0.0;   // C_i
};

struct Customer {
  int id = 0;
  Point coord;
  double penalty = 0.0;  // p_j, per unit of unmet demand
  double revenue = 0.0;  // r_j, per unit of demand
};

/// Facilities, customers and unit transport costs cost[i][j].
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<Facility> facilities, std::vector<Customer> customers, Matrix cost);

  /// Transport cost = multiplier x Euclidean distance.
  static Instance euclidean(std::vector<Facility> facilities, std::vector<Customer> customers,
                            double cost_multiplier = 1.0);

  std::size_t num_facilities() const { return facilities_.size(); }
  std::size_t num_customers() const { return customers_.size(); }
  const std::vector<Facility>& facilities() const { return facilities_; }
  const std::vector<Customer>& customers() const { return customers_; }
  const Facility& facility(std::size_t i) const { return facilities_.at(i); }
  const Customer& customer(std::size_t j) const { return customers_.at(j); }
  double cost(std::size_t i, std::size_t j) const { return cost_[i][j]; }
  const Matrix& cost_matrix() const { return cost_; }

  /// Copy with every customer's penalty replaced.
  Instance with_penalty(double penalty) const;

 private:
  std::vector<Facility> facilities_;
  std::vector<Customer> customers_;
  Matrix cost_;
};

/// Finite demand support d_1 < ... < d_K.
class Support {
 public:
  Support() = default;
  explicit Support(std::vector<double> values);
  /// {min, min+step, ..., <= max}
  static Support range(double min, double max, double step);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  /// True when the support is an arithmetic progression; fills min/max/step.
  bool as_range(double& min, double& max, double& step) const;

 private:
  std::vector<double> values_;
};

/// Empirical moments, decision-dependency weights and ambiguity radii.
/// lambda_* are indexed [customer][facility].
struct DemandModel {
  std::vector<double> bar_mu;
  std::vector<double> bar_sigma;
  Matrix lambda_mu;
  Matrix lambda_sigma;
  Support support;
  std::vector<double> eps_mu;
  std::vector<double> eps_sigma_lo;
  std::vector<double> eps_sigma_hi;

  std::size_t num_customers() const { return bar_mu.size(); }
  std::size_t num_facilities() const { return lambda_mu.empty() ? 0 : lambda_mu.front().size(); }
  double bar_variance(std::size_t j) const { return bar_sigma[j] * bar_sigma[j]; }

  /// Copy with all dependency weights zeroed (decision-independent model).
  DemandModel without_dependency() const;
};

/// Open/closed plan over the candidate facilities.
class LocationDecision {
 public:
  LocationDecision() = default;
  explicit LocationDecision(std::size_t n) : open_(n, 0) {}
  explicit LocationDecision(std::vector<int> bits);
  static LocationDecision from_mask(std::uint64_t mask, std::size_t n);  // bit i -> facility i

  std::size_t size() const { return open_.size(); }
  bool is_open(std::size_t i) const { return open_.at(i) != 0; }
  double value(std::size_t i) const { return open_.at(i) != 0 ? 1.0 : 0.0; }
  void set(std::size_t i, bool open) { open_.at(i) = open ? 1 : 0; }
  std::size_t open_count() const;
  std::vector<std::size_t> open_indices() const;
  std::vector<int> bits() const;
  std::string to_string() const;  // e.g. "0110"

  friend bool operator==(const LocationDecision&, const LocationDecision&) = default;

 private:
  std::vector<std::uint8_t> open_;
};

// ---- decision-dependent moments ------------------------------------------

/// mu_j(y) = bar_mu_j (1 + sum_i lambda_mu[j][i] y_i)
double mean_of(const DemandModel& model, const LocationDecision& y, std::size_t j);
/// sigma_j^2(y) = bar_sigma_j^2 (1 - sum_i lambda_sigma[j][i] y_i)
double variance_of(const DemandModel& model, const LocationDecision& y, std::size_t j);

struct MomentWindow {
  double lo = 0.0;
  double hi = 0.0;
};
/// Admissible range of the second moment E[d_j^2] under plan y.
MomentWindow second_moment_window(const DemandModel& model, const LocationDecision& y, std::size_t j);

/// Coefficient of y_i in sigma_j^2(y) + mu_j(y)^2 ignoring the y_l y_m cross terms.
double big_lambda(const DemandModel& model, std::size_t j, std::size_t i);

// ---- parameter recipes ---------------------------------------------------

struct DependencyWeights {
  Matrix lambda_mu;
  Matrix lambda_sigma;
  double sigma_scale = 1.0;  // factor applied to the sigma rows, if any
};

/// Row j is exp(-cost_ij / decay_scale) normalised to sum to target_row_sum.
DependencyWeights lambda_from_distance(const Instance& instance, double decay_scale, double target_row_sum);

/// 1/rho on the rho nearest facilities (ties: lower index). The sigma rows
/// are scaled by sigma_scale so their sums stay below one.
DependencyWeights lambda_rho_means(const Instance& instance, std::size_t rho, double sigma_scale = 0.99);

/// eps_mu = kappa * bar_mu, eps_lo = 1 - kappa, eps_hi = 1 + kappa.
DemandModel apply_robustness_level(const DemandModel& model, double kappa);

// ---- validation ----------------------------------------------------------

struct Violation {
  std::string entity;
  std::string rule;
};

std::vector<Violation> validate(const Instance& instance, const DemandModel& model);

/// An instance together with its demand model.
struct Problem {
  Instance instance;
  DemandModel demand;
};

}  // namespace dddr
