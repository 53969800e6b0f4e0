#pragma once

// Test-only LP oracle: enumerate every vertex of a small boxed polytope.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dddr/simplex.hpp"

namespace testing {

/// Random boxed LP with integer data; rows are <=, >=, = or ranged.
inline dddr::LinearProgram random_lp(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> kind(0, 3);
  dddr::LinearProgram lp;
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const int a = coef(rng);
      if (a != 0) t.emplace_back(static_cast<int>(i), static_cast<int>(j), a);
    }
  lp.matrix.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  lp.matrix.setFromTriplets(t.begin(), t.end());
  for (std::size_t j = 0; j < n; ++j) {
    lp.cost.push_back(coef(rng));
    const double lo = coef(rng);
    lp.col_lower.push_back(lo);
    lp.col_upper.push_back(lo + 1 + std::abs(coef(rng)));
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double b = coef(rng) * 2.0;
    switch (kind(rng)) {
      case 0: lp.row_lower.push_back(-dddr::kInfinity); lp.row_upper.push_back(b); break;
      case 1: lp.row_lower.push_back(b); lp.row_upper.push_back(dddr::kInfinity); break;
      case 2: lp.row_lower.push_back(b); lp.row_upper.push_back(b); break;
      default: lp.row_lower.push_back(b); lp.row_upper.push_back(b + 3.0); break;
    }
  }
  lp.offset = 0.5;
  return lp;
}

/// Optimal value by vertex enumeration, nullopt when infeasible. Requires all
/// columns boxed so the optimum sits on a vertex.
inline std::optional<double> brute_force_lp(const dddr::LinearProgram& lp) {
  const std::size_t n = lp.cols();
  const std::size_t m = lp.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd(lp.matrix);
  // Candidate hyperplanes: (row vector, value)
  std::vector<std::pair<Eigen::RowVectorXd, double>> planes;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::isfinite(lp.row_lower[i])) planes.emplace_back(a.row(static_cast<Eigen::Index>(i)), lp.row_lower[i]);
    if (std::isfinite(lp.row_upper[i]) && lp.row_upper[i] != lp.row_lower[i])
      planes.emplace_back(a.row(static_cast<Eigen::Index>(i)), lp.row_upper[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
    e(static_cast<Eigen::Index>(j)) = 1.0;
    planes.emplace_back(e, lp.col_lower[j]);
    planes.emplace_back(e, lp.col_upper[j]);
  }
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  const std::size_t p = planes.size();
  // iterate over all n-subsets
  std::vector<bool> mask(p, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(std::min(n, p)), true);
  do {
    Eigen::MatrixXd sys(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    std::size_t r = 0;
    for (std::size_t k = 0; k < p; ++k)
      if (mask[k]) {
        sys.row(static_cast<Eigen::Index>(r)) = planes[k].first;
        rhs(static_cast<Eigen::Index>(r)) = planes[k].second;
        ++r;
      }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd x = lu.solve(rhs);
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j)
      ok = x(static_cast<Eigen::Index>(j)) >= lp.col_lower[j] - 1e-9 && x(static_cast<Eigen::Index>(j)) <= lp.col_upper[j] + 1e-9;
    const Eigen::VectorXd act = a * x;
    for (std::size_t i = 0; i < m && ok; ++i)
      ok = act(static_cast<Eigen::Index>(i)) >= lp.row_lower[i] - 1e-9 && act(static_cast<Eigen::Index>(i)) <= lp.row_upper[i] + 1e-9;
    if (!ok) continue;
    double obj = lp.offset;
    for (std::size_t j = 0; j < n; ++j) obj += lp.cost[j] * x(static_cast<Eigen::Index>(j));
    if (!best || obj < *best) best = obj;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace testing
