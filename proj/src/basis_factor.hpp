#pragma once

// Basis factorizations for the revised simplex. Internal header.

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace dddr::detail {

struct SparseColumn {
  std::vector<int> index;
  std::vector<double> value;
};

class BasisFactor {
 public:
  virtual ~BasisFactor() = default;
  /// Returns false when the basis is numerically singular.
  virtual bool factor(const std::vector<SparseColumn>& columns) = 0;
  /// v <- B^{-1} v
  virtual void ftran(Eigen::VectorXd& v) const = 0;
  /// v <- B^{-T} v
  virtual void btran(Eigen::VectorXd& v) const = 0;
  /// Column `pos` of B replaced; alpha = B_old^{-1} a_entering.
  virtual void update(std::size_t pos, const Eigen::VectorXd& alpha) = 0;
  virtual std::size_t num_updates() const = 0;
};

/// Explicit inverse, rank-one updates. For small bases.
class DenseInverseFactor final : public BasisFactor {
 public:
  explicit DenseInverseFactor(std::size_t m) : m_(m) {}

  bool factor(const std::vector<SparseColumn>& columns) override {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
    for (std::size_t c = 0; c < columns.size(); ++c)
      for (std::size_t k = 0; k < columns[c].index.size(); ++k)
        b(columns[c].index[k], static_cast<Eigen::Index>(c)) = columns[c].value[k];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    if (!lu.isInvertible()) return false;
    inverse_ = lu.inverse();
    updates_ = 0;
    return true;
  }

  void ftran(Eigen::VectorXd& v) const override { v = inverse_ * v; }
  void btran(Eigen::VectorXd& v) const override { v = inverse_.transpose() * v; }

  void update(std::size_t pos, const Eigen::VectorXd& alpha) override {
    const auto r = static_cast<Eigen::Index>(pos);
    inverse_.row(r) /= alpha(r);
    for (Eigen::Index i = 0; i < inverse_.rows(); ++i) {
      if (i == r || alpha(i) == 0.0) continue;
      inverse_.row(i) -= alpha(i) * inverse_.row(r);
    }
    ++updates_;
  }

  std::size_t num_updates() const override { return updates_; }

 private:
  std::size_t m_;
  Eigen::MatrixXd inverse_;
  std::size_t updates_ = 0;
};

/// Sparse LU of the refactorized basis followed by a product-form eta file.
class SparseLuFactor final : public BasisFactor {
 public:
  explicit SparseLuFactor(std::size_t m) : m_(m) {}

  bool factor(const std::vector<SparseColumn>& columns) override {
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t c = 0; c < columns.size(); ++c)
      for (std::size_t k = 0; k < columns[c].index.size(); ++k)
        triplets.emplace_back(columns[c].index[k], static_cast<int>(c), columns[c].value[k]);
    Eigen::SparseMatrix<double> b(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
    b.setFromTriplets(triplets.begin(), triplets.end());
    b.makeCompressed();
    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
    lu_->analyzePattern(b);
    lu_->factorize(b);
    etas_.clear();
    return lu_->info() == Eigen::Success;
  }

  void ftran(Eigen::VectorXd& v) const override {
    v = lu_->solve(v);
    for (const Eta& e : etas_) {
      const double pivot_value = v(e.pos) / e.pivot;
      if (pivot_value != 0.0)
        for (std::size_t k = 0; k < e.index.size(); ++k) v(e.index[k]) -= e.value[k] * pivot_value;
      v(e.pos) = pivot_value;
    }
  }

  void btran(Eigen::VectorXd& v) const override {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = v(it->pos);
      for (std::size_t k = 0; k < it->index.size(); ++k) acc -= it->value[k] * v(it->index[k]);
      v(it->pos) = acc / it->pivot;
    }
    v = lu_->transpose().solve(v);
  }

  void update(std::size_t pos, const Eigen::VectorXd& alpha) override {
    Eta e;
    e.pos = static_cast<Eigen::Index>(pos);
    e.pivot = alpha(e.pos);
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
      if (i == e.pos || alpha(i) == 0.0) continue;
      e.index.push_back(i);
      e.value.push_back(alpha(i));
    }
    etas_.push_back(std::move(e));
  }

  std::size_t num_updates() const override { return etas_.size(); }

 private:
  struct Eta {
    Eigen::Index pos = 0;
    double pivot = 1.0;
    std::vector<Eigen::Index> index;
    std::vector<double> value;
  };

  std::size_t m_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> lu_;
  std::vector<Eta> etas_;
};

inline std::unique_ptr<BasisFactor> make_basis_factor(std::size_t m) {
  if (m <= 160) return std::make_unique<DenseInverseFactor>(m);
  return std::make_unique<SparseLuFactor>(m);
}

}  // namespace dddr::detail
