#pragma once

#include <optional>
#include <vector>

#include "superforms/rational.hpp"

namespace superforms {

// Dense exact-rational matrices: just enough linear algebra for kernels,
// ranks and solving, all over Q with no rounding anywhere.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows, std::vector<Rational>(cols, 0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i][j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i][j]; }

  bool is_zero() const {
    for (const auto& row : a_)
      for (const auto& v : row)
        if (v != 0) return false;
    return true;
  }

  friend QMatrix operator*(const QMatrix& x, const QMatrix& y) {
    if (x.cols_ != y.rows_) throw Error("QMatrix: dimension mismatch in product");
    QMatrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x.a_[i][k] == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) r.a_[i][j] += x.a_[i][k] * y.a_[k][j];
      }
    return r;
  }

  // Reduced row echelon form; returns the pivot column of each pivot row.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
      std::size_t p = row;
      while (p < rows_ && a_[p][col] == 0) ++p;
      if (p == rows_) continue;
      std::swap(a_[p], a_[row]);
      Rational inv = Rational(1) / a_[row][col];
      for (auto& v : a_[row]) v *= inv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == row || a_[i][col] == 0) continue;
        Rational f = a_[i][col];
        for (std::size_t j = 0; j < cols_; ++j) a_[i][j] -= f * a_[row][j];
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

  std::size_t rank() const {
    QMatrix c(*this);
    return c.rref().size();
  }

  // Basis of the (right) null space.
  std::vector<std::vector<Rational>> kernel_basis() const {
    QMatrix c(*this);
    auto pivots = c.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      std::vector<Rational> v(cols_, 0);
      v[free] = 1;
      for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -c.a_[r][free];
      basis.push_back(std::move(v));
    }
    return basis;
  }

  // One solution of A x = b, if the system is consistent.
  std::optional<std::vector<Rational>> solve(const std::vector<Rational>& b) const {
    if (b.size() != rows_) throw Error("QMatrix::solve: size mismatch");
    QMatrix aug(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug.a_[i][j] = a_[i][j];
      aug.a_[i][cols_] = b[i];
    }
    auto pivots = aug.rref();
    for (auto p : pivots)
      if (p == cols_) return std::nullopt;  // inconsistent
    std::vector<Rational> x(cols_, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.a_[r][cols_];
    return x;
  }

  // Is v in the column span of this matrix?
  bool in_column_span(const std::vector<Rational>& v) const { return solve(v).has_value(); }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::vector<Rational>> a_;
};

}  // namespace superforms
