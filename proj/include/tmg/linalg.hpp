#pragma once

// Dense linear algebra over F_q: reduced row echelon form with a fixed pivoting order,
// kernel bases, and rank. Row updates for one pivot may run on several workers; each row
// is touched by exactly one worker, so the output does not depend on scheduling.

#include <optional>
#include <vector>

#include "tmg/fq.hpp"
#include "tmg/parallel.hpp"

namespace tmg {

class FqMatrix {
 public:
  FqMatrix() = default;
  FqMatrix(FieldPtr field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, FqElem{0}) {}

  const FieldPtr& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  FqElem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  FqElem operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<FqElem> row(std::size_t i) const {
    return {data_.begin() + std::ptrdiff_t(i * cols_), data_.begin() + std::ptrdiff_t((i + 1) * cols_)};
  }

  std::vector<FqElem> apply(const std::vector<FqElem>& x) const {
    std::vector<FqElem> y(rows_, FqElem{0});
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j).code && x[j].code) y[i] = field_->add(y[i], field_->mul((*this)(i, j), x[j]));
    return y;
  }

  friend bool operator==(const FqMatrix& a, const FqMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  FieldPtr field_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<FqElem> data_;
};

struct Echelon {
  FqMatrix reduced;
  std::vector<std::size_t> pivot_cols;  // one per nonzero row, increasing
};

/// Reduced row echelon form. Pivot columns are scanned left to right in `column_order`
/// (identity order when empty); the first row with a nonzero entry becomes the pivot row.
inline Echelon rref(FqMatrix m, const std::vector<std::size_t>& column_order = {}) {
  const auto& F = m.field();
  std::vector<std::size_t> order = column_order;
  if (order.empty())
    for (std::size_t j = 0; j < m.cols(); ++j) order.push_back(j);
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t j : order) {
    if (pivot_row >= m.rows()) break;
    std::optional<std::size_t> found;
    for (std::size_t i = pivot_row; i < m.rows(); ++i)
      if (m(i, j).code) {
        found = i;
        break;
      }
    if (!found) continue;
    if (*found != pivot_row)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(*found, k), m(pivot_row, k));
    const FqElem inv = F->inv(m(pivot_row, j));
    for (std::size_t k = 0; k < m.cols(); ++k) m(pivot_row, k) = F->mul(m(pivot_row, k), inv);
    const std::size_t pr = pivot_row;
    parallel_for(0, m.rows(), [&](std::size_t i) {
      if (i == pr) return;
      const FqElem factor = m(i, j);
      if (!factor.code) return;
      for (std::size_t k = 0; k < m.cols(); ++k)
        if (m(pr, k).code) m(i, k) = F->sub(m(i, k), F->mul(factor, m(pr, k)));
    });
    pivots.push_back(j);
    ++pivot_row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const FqMatrix& m) { return rref(m).pivot_cols.size(); }

/// Kernel basis: one vector per free column, in increasing column order, with a 1 at that
/// free column (standard basis of the nullspace read off the RREF).
inline std::vector<std::vector<FqElem>> kernel_basis(const FqMatrix& m) {
  const auto& F = m.field();
  const Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<FqElem>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<FqElem> v(m.cols(), FqElem{0});
    v[free] = F->one();
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) v[e.pivot_cols[r]] = F->neg(e.reduced(r, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Stacks vectors as rows.
inline FqMatrix matrix_from_rows(const FieldPtr& F, const std::vector<std::vector<FqElem>>& rows, std::size_t cols) {
  FqMatrix m(F, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace tmg
