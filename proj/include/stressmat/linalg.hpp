#pragma once

#include <Eigen/Core>
#include <vector>

#include "stressmat/rational.hpp"

namespace stressmat {

/// Reduced row echelon form of a matrix over an exact field.
template <typename Scalar>
struct Echelon {
  MatrixX<Scalar> reduced;            // rank rows in RREF, zero rows dropped
  std::vector<Eigen::Index> pivots;   // pivot column of each row, increasing
  Eigen::Index rank() const { return static_cast<Eigen::Index>(pivots.size()); }
};

/// Gauss-Jordan elimination with the lowest column index taken as pivot
/// first. Over an exact field the result is the unique RREF of the row space.
template <typename Derived>
Echelon<typename Derived::Scalar> row_echelon(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> m = input;
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  const Scalar zero(0);

  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index p = r;
    while (p < rows && m(p, c) == zero) ++p;
    if (p == rows) continue;
    if (p != r) m.row(p).swap(m.row(r));

    const Scalar inv = Scalar(1) / m(r, c);
    for (Eigen::Index j = c; j < cols; ++j)
      if (m(r, j) != zero) m(r, j) *= inv;

    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || m(i, c) == zero) continue;
      const Scalar factor = m(i, c);
      for (Eigen::Index j = c; j < cols; ++j)
        if (m(r, j) != zero) m(i, j) -= factor * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {m.topRows(r), std::move(pivots)};
}

template <typename Derived>
Eigen::Index exact_rank(const Eigen::MatrixBase<Derived>& m) {
  return row_echelon(m).rank();
}

/// Basis of the right kernel {x : m x = 0}, one basis vector per row, in
/// canonical RREF. Deterministic for a fixed input.
template <typename Derived>
MatrixX<typename Derived::Scalar> nullspace(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Echelon<Scalar> ech = row_echelon(m);
  const Eigen::Index cols = m.cols();

  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (auto p : ech.pivots) is_pivot[static_cast<std::size_t>(p)] = true;

  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0; c < cols; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);

  MatrixX<Scalar> kernel = MatrixX<Scalar>::Zero(static_cast<Eigen::Index>(free_cols.size()), cols);
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const auto f = free_cols[k];
    const auto row = static_cast<Eigen::Index>(k);
    kernel(row, f) = Scalar(1);
    for (Eigen::Index r = 0; r < ech.rank(); ++r)
      kernel(row, ech.pivots[static_cast<std::size_t>(r)]) = -ech.reduced(r, f);
  }
  if (kernel.rows() == 0) return kernel;
  return row_echelon(kernel).reduced;
}

/// True iff every entry equals zero exactly.
template <typename Derived>
bool exactly_zero(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != Scalar(0)) return false;
  return true;
}

}  // namespace stressmat
