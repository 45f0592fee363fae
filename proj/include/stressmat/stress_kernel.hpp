#pragma once

#include <set>
#include <vector>

#include "stressmat/framework.hpp"

namespace stressmat {

/// Exact basis of the self-stress space, one stress per row, in canonical
/// reduced row echelon form with respect to the edge order.
struct StressBasis {
  RatMatrix vectors;  // dimension x |E|
  std::size_t edge_count = 0;

  std::size_t dimension() const { return static_cast<std::size_t>(vectors.rows()); }
  Stress vector(std::size_t k) const { return vectors.row(static_cast<Eigen::Index>(k)).transpose(); }

  /// Linear combination sum_k coeffs[k] * vector(k).
  Stress combine(const std::vector<Rational>& coeffs) const;
};

StressBasis stress_basis(const Framework& f);

bool is_stressable(const Framework& f);

/// Equilibrium stresses vanishing on every edge outside `support`.
StressBasis solve_on_support(const Framework& f, const std::set<EdgeIndex>& support);

/// rank(equilibrium_matrix(f)), for rank-nullity checks.
std::size_t equilibrium_rank(const Framework& f);

}  // namespace stressmat
