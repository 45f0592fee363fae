#include "stressmat/stress_kernel.hpp"

#include "stressmat/error.hpp"
#include "stressmat/linalg.hpp"

namespace stressmat {

Stress StressBasis::combine(const std::vector<Rational>& coeffs) const {
  if (coeffs.size() != dimension())
    throw Error(ErrorKind::LengthMismatch, "coefficient count does not match basis dimension");
  Stress s = Stress::Zero(static_cast<Eigen::Index>(edge_count));
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (!coeffs[k].is_zero()) s += coeffs[k] * vector(k);
  return s;
}

StressBasis stress_basis(const Framework& f) {
  return {nullspace(equilibrium_matrix(f)), f.edge_count()};
}

bool is_stressable(const Framework& f) { return stress_basis(f).dimension() > 0; }

StressBasis solve_on_support(const Framework& f, const std::set<EdgeIndex>& support) {
  for (EdgeIndex e : support)
    if (e >= f.edge_count()) throw Error(ErrorKind::InvalidArgument, "support edge out of range");
  const std::vector<EdgeIndex> cols(support.begin(), support.end());
  const RatMatrix full = equilibrium_matrix(f);
  RatMatrix restricted(full.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k)
    restricted.col(static_cast<Eigen::Index>(k)) = full.col(static_cast<Eigen::Index>(cols[k]));

  const RatMatrix local = nullspace(restricted);
  RatMatrix lifted = RatMatrix::Zero(local.rows(), static_cast<Eigen::Index>(f.edge_count()));
  for (std::size_t k = 0; k < cols.size(); ++k)
    lifted.col(static_cast<Eigen::Index>(cols[k])) = local.col(static_cast<Eigen::Index>(k));
  return {lifted, f.edge_count()};
}

std::size_t equilibrium_rank(const Framework& f) {
  return static_cast<std::size_t>(exact_rank(equilibrium_matrix(f)));
}

}  // namespace stressmat
