#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stressmat/stress_kernel.hpp"

namespace stressmat {

/// String over {'+','-','0'}, one character per edge in edge order.
using SignVector = std::string;

/// Default budget for covector enumeration; STRESSMATROID_MAX_CELLS overrides it.
inline constexpr std::size_t kDefaultCovectorCap = 1'000'000;
std::size_t covector_cap_from_env(std::size_t fallback = kDefaultCovectorCap);

SignVector sign_vector(const Stress& s);
SignVector negated(const SignVector& x);
SignVector zero_vector(std::size_t length);
bool is_zero(const SignVector& x);
/// Representative of {x, -x} whose first nonzero entry is '+'.
SignVector canonical(const SignVector& x);
/// Composition x o y: x where nonzero, y elsewhere.
SignVector compose(const SignVector& x, const SignVector& y);
/// Conformal order: x <= y iff each x_i is '0' or equals y_i.
bool conformal_leq(const SignVector& x, const SignVector& y);
std::vector<std::size_t> support(const SignVector& x);

/// The oriented matroid of stresses of one framework.
struct StressMatroid {
  std::vector<std::pair<std::string, std::string>> edge_order;
  std::vector<SignVector> circuits;                  // canonical representatives, sorted
  std::optional<std::vector<SignVector>> covectors;  // canonical nonzero representatives, sorted

  std::size_t edge_count() const { return edge_order.size(); }
  /// Circuits together with their negations, sorted.
  std::vector<SignVector> signed_circuits() const;
  /// Full covector set with antipodes and the zero vector; CovectorsMissing.
  std::vector<SignVector> full_covectors() const;
};

/// Minimal-support sign vectors of the row space of the basis: one per
/// hyperplane spanned by the basis columns. Canonical representatives, sorted.
std::vector<SignVector> circuits_from_basis(const StressBasis& b);

/// Composition closure of signed circuits, including antipodes and zero,
/// sorted. Throws CapExceeded once the set grows past `cap`.
std::vector<SignVector> covectors_from_circuits(const std::vector<SignVector>& circuits,
                                                std::size_t length, std::size_t cap);

/// SIGN of the row space of b (antipodes and zero included), sorted.
std::vector<SignVector> all_sign_vectors(const StressBasis& b, std::size_t cap);

/// Independent check of all_sign_vectors: every candidate string is tested
/// for realizability by Fourier-Motzkin elimination. Nonzero strings only.
/// Throws TooLarge when |E| > 10.
std::vector<SignVector> sign_vectors_oracle(const StressBasis& b);

StressMatroid stress_matroid(const Framework& f, bool with_covectors = false,
                             std::size_t cap = kDefaultCovectorCap);

/// Equality of circuit sets, where edge k of m1 corresponds to edge
/// correspondence[k] of m2. Throws ArityMismatch if that is not a bijection.
bool matroid_equal(const StressMatroid& m1, const StressMatroid& m2,
                   const std::vector<std::size_t>& correspondence);

std::vector<std::size_t> identity_correspondence(std::size_t n);

/// Edges whose unit sign vector is a circuit, i.e. degenerate edges.
std::vector<EdgeIndex> degenerate_edge_signature(const StressMatroid& m);

/// Covectors ordered by conformal refinement, with the zero vector as bottom.
class FacePoset {
 public:
  explicit FacePoset(std::vector<SignVector> elements);

  const std::vector<SignVector>& elements() const { return elements_; }
  bool contains(const SignVector& x) const { return index_.count(x) > 0; }
  bool leq(const SignVector& x, const SignVector& y) const { return conformal_leq(x, y); }

  /// Longest chain from zero to x, counted in elements, minus one.
  /// Throws NotInPoset.
  std::size_t tile_dimension(const SignVector& x) const;

 private:
  std::vector<SignVector> elements_;  // sorted by support size, then lexicographically
  std::unordered_map<SignVector, std::size_t> index_;
  std::vector<std::size_t> longest_;  // chain length from zero, in elements
};

/// Throws CovectorsMissing.
FacePoset face_poset(const StressMatroid& m);

}  // namespace stressmat
