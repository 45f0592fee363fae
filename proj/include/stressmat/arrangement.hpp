#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stressmat/geometry.hpp"

namespace stressmat {

/// Labeled set of lines; label k is position k in `lines` (0-based here,
/// 1-based in files and reports).
struct LineArrangement {
  std::vector<Line> lines;

  std::size_t size() const { return lines.size(); }
  const Line& operator[](std::size_t i) const { return lines[i]; }

  /// Image under p -> m p + t.
  LineArrangement transformed(const RatMatrix2& m, const Point& t) const;
  /// Lines i < j meet at this point (arrangement must be generic).
  Point crossing(std::size_t i, std::size_t j) const { return intersection_point(lines[i], lines[j]); }

  friend bool operator==(const LineArrangement&, const LineArrangement&) = default;
};

struct GenericityReport {
  bool generic = true;
  std::vector<std::string> violations;
};

/// Pairwise non-parallel, no three lines through a point, at least two lines.
GenericityReport is_generic(const LineArrangement& arrangement);

/// Affine order type of a generic arrangement. For line i:
///  - crossing_orders[i]: the other lines by crossing position along line i,
///    taken up to reversal (the lexicographically smaller direction);
///  - side_signs[i]: side of line i holding each crossing T_jk (j < k, both
///    != i, lexicographic), taken up to global negation (first sign '+').
struct ArrangementType {
  std::vector<std::vector<std::size_t>> crossing_orders;
  std::vector<std::string> side_signs;

  friend bool operator==(const ArrangementType&, const ArrangementType&) = default;
};

/// Throws NotGeneric.
ArrangementType combinatorial_type(const LineArrangement& arrangement);

/// Same labeled combinatorial type. Throws SizeMismatch, NotGeneric.
bool equivalent(const LineArrangement& l1, const LineArrangement& l2);

struct Perturbation {
  LineArrangement arrangement;
  unsigned halvings = 0;  // how often the magnitude was halved before success
};

/// Perturbs every coefficient by a rational of absolute value <= magnitude,
/// halving the magnitude until the result is equivalent to the input.
/// Deterministic for a fixed seed. Throws NotGeneric, RetryBudgetExceeded.
Perturbation perturb_preserving_type(const LineArrangement& arrangement, const Rational& magnitude,
                                     std::uint64_t seed, unsigned max_attempts = 48);

}  // namespace stressmat
