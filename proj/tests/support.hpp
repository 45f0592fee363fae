#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stressmat/arrangement.hpp"
#include "stressmat/error.hpp"
#include "stressmat/framework.hpp"
#include "stressmat/linalg.hpp"
#include "stressmat/sign_matroid.hpp"
#include "stressmat/stress_kernel.hpp"

namespace testkit {

using namespace stressmat;

/// Kind of the Error thrown by f, if any.
inline std::optional<ErrorKind> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline std::string data_path(const std::string& name) { return std::string(STRESSMAT_DATA_DIR) + "/" + name; }

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  long integer(long lo, long hi) { return lo + static_cast<long>(gen() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Rational rational(long span = 9, long max_den = 7) { return Rational(integer(-span, span), integer(1, max_den)); }
  Rational nonzero(long span = 9, long max_den = 7) {
    for (;;) {
      Rational r = rational(span, max_den);
      if (!r.is_zero()) return r;
    }
  }
  Point point(long span = 9) { return Point(rational(span), rational(span)); }
  RatMatrix2 invertible() {
    for (;;) {
      RatMatrix2 m;
      m << rational(), rational(), rational(), rational();
      if (!det2(m).is_zero()) return m;
    }
  }
};

inline Framework k4_interior() {
  Graph g({"1", "2", "3", "4"}, {{"1", "2"}, {"2", "3"}, {"1", "3"}, {"1", "4"}, {"2", "4"}, {"3", "4"}});
  return Framework(g, {Point(0, 0), Point(3, 0), Point(0, 3), Point(1, 1)});
}

inline Framework k4_convex() {
  Graph g({"1", "2", "3", "4"}, {{"1", "2"}, {"2", "3"}, {"1", "3"}, {"1", "4"}, {"2", "4"}, {"3", "4"}});
  return Framework(g, {Point(0, 0), Point(3, 0), Point(3, 3), Point(0, 3)});
}

inline Framework collinear_k3() {
  Graph g({"1", "2", "3"}, {{"1", "2"}, {"2", "3"}, {"1", "3"}});
  return Framework(g, {Point(0, 0), Point(1, 0), Point(3, 0)});
}

inline LineArrangement lines(std::initializer_list<std::array<long, 3>> coeffs) {
  LineArrangement l;
  for (const auto& c : coeffs) l.lines.emplace_back(Rational(c[0]), Rational(c[1]), Rational(c[2]));
  return l;
}

// y = x, y = -x + 1, y = 2x + 3, y = -3x - 2
inline LineArrangement arrangement(std::size_t n) {
  const std::array<std::array<long, 3>, 4> all{{{1, -1, 0}, {-1, -1, 1}, {2, -1, 3}, {-3, -1, -2}}};
  LineArrangement l;
  for (std::size_t k = 0; k < n; ++k) l.lines.emplace_back(Rational(all[k][0]), Rational(all[k][1]), Rational(all[k][2]));
  return l;
}

// Line 4 moved to the other side of the crossing of lines 1 and 2.
inline LineArrangement arrangement4_slid() {
  LineArrangement l = arrangement(4);
  l.lines[3] = Line(Rational(-3), Rational(-1), Rational(6));
  return l;
}

/// Rank by fraction-free (Bareiss) elimination on an integer-scaled copy.
inline std::size_t bareiss_rank(const RatMatrix& m) {
  const auto rows = static_cast<std::size_t>(m.rows()), cols = static_cast<std::size_t>(m.cols());
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < cols; ++c) {
      const mpq_class q(m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).str());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    }
    for (std::size_t c = 0; c < cols; ++c) {
      mpq_class q(m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).str());
      q.canonicalize();
      a[r][c] = q.get_num() * (l / q.get_den());
    }
  }
  std::size_t rank = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

/// Minimal supports among the oracle's sign vectors, canonical and sorted.
inline std::vector<SignVector> oracle_circuits(const StressBasis& b) {
  const auto all = sign_vectors_oracle(b);
  std::set<SignVector> out;
  for (const auto& x : all) {
    const auto sx = support(x);
    bool minimal = true;
    for (const auto& y : all) {
      const auto sy = support(y);
      if (sy.size() < sx.size() && std::includes(sx.begin(), sx.end(), sy.begin(), sy.end())) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.insert(canonical(x));
  }
  return {out.begin(), out.end()};
}

inline StressBasis random_basis(Rng& rng, std::size_t d, std::size_t e) {
  StressBasis b;
  b.edge_count = e;
  b.vectors = RatMatrix(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(e));
  for (Eigen::Index r = 0; r < b.vectors.rows(); ++r)
    for (Eigen::Index c = 0; c < b.vectors.cols(); ++c)
      // Sparse small entries so that degenerate sign patterns show up.
      b.vectors(r, c) = rng.integer(0, 2) == 0 ? Rational(0) : Rational(rng.integer(-3, 3));
  // Keep an independent spanning set of the same row space.
  const auto ech = row_echelon(b.vectors);
  b.vectors = RatMatrix(ech.reduced.topRows(static_cast<Eigen::Index>(ech.rank())));
  return b;
}

}  // namespace testkit
