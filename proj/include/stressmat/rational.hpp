#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <compare>
#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

namespace stressmat {

/// Exact rational number in canonical form (positive denominator, reduced).
///
/// Thin value wrapper over GMP's mpq_class. Every arithmetic result is
/// canonicalized by GMP, so equality is field-wise and hashing is stable.
class Rational {
 public:
  Rational() = default;

  template <std::integral I>
  Rational(I v) : q_(static_cast<long>(v)) {}  // NOLINT: implicit, Eigen builds Scalar(0)

  Rational(long num, long den);

  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses "num/den" or a plain integer. Throws Error(Parse) on bad input
  /// or a zero denominator.
  static Rational parse(std::string_view text);

  /// Canonical "num/den" serialization, e.g. "-3/2" or "0/1".
  std::string str() const;

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  double to_double() const { return q_.get_d(); }

  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  const mpq_class& value() const { return q_; }

  Rational abs() const { return Rational(mpq_class(::abs(q_))); }
  Rational inverse() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const;

 private:
  mpq_class q_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Found by Eigen through ADL (isZero, norms on exact types).
inline Rational abs(const Rational& r) { return r.abs(); }
inline Rational abs2(const Rational& r) { return r * r; }

/// Largest integer not exceeding r.
Rational floor(const Rational& r);
/// Smallest integer not below r.
Rational ceil(const Rational& r);

}  // namespace stressmat

template <>
struct std::hash<stressmat::Rational> {
  std::size_t operator()(const stressmat::Rational& r) const noexcept { return r.hash(); }
};

namespace Eigen {

template <>
struct NumTraits<stressmat::Rational> : GenericNumTraits<stressmat::Rational> {
  using Real = stressmat::Rational;
  using NonInteger = stressmat::Rational;
  using Nested = stressmat::Rational;
  using Literal = stressmat::Rational;

  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace stressmat {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RatMatrix = MatrixX<Rational>;
using RatVector = VectorX<Rational>;
using RatMatrix2 = Matrix2<Rational>;

}  // namespace stressmat
