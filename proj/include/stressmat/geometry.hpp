#pragma once

#include <optional>
#include <utility>
#include <variant>

#include "stressmat/rational.hpp"

namespace stressmat {

using Point = Vector2<Rational>;

/// Sign of a scalar: -1, 0 or +1.
enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

inline Sign sign_of(const Rational& r) { return static_cast<Sign>(r.sign()); }
inline Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }
char sign_char(Sign s);

/// z-component of the 2D cross product.
template <typename Scalar>
Scalar cross(const Vector2<Scalar>& u, const Vector2<Scalar>& v) {
  return u.x() * v.y() - u.y() * v.x();
}

/// Sign of det |q - p, r - p|: positive for a left turn, zero iff collinear.
template <typename Scalar>
Sign orient(const Vector2<Scalar>& p, const Vector2<Scalar>& q, const Vector2<Scalar>& r) {
  const Scalar d = cross<Scalar>(q - p, r - p);
  return d > Scalar(0) ? Sign::Positive : (d < Scalar(0) ? Sign::Negative : Sign::Zero);
}

/// Mirror image across the vertical line x = axis_x.
template <typename Scalar>
Vector2<Scalar> reflect_vertical_axis(const Vector2<Scalar>& p, const Scalar& axis_x) {
  return Vector2<Scalar>(Scalar(2) * axis_x - p.x(), p.y());
}

/// The locus a*x + b*y + c = 0, stored with the first nonzero coefficient
/// scaled to 1 so that equal lines compare equal field-wise.
class Line {
 public:
  Line(Rational a, Rational b, Rational c);

  static Line through(const Point& p, const Point& q);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }

  /// a*x + b*y + c; its sign tells the side of the line p lies on.
  Rational evaluate(const Point& p) const { return a_ * p.x() + b_ * p.y() + c_; }
  Sign side(const Point& p) const { return sign_of(evaluate(p)); }
  bool contains(const Point& p) const { return evaluate(p).is_zero(); }

  /// Direction vector (-b, a); fixes the orientation used for parameters.
  Point direction() const { return Point(-b_, a_); }
  /// Affine parameter of a point along the oriented line.
  Rational parameter(const Point& p) const { return direction().dot(p); }

  bool parallel_to(const Line& o) const { return (a_ * o.b_ - o.a_ * b_).is_zero(); }

  /// Image of this line under p -> m p + t (m invertible).
  Line transformed(const RatMatrix2& m, const Point& t) const;

  friend bool operator==(const Line&, const Line&) = default;

 private:
  Rational a_, b_, c_;
};

struct Parallel {
  friend bool operator==(Parallel, Parallel) { return true; }
};

/// Common point of two distinct lines, or Parallel. Throws IdenticalLines.
std::variant<Point, Parallel> intersect(const Line& l1, const Line& l2);

/// Convenience: the intersection point, throwing InvalidArgument if parallel.
Point intersection_point(const Line& l1, const Line& l2);

struct Segment {
  Segment(Point p, Point q);
  Point first, second;
};

/// Crossing of l with the open segment; nullopt unless the endpoints lie
/// strictly on opposite sides of l.
std::optional<Point> segment_interior_crossing(const Line& l, const Segment& s);

/// Cross ratio (t1-t3)(t2-t4) / ((t2-t3)(t1-t4)) of four collinear,
/// pairwise distinct points. Throws NotCollinear or NotDistinct.
Rational cross_ratio(const Point& p1, const Point& p2, const Point& p3, const Point& p4);

/// Determinant of a 2x2 rational matrix.
inline Rational det2(const RatMatrix2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

/// Exact inverse; throws SingularMatrix.
RatMatrix2 inverse2(const RatMatrix2& m);

}  // namespace stressmat
