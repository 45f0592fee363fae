#include "stressmat/geometry.hpp"

#include "stressmat/error.hpp"

namespace stressmat {

char sign_char(Sign s) {
  switch (s) {
    case Sign::Positive: return '+';
    case Sign::Negative: return '-';
    case Sign::Zero: break;
  }
  return '0';
}

Line::Line(Rational a, Rational b, Rational c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (a_.is_zero() && b_.is_zero())
    throw Error(ErrorKind::InvalidArgument, "line with a = b = 0");
  const Rational lead = a_.is_zero() ? b_ : a_;
  a_ /= lead;
  b_ /= lead;
  c_ /= lead;
}

Line Line::through(const Point& p, const Point& q) {
  if (p == q) throw Error(ErrorKind::NotDistinct, "line through coincident points");
  const Rational a = p.y() - q.y();
  const Rational b = q.x() - p.x();
  return Line(a, b, -(a * p.x() + b * p.y()));
}

Line Line::transformed(const RatMatrix2& m, const Point& t) const {
  // a^T p + c = 0 with p = m^{-1}(q - t)  =>  (a^T m^{-1}) q + (c - a^T m^{-1} t) = 0
  const RatMatrix2 inv = inverse2(m);
  const Vector2<Rational> coeff(a_, b_);
  const Vector2<Rational> image = inv.transpose() * coeff;
  return Line(image.x(), image.y(), c_ - image.dot(t));
}

std::variant<Point, Parallel> intersect(const Line& l1, const Line& l2) {
  if (l1 == l2) throw Error(ErrorKind::IdenticalLines, "intersect of identical lines");
  const Rational det = l1.a() * l2.b() - l2.a() * l1.b();
  if (det.is_zero()) return Parallel{};
  const Rational x = (l1.b() * l2.c() - l2.b() * l1.c()) / det;
  const Rational y = (l2.a() * l1.c() - l1.a() * l2.c()) / det;
  return Point(x, y);
}

Point intersection_point(const Line& l1, const Line& l2) {
  auto r = intersect(l1, l2);
  if (std::holds_alternative<Parallel>(r))
    throw Error(ErrorKind::InvalidArgument, "lines are parallel");
  return std::get<Point>(r);
}

Segment::Segment(Point p, Point q) : first(std::move(p)), second(std::move(q)) {
  if (first == second) throw Error(ErrorKind::NotDistinct, "segment endpoints coincide");
}

std::optional<Point> segment_interior_crossing(const Line& l, const Segment& s) {
  const Rational f0 = l.evaluate(s.first);
  const Rational f1 = l.evaluate(s.second);
  if (f0.sign() * f1.sign() >= 0) return std::nullopt;
  const Rational t = f0 / (f0 - f1);
  return Point(s.first + t * (s.second - s.first));
}

Rational cross_ratio(const Point& p1, const Point& p2, const Point& p3, const Point& p4) {
  if (p1 == p2 || p1 == p3 || p1 == p4 || p2 == p3 || p2 == p4 || p3 == p4)
    throw Error(ErrorKind::NotDistinct, "cross ratio needs four distinct points");
  if (orient(p1, p2, p3) != Sign::Zero || orient(p1, p2, p4) != Sign::Zero)
    throw Error(ErrorKind::NotCollinear, "cross ratio needs collinear points");
  const Point dir = p2 - p1;
  auto t = [&](const Point& p) { return dir.dot(p - p1); };
  const Rational t1 = t(p1), t2 = t(p2), t3 = t(p3), t4 = t(p4);
  return (t1 - t3) * (t2 - t4) / ((t2 - t3) * (t1 - t4));
}

RatMatrix2 inverse2(const RatMatrix2& m) {
  const Rational det = det2(m);
  if (det.is_zero()) throw Error(ErrorKind::SingularMatrix, "singular 2x2 matrix");
  RatMatrix2 inv;
  inv << m(1, 1) / det, -m(0, 1) / det, -m(1, 0) / det, m(0, 0) / det;
  return inv;
}

}  // namespace stressmat
