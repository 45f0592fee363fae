#include "stressmat/rational.hpp"

#include <functional>
#include <ostream>

#include "stressmat/error.hpp"

namespace stressmat {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IdenticalLines: return "IdenticalLines";
    case ErrorKind::NotCollinear: return "NotCollinear";
    case ErrorKind::NotDistinct: return "NotDistinct";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotEquilibrium: return "NotEquilibrium";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotGeneric: return "NotGeneric";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::CovectorsMissing: return "CovectorsMissing";
    case ErrorKind::NotInPoset: return "NotInPoset";
    case ErrorKind::ChainNotCollinear: return "ChainNotCollinear";
    case ErrorKind::SeedDegenerate: return "SeedDegenerate";
    case ErrorKind::DegenerateEdge: return "DegenerateEdge";
    case ErrorKind::ClassificationFailed: return "ClassificationFailed";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ConstructionFailed: return "ConstructionFailed";
    case ErrorKind::RetryBudgetExceeded: return "RetryBudgetExceeded";
    case ErrorKind::PlacementFailed: return "PlacementFailed";
  }
  return "Unknown";
}

ErrorClass classify(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ClassificationFailed:
      return ErrorClass::Verification;
    case ErrorKind::CapExceeded:
    case ErrorKind::TooLarge:
    case ErrorKind::ConstructionFailed:
    case ErrorKind::RetryBudgetExceeded:
    case ErrorKind::PlacementFailed:
      return ErrorClass::Budget;
    default:
      return ErrorClass::Validation;
  }
}

Rational::Rational(long num, long den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const std::string s(text);
  const auto slash = s.find('/');
  auto valid_int = [](const std::string& part) {
    if (part.empty()) return false;
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw Error(ErrorKind::Parse, "malformed rational '" + s + "'");
  mpz_class n(num[0] == '+' ? num.substr(1) : num, 10);
  mpz_class d(den, 10);
  if (d == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + s + "'");
  mpq_class q(n, d);
  q.canonicalize();
  return Rational(std::move(q));
}

std::string Rational::str() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational Rational::inverse() const {
  if (is_zero()) throw Error(ErrorKind::InvalidArgument, "inverse of zero");
  return Rational(mpq_class(1 / q_));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  q_ /= o.q_;
  return *this;
}

std::size_t Rational::hash() const {
  const std::size_t h1 = std::hash<std::string>{}(q_.get_num().get_str(16));
  const std::size_t h2 = std::hash<std::string>{}(q_.get_den().get_str(16));
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational floor(const Rational& r) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), r.value().get_num_mpz_t(), r.value().get_den_mpz_t());
  return Rational(mpq_class(f));
}

Rational ceil(const Rational& r) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), r.value().get_num_mpz_t(), r.value().get_den_mpz_t());
  return Rational(mpq_class(c));
}

}  // namespace stressmat
