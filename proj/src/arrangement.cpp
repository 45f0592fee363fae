#include "stressmat/arrangement.hpp"

#include <algorithm>
#include <random>

#include "stressmat/error.hpp"

namespace stressmat {

LineArrangement LineArrangement::transformed(const RatMatrix2& m, const Point& t) const {
  LineArrangement out;
  for (const auto& l : lines) out.lines.push_back(l.transformed(m, t));
  return out;
}

GenericityReport is_generic(const LineArrangement& arrangement) {
  GenericityReport report;
  const std::size_t n = arrangement.size();
  auto label = [](std::size_t i) { return std::to_string(i + 1); };
  if (n < 2) {
    report.generic = false;
    report.violations.push_back("fewer than two lines");
    return report;
  }
  bool any_parallel = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (arrangement[i] == arrangement[j]) {
        report.violations.push_back("lines " + label(i) + " and " + label(j) + " coincide");
        any_parallel = true;
      } else if (arrangement[i].parallel_to(arrangement[j])) {
        report.violations.push_back("lines " + label(i) + " and " + label(j) + " are parallel");
        any_parallel = true;
      }
    }
  }
  if (!any_parallel) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const Point t = arrangement.crossing(i, j);
        for (std::size_t k = j + 1; k < n; ++k)
          if (arrangement[k].contains(t))
            report.violations.push_back("lines " + label(i) + ", " + label(j) + ", " + label(k) +
                                        " share a point");
      }
  }
  report.generic = report.violations.empty();
  return report;
}

ArrangementType combinatorial_type(const LineArrangement& arrangement) {
  const auto report = is_generic(arrangement);
  if (!report.generic) throw Error(ErrorKind::NotGeneric, "arrangement is not generic: " + report.violations.front());
  const std::size_t n = arrangement.size();
  ArrangementType type;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<Rational, std::size_t>> along;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) along.emplace_back(arrangement[i].parameter(arrangement.crossing(i, j)), j);
    std::sort(along.begin(), along.end());
    std::vector<std::size_t> order;
    for (const auto& [t, j] : along) order.push_back(j);
    std::vector<std::size_t> reversed(order.rbegin(), order.rend());
    type.crossing_orders.push_back(std::min(order, reversed));

    std::string sides;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (j != i && k != i) sides += sign_char(arrangement[i].side(arrangement.crossing(j, k)));
    const auto first = sides.find_first_not_of('0');
    if (first != std::string::npos && sides[first] == '-')
      for (char& c : sides) c = c == '+' ? '-' : (c == '-' ? '+' : '0');
    type.side_signs.push_back(std::move(sides));
  }
  return type;
}

bool equivalent(const LineArrangement& l1, const LineArrangement& l2) {
  if (l1.size() != l2.size())
    throw Error(ErrorKind::SizeMismatch, "arrangements have different sizes");
  return combinatorial_type(l1) == combinatorial_type(l2);
}

Perturbation perturb_preserving_type(const LineArrangement& arrangement, const Rational& magnitude,
                                     std::uint64_t seed, unsigned max_attempts) {
  const ArrangementType reference = combinatorial_type(arrangement);
  if (magnitude.is_zero()) return {arrangement, 0};

  std::mt19937_64 rng(seed);
  // Offsets are k/1000 of the magnitude, k uniform in [-1000, 1000].
  auto offset = [&](const Rational& scale) {
    const long k = static_cast<long>(rng() % 2001) - 1000;
    return scale * Rational(k, 1000);
  };
  Rational scale = magnitude.abs();
  for (unsigned attempt = 0; attempt < max_attempts; ++attempt) {
    LineArrangement candidate;
    bool valid = true;
    for (const auto& l : arrangement.lines) {
      Rational a = l.a() + offset(scale);
      Rational b = l.b() + offset(scale);
      Rational c = l.c() + offset(scale);
      if (a.is_zero() && b.is_zero()) {
        valid = false;
        break;
      }
      candidate.lines.emplace_back(a, b, c);
    }
    if (valid && is_generic(candidate).generic && combinatorial_type(candidate) == reference)
      return {std::move(candidate), attempt};
    scale /= Rational(2);
  }
  throw Error(ErrorKind::RetryBudgetExceeded, "no type-preserving perturbation found");
}

}  // namespace stressmat
