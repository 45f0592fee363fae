#include "stressmat/gadget.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "stressmat/error.hpp"
#include "stressmat/linalg.hpp"

namespace stressmat {

Point GadgetFrame::corner(char letter) const {
  switch (letter) {
    case 'A': return Point(-half_width, Rational(0));
    case 'B': return Point(Rational(0), half_height);
    case 'C': return Point(half_width, Rational(0));
    case 'D': return Point(Rational(0), -half_height);
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, std::string("no rhombus corner '") + letter + "'");
}

std::string role_name(char letter, std::size_t line) { return letter + std::to_string(line + 1); }

std::string crossing_role(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return "T" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

namespace {

bool strictly_inside(const Point& A, const Point& B, const Point& C, const Point& D, const Point& p) {
  const Sign s = orient(A, B, p);
  return s != Sign::Zero && orient(B, C, p) == s && orient(C, D, p) == s && orient(D, A, p) == s;
}

bool admissible(const LineArrangement& lines, const GadgetFrame& frame) {
  const Point A = frame.corner('A'), B = frame.corner('B'), C = frame.corner('C'), D = frame.corner('D');
  const Segment ab(A, B), ad(A, D);
  for (const auto& l : lines.lines)
    if (!segment_interior_crossing(l, ab) || !segment_interior_crossing(l, ad)) return false;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      if (!strictly_inside(A, B, C, D, lines.crossing(i, j))) return false;
  return true;
}

Rhombus make_rhombus(LineArrangement normalized, GadgetFrame frame) {
  Rhombus r{frame, std::move(normalized), frame.corner('A'), frame.corner('B'), frame.corner('C'),
            frame.corner('D')};
  return r;
}

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Small nonzero-biased rational k/q with |k| <= 9, 1 <= q <= 7.
Rational random_rational(std::mt19937_64& rng) {
  const long k = static_cast<long>(rng() % 19) - 9;
  const long q = static_cast<long>(rng() % 7) + 1;
  return Rational(k, q);
}

}  // namespace

Rhombus build_rhombus(const LineArrangement& arrangement, const GadgetFrame* hint) {
  const auto gen = is_generic(arrangement);
  if (!gen.generic) throw Error(ErrorKind::NotGeneric, "arrangement is not generic: " + gen.violations.front());

  if (hint != nullptr) {
    LineArrangement normalized = arrangement.transformed(hint->matrix, hint->translation);
    if (admissible(normalized, *hint)) return make_rhombus(std::move(normalized), *hint);
  }

  // Shear y -> y + k x until no line is horizontal.
  RatMatrix2 shear = RatMatrix2::Identity();
  const Point origin(Rational(0), Rational(0));
  LineArrangement sheared;
  for (long step = 0;; ++step) {
    const long k = (step % 2 == 0) ? step / 2 : -(step + 1) / 2;
    shear << Rational(1), Rational(0), Rational(k), Rational(1);
    sheared = arrangement.transformed(shear, origin);
    if (std::none_of(sheared.lines.begin(), sheared.lines.end(), [](const Line& l) { return l.a().is_zero(); }))
      break;
  }

  // Crossing cluster: integer centre, integer radius bound.
  const std::size_t n = sheared.size();
  std::vector<Point> crossings;
  Point centroid(Rational(0), Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      crossings.push_back(sheared.crossing(i, j));
      centroid += crossings.back();
    }
  centroid /= Rational(static_cast<long>(crossings.size()));
  const Point centre(floor(centroid.x()), floor(centroid.y()));
  Rational radius(0);
  for (const auto& t : crossings) {
    radius = std::max(radius, (t.x() - centre.x()).abs());
    radius = std::max(radius, (t.y() - centre.y()).abs());
  }
  // Largest |dx/dy| of a line.
  Rational slope(0);
  for (const auto& l : sheared.lines) slope = std::max(slope, (l.b() / l.a()).abs());

  const Rational r = ceil(radius) + Rational(1);
  const Rational m = ceil(slope) + Rational(1);
  GadgetFrame frame;
  frame.matrix = shear;
  frame.half_height = Rational(4) * r;
  frame.half_width = Rational(16) * r * m;
  for (int attempt = 0; attempt < 32; ++attempt) {
    frame.translation = Point(-centre.x() - frame.half_width / Rational(2), -centre.y());
    LineArrangement normalized = sheared.transformed(RatMatrix2::Identity(), frame.translation);
    if (admissible(normalized, frame)) return make_rhombus(std::move(normalized), frame);
    frame.half_width *= Rational(2);
  }
  throw Error(ErrorKind::ConstructionFailed, "no admissible rhombus found");
}

std::vector<EdgeIndex> GadgetEdges::all_sides() const {
  std::vector<EdgeIndex> out;
  for (const auto& s : sides) out.insert(out.end(), s.begin(), s.end());
  return out;
}

VertexIndex GadgetLayout::vertex(const std::string& role) const {
  auto it = labels.find(role);
  if (it == labels.end()) throw Error(ErrorKind::InvalidArgument, "layout has no role '" + role + "'");
  return framework.graph().vertex(it->second);
}

EdgeIndex GadgetLayout::edge(const std::string& r1, const std::string& r2) const {
  auto e = framework.graph().find_edge(vertex(r1), vertex(r2));
  if (!e) throw Error(ErrorKind::InvalidArgument, "layout has no edge " + r1 + "-" + r2);
  return *e;
}

namespace {

// Role sequences of the four rhombus sides, in chain order.
std::array<std::vector<std::string>, 4> side_roles(std::size_t n) {
  std::array<std::vector<std::string>, 4> sides;
  sides[0].push_back("A");
  for (std::size_t k = 0; k < n; ++k) sides[0].push_back(role_name('A', k));
  sides[0].push_back("B");
  sides[1].push_back("B");
  for (std::size_t k = n; k-- > 0;) sides[1].push_back(role_name('B', k));
  sides[1].push_back("C");
  sides[2].push_back("C");
  for (std::size_t k = n; k-- > 0;) sides[2].push_back(role_name('C', k));
  sides[2].push_back("D");
  sides[3].push_back("D");
  for (std::size_t k = 0; k < n; ++k) sides[3].push_back(role_name('D', k));
  sides[3].push_back("A");
  return sides;
}

// Image of a role under the reflection across BD.
std::optional<std::string> mirror_role(const std::string& role) {
  if (role == "A") return "C";
  if (role == "C") return "A";
  if (role == "B" || role == "D") return role;
  if (role[0] == 'T') return std::nullopt;
  static const std::map<char, char> swap{{'A', 'B'}, {'B', 'A'}, {'C', 'D'}, {'D', 'C'}};
  return std::string(1, swap.at(role[0])) + role.substr(1);
}

}  // namespace

GadgetEdges GadgetLayout::edges() const {
  GadgetEdges out;
  const auto sides = side_roles(n);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t k = 0; k + 1 < sides[s].size(); ++k)
      out.sides[s].push_back(edge(sides[s][k], sides[s][k + 1]));
  out.diagonal_ac = edge("A", "C");
  out.diagonal_bd = edge("B", "D");
  for (std::size_t k = 0; k < n; ++k) {
    out.quads.push_back({edge(role_name('A', k), role_name('B', k)), edge(role_name('B', k), role_name('C', k)),
                         edge(role_name('C', k), role_name('D', k))});
  }
  out.chains = line_of;
  return out;
}

GadgetLayout build_gadget(const LineArrangement& arrangement, const GadgetFrame* hint) {
  const Rhombus rh = build_rhombus(arrangement, hint);
  const std::size_t n = arrangement.size();
  const Segment ab(rh.A, rh.B), ad(rh.A, rh.D);

  // Reindex lines by their crossing order along AB from A.
  std::vector<std::pair<Rational, std::size_t>> along;
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = *segment_interior_crossing(rh.normalized[i], ab);
    along.emplace_back((p - rh.A).dot(rh.B - rh.A), i);
  }
  std::sort(along.begin(), along.end());

  GadgetLayout layout;
  layout.n = n;
  layout.frame = rh.frame;
  LineArrangement lines;
  for (const auto& [t, i] : along) {
    layout.line_order.push_back(i);
    lines.lines.push_back(rh.normalized[i]);
  }

  std::vector<std::string> ids;
  std::vector<Point> positions;
  auto add = [&](std::string role, Point p) {
    layout.labels.emplace(role, role);
    ids.push_back(std::move(role));
    positions.push_back(std::move(p));
  };
  add("A", rh.A);
  add("B", rh.B);
  add("C", rh.C);
  add("D", rh.D);
  std::vector<Point> a_pts, d_pts;
  for (std::size_t k = 0; k < n; ++k) {
    a_pts.push_back(*segment_interior_crossing(lines[k], ab));
    d_pts.push_back(*segment_interior_crossing(lines[k], ad));
  }
  const Rational axis(0);
  for (std::size_t k = 0; k < n; ++k) add(role_name('A', k), a_pts[k]);
  for (std::size_t k = 0; k < n; ++k) add(role_name('B', k), reflect_vertical_axis(a_pts[k], axis));
  for (std::size_t k = 0; k < n; ++k) add(role_name('C', k), reflect_vertical_axis(d_pts[k], axis));
  for (std::size_t k = 0; k < n; ++k) add(role_name('D', k), d_pts[k]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) add(crossing_role(i, j), lines.crossing(i, j));

  auto pos = [&](const std::string& role) {
    return positions[static_cast<std::size_t>(std::find(ids.begin(), ids.end(), role) - ids.begin())];
  };

  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& side : side_roles(n)) {
    // Chain order must follow the geometry.
    for (std::size_t k = 0; k + 2 < side.size(); ++k) {
      const Point d1 = pos(side[k + 1]) - pos(side[k]);
      const Point d2 = pos(side[k + 2]) - pos(side[k + 1]);
      if (!cross<Rational>(d1, d2).is_zero() || d1.dot(d2).sign() <= 0)
        throw Error(ErrorKind::ConstructionFailed, "side points out of order at " + side[k + 1]);
    }
    for (std::size_t k = 0; k + 1 < side.size(); ++k) edges.emplace_back(side[k], side[k + 1]);
  }
  edges.emplace_back("A", "C");
  edges.emplace_back("B", "D");
  for (std::size_t k = 0; k < n; ++k) {
    edges.emplace_back(role_name('A', k), role_name('B', k));
    edges.emplace_back(role_name('B', k), role_name('C', k));
    edges.emplace_back(role_name('C', k), role_name('D', k));
  }
  std::vector<std::vector<std::string>> chain_roles(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point dir = d_pts[k] - a_pts[k];
    std::vector<std::pair<Rational, std::string>> pts;
    pts.emplace_back(Rational(0), role_name('A', k));
    pts.emplace_back(dir.dot(dir), role_name('D', k));
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) pts.emplace_back(dir.dot(lines.crossing(k, j) - a_pts[k]), crossing_role(k, j));
    std::sort(pts.begin(), pts.end());
    for (const auto& [t, role] : pts) chain_roles[k].push_back(role);
  }
  const std::size_t chain_start = edges.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m + 1 < chain_roles[k].size(); ++m)
      edges.emplace_back(chain_roles[k][m], chain_roles[k][m + 1]);

  layout.framework = Framework(Graph(ids, edges), std::move(positions));
  EdgeIndex next = chain_start;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<EdgeIndex> chain;
    for (std::size_t m = 0; m + 1 < chain_roles[k].size(); ++m) chain.push_back(next++);
    layout.line_of.push_back(std::move(chain));
  }
  if (!degenerate_edges(layout.framework).empty())
    throw Error(ErrorKind::ConstructionFailed, "gadget has a degenerate edge");
  return layout;
}

namespace {

std::vector<bool> support_mask(const SignVector& x) {
  std::vector<bool> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] != '0';
  return out;
}

bool covers(const std::vector<bool>& mask, const std::vector<EdgeIndex>& edges) {
  return std::all_of(edges.begin(), edges.end(), [&](EdgeIndex e) { return mask[e]; });
}

bool avoids(const std::vector<bool>& mask, const std::vector<EdgeIndex>& edges) {
  return std::none_of(edges.begin(), edges.end(), [&](EdgeIndex e) { return mask[e]; });
}

// The unique circuit satisfying pred, with a stress realizing it.
std::pair<SignVector, Stress> unique_circuit(const Framework& f, const std::vector<SignVector>& circuits,
                                             const std::function<bool(const std::vector<bool>&)>& pred,
                                             const std::string& name) {
  std::vector<SignVector> hits;
  for (const auto& c : circuits)
    if (pred(support_mask(c))) hits.push_back(c);
  if (hits.size() != 1)
    throw Error(ErrorKind::ClassificationFailed,
                "circuit class " + name + " has " + std::to_string(hits.size()) + " candidates");
  const auto sup = support(hits.front());
  const StressBasis local = solve_on_support(f, std::set<EdgeIndex>(sup.begin(), sup.end()));
  if (local.dimension() != 1)
    throw Error(ErrorKind::ClassificationFailed, "circuit " + name + " support is not one-dimensional");
  Stress s = local.vector(0);
  if (canonical(sign_vector(s)) != hits.front())
    throw Error(ErrorKind::ClassificationFailed, "circuit " + name + " sign pattern mismatch");
  if (sign_vector(s) != hits.front()) s = -s;
  return {hits.front(), s};
}

}  // namespace

GadgetCircuits discover_circuits(const GadgetLayout& layout) {
  return discover_circuits(layout, circuits_from_basis(stress_basis(layout.framework)));
}

GadgetCircuits discover_circuits(const GadgetLayout& layout, const std::vector<SignVector>& circuits) {
  const GadgetEdges ge = layout.edges();
  const std::size_t n = layout.n;
  const Framework& f = layout.framework;
  GadgetCircuits out;

  std::vector<EdgeIndex> rim = ge.all_sides();
  rim.push_back(ge.diagonal_ac);
  rim.push_back(ge.diagonal_bd);
  const std::set<EdgeIndex> rim_set(rim.begin(), rim.end());
  std::tie(out.a, out.a_stress) = unique_circuit(
      f, circuits,
      [&](const std::vector<bool>& m) {
        for (std::size_t e = 0; e < m.size(); ++e)
          if (m[e] != (rim_set.count(e) > 0)) return false;
        return true;
      },
      "a");

  auto quad = [&](std::size_t k) { return std::vector<EdgeIndex>(ge.quads[k].begin(), ge.quads[k].end()); };
  auto others_avoided = [&](const std::vector<bool>& m, std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      if (!avoids(m, ge.chains[k])) return false;
    }
    return true;
  };
  const std::vector<EdgeIndex> ac{ge.diagonal_ac}, bd{ge.diagonal_bd};

  for (std::size_t i = 0; i < n; ++i) {
    auto desargues = [&](const std::vector<EdgeIndex>& with, const std::vector<EdgeIndex>& without) {
      return [&, with, without, i](const std::vector<bool>& m) {
        if (!covers(m, quad(i)) || !covers(m, ge.chains[i]) || !covers(m, with) || !avoids(m, without))
          return false;
        for (std::size_t k = 0; k < n; ++k)
          if (k != i && !avoids(m, quad(k))) return false;
        return others_avoided(m, i, i);
      };
    };
    auto [c, cs] = unique_circuit(f, circuits, desargues(ac, bd), "c" + std::to_string(i + 1));
    auto [d, ds] = unique_circuit(f, circuits, desargues(bd, ac), "d" + std::to_string(i + 1));
    out.c.push_back(c);
    out.c_stress.push_back(cs);
    out.d.push_back(d);
    out.d_stress.push_back(ds);

    const std::size_t partner = (i + 1) % n;
    auto [b, bs] = unique_circuit(
        f, circuits,
        [&](const std::vector<bool>& m) {
          return covers(m, ge.chains[i]) && covers(m, ge.chains[partner]) && avoids(m, ac) && avoids(m, bd) &&
                 others_avoided(m, i, partner);
        },
        "b" + std::to_string(i + 1));
    out.b.push_back(b);
    out.b_stress.push_back(bs);
  }
  return out;
}

bool GadgetReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* GadgetReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

std::size_t rank_of(const std::vector<Stress>& vectors, std::size_t edges) {
  if (vectors.empty()) return 0;
  RatMatrix m(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(edges));
  for (std::size_t k = 0; k < vectors.size(); ++k) m.row(static_cast<Eigen::Index>(k)) = vectors[k].transpose();
  return static_cast<std::size_t>(exact_rank(m));
}

Point reflect_across(const Point& p, const Point& a, const Point& b) {
  const Point d = b - a;
  const Point r = p - a;
  const Point proj = (r.dot(d) / d.dot(d)) * d;
  return a + Rational(2) * proj - r;
}

}  // namespace

GadgetReport verify_gadget(const GadgetLayout& layout, std::size_t samples, std::uint64_t seed) {
  GadgetReport report;
  report.n = layout.n;
  const Framework& f = layout.framework;
  const std::size_t n = layout.n;
  const std::size_t e = f.edge_count();
  auto check = [&](std::string name, bool passed, std::string detail = {}) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };

  check("counts", f.vertex_count() == 4 + 4 * n + n * (n - 1) / 2 && e == n * n + 7 * n + 6,
        std::to_string(f.vertex_count()) + " vertices, " + std::to_string(e) + " edges");
  const auto degenerate = degenerate_edges(f);
  check("strict-realization", degenerate.empty(), std::to_string(degenerate.size()) + " degenerate edges");

  // Desargues certificates and the mirror symmetry across BD.
  {
    const Point B = layout.position("B"), D = layout.position("D");
    const Line bd = Line::through(B, D);
    const Line ac = Line::through(layout.position("A"), layout.position("C"));
    std::string failures;
    for (std::size_t k = 0; k < n; ++k) {
      const auto A_k = layout.position(role_name('A', k)), B_k = layout.position(role_name('B', k));
      const auto C_k = layout.position(role_name('C', k)), D_k = layout.position(role_name('D', k));
      const Line ad_line = Line::through(A_k, D_k), bc_line = Line::through(B_k, C_k);
      bool ok;
      if (ad_line == bc_line) {
        ok = false;
      } else {
        auto meet = intersect(ad_line, bc_line);
        ok = std::holds_alternative<Parallel>(meet) ? ad_line.parallel_to(bd) : bd.contains(std::get<Point>(meet));
      }
      ok = ok && Line::through(A_k, B_k).parallel_to(ac) && Line::through(C_k, D_k).parallel_to(ac);
      if (!ok) failures += " " + std::to_string(k + 1);
    }
    check("desargues-certificates", failures.empty(), failures.empty() ? "" : "lines:" + failures);

    std::string asym;
    for (const auto& [role, id] : layout.labels) {
      const auto image = mirror_role(role);
      if (!image) continue;
      if (reflect_across(f.position(f.graph().vertex(id)), B, D) != layout.position(*image)) asym += " " + role;
    }
    check("reflection-symmetry", asym.empty(), asym);
  }

  const StressBasis basis = stress_basis(f);
  report.dimension = basis.dimension();
  check("dimension", basis.dimension() == n + 1,
        "dim = " + std::to_string(basis.dimension()) + ", expected " + std::to_string(n + 1));
  check("rank-nullity", basis.dimension() + equilibrium_rank(f) == e);

  std::optional<GadgetCircuits> circuits;
  try {
    circuits = discover_circuits(layout, circuits_from_basis(basis));
    check("circuit-classification", true, "a, and " + std::to_string(n) + " each of b, c, d");
  } catch (const Error& err) {
    check("circuit-classification", false, err.what());
  }

  const GadgetEdges ge = layout.edges();
  if (circuits) {
    // Type (a): rhombus sides share a sign, diagonals carry the opposite one.
    const SignVector& a = circuits->a;
    const auto sides = ge.all_sides();
    const char side_sign = a[sides.front()];
    const bool sides_agree = std::all_of(sides.begin(), sides.end(), [&](EdgeIndex k) { return a[k] == side_sign; });
    const char diag_sign = side_sign == '+' ? '-' : '+';
    check("a-signs", sides_agree && a[ge.diagonal_ac] == diag_sign && a[ge.diagonal_bd] == diag_sign);

    std::vector<Stress> ad{circuits->a_stress}, ac{circuits->a_stress};
    ad.insert(ad.end(), circuits->d_stress.begin(), circuits->d_stress.end());
    ac.insert(ac.end(), circuits->c_stress.begin(), circuits->c_stress.end());
    const std::size_t rank_ad = rank_of(ad, e), rank_ac = rank_of(ac, e);
    check("basis-a-d", rank_ad == n + 1 && basis.dimension() == n + 1, "rank " + std::to_string(rank_ad));
    check("basis-a-c", rank_ac == n + 1 && basis.dimension() == n + 1, "rank " + std::to_string(rank_ac));

    // d_i runs along AB from A_i to B, c_i from A to A_i.
    bool spans_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < ge.sides[0].size(); ++k) {
        const bool on_d = circuits->d[i][ge.sides[0][k]] != '0';
        const bool on_c = circuits->c[i][ge.sides[0][k]] != '0';
        spans_ok = spans_ok && on_d == (k > i) && on_c == (k <= i);
      }
    }
    check("desargues-supports", spans_ok);
  }

  // Random elements of the stress space.
  auto rng = make_rng(seed);
  std::vector<Stress> sample;
  for (std::size_t s = 0; s < samples && basis.dimension() > 0; ++s) {
    std::vector<Rational> coeffs;
    bool nonzero = false;
    for (std::size_t k = 0; k < basis.dimension(); ++k) {
      coeffs.push_back(random_rational(rng));
      nonzero = nonzero || !coeffs.back().is_zero();
    }
    if (!nonzero) coeffs.front() = Rational(1);
    sample.push_back(basis.combine(coeffs));
  }

  {
    std::size_t violations = 0;
    std::string first;
    std::vector<Stress> probes = sample;
    for (std::size_t k = 0; k < basis.dimension(); ++k) probes.push_back(basis.vector(k));
    for (const auto& s : probes) {
      const auto v = local_sign_rules_check(f, s);
      violations += v.size();
      if (!v.empty() && first.empty()) first = v.front().vertex + " rule " + v.front().rule;
    }
    check("local-sign-rules", violations == 0, std::to_string(violations) + " violations " + first);
  }

  {
    std::size_t failures = 0, stars = 0;
    std::string missing;
    for (char letter : {'A', 'B', 'C', 'D'}) {
      for (std::size_t k = 0; k < n; ++k) {
        const auto star = find_pass_through_star(f, layout.vertex(role_name(letter, k)));
        if (!star) {
          missing += " " + role_name(letter, k);
          continue;
        }
        ++stars;
        for (const auto& s : sample)
          if (!small_lemma_check(f, s, *star)) ++failures;
      }
    }
    check("small-lemma", failures == 0 && missing.empty(),
          std::to_string(stars) + " vertices, " + std::to_string(failures) + " failures" +
              (missing.empty() ? "" : ", no star at" + missing));
  }

  {
    // Ratio of mirrored side edges is one constant along AB/BC and one along DA/CD.
    bool ok = true;
    auto mirrored = [&](const std::vector<EdgeIndex>& side) {
      std::vector<std::pair<EdgeIndex, EdgeIndex>> pairs;
      for (EdgeIndex k : side) {
        const auto [u, v] = f.graph().edge_label(k);
        auto role_of = [&](const std::string& id) {
          for (const auto& [role, vid] : layout.labels)
            if (vid == id) return role;
          return std::string();
        };
        const auto mu = mirror_role(role_of(u)), mv = mirror_role(role_of(v));
        if (!mu || !mv) continue;
        pairs.emplace_back(k, layout.edge(*mu, *mv));
      }
      return pairs;
    };
    const auto ab_pairs = mirrored(ge.sides[0]);
    const auto da_pairs = mirrored(ge.sides[3]);
    for (const auto& s : sample) {
      for (const auto* pairs : {&ab_pairs, &da_pairs}) {
        std::optional<Rational> ratio;
        for (const auto& [x, y] : *pairs) {
          const Rational& sx = s(static_cast<Eigen::Index>(x));
          const Rational& sy = s(static_cast<Eigen::Index>(y));
          if (sx.is_zero() || sy.is_zero()) continue;
          const Rational r = sx / sy;
          if (ratio && *ratio != r) ok = false;
          ratio = r;
        }
      }
    }
    check("ratio-invariance", ok && ab_pairs.size() == n + 1 && da_pairs.size() == n + 1,
          std::to_string(sample.size()) + " samples");
  }

  {
    // A stress vanishing on one segment of quadrilateral i vanishes on all of it.
    bool ok = true;
    std::string bad;
    for (std::size_t i = 0; i < n && basis.dimension() > 0; ++i) {
      std::vector<EdgeIndex> ring(ge.quads[i].begin(), ge.quads[i].end());
      ring.insert(ring.end(), ge.chains[i].begin(), ge.chains[i].end());
      const std::vector<EdgeIndex> probes{ge.quads[i][0], ge.quads[i][1], ge.quads[i][2], ge.chains[i].front()};
      for (EdgeIndex q : probes) {
        std::set<EdgeIndex> keep;
        for (EdgeIndex k = 0; k < e; ++k)
          if (k != q) keep.insert(k);
        const StressBasis sub = solve_on_support(f, keep);
        for (std::size_t r = 0; r < sub.dimension(); ++r)
          for (EdgeIndex k : ring)
            if (!sub.vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)).is_zero()) {
              ok = false;
              bad = "quadrilateral " + std::to_string(i + 1);
            }
      }
    }
    check("quadrilateral-vanishing", ok, bad);

    std::set<EdgeIndex> off_ab;
    for (EdgeIndex k = 0; k < e; ++k)
      if (std::find(ge.sides[0].begin(), ge.sides[0].end(), k) == ge.sides[0].end()) off_ab.insert(k);
    check("ab-vanishing", solve_on_support(f, off_ab).dimension() == 0);
  }
  return report;
}

LineArrangement extract_arrangement(const GadgetLayout& layout) {
  const Framework& f = layout.framework;
  LineArrangement out;
  for (std::size_t k = 0; k < layout.n; ++k) {
    const Point a = layout.position(role_name('A', k));
    const Point d = layout.position(role_name('D', k));
    if (a == d) throw Error(ErrorKind::ChainNotCollinear, "chain " + std::to_string(k + 1) + " collapses");
    for (EdgeIndex edge : layout.line_of[k]) {
      const auto& [u, v] = f.graph().edge(edge);
      if (orient(a, d, f.position(u)) != Sign::Zero || orient(a, d, f.position(v)) != Sign::Zero)
        throw Error(ErrorKind::ChainNotCollinear, "chain " + std::to_string(k + 1) + " is not straight");
    }
    out.lines.push_back(Line::through(a, d));
  }
  return out;
}

namespace {

// Role in g2 played by the same input line as `role` in g1.
std::optional<std::string> transfer_role(const std::string& role, const GadgetLayout& g1, const GadgetLayout& g2) {
  if (role.size() == 1) return role;
  std::vector<std::size_t> inverse(g2.n);
  for (std::size_t k = 0; k < g2.n; ++k) inverse[g2.line_order[k]] = k;
  auto map_index = [&](const std::string& digits) -> std::optional<std::size_t> {
    const std::size_t k = std::stoul(digits) - 1;
    if (k >= g1.n) return std::nullopt;
    return inverse[g1.line_order[k]];
  };
  if (role[0] == 'T') {
    const auto us = role.find('_');
    auto i = map_index(role.substr(1, us - 1));
    auto j = map_index(role.substr(us + 1));
    if (!i || !j) return std::nullopt;
    return crossing_role(*i, *j);
  }
  auto k = map_index(role.substr(1));
  if (!k) return std::nullopt;
  return role_name(role[0], *k);
}

std::map<std::string, std::string> roles_by_id(const GadgetLayout& g) {
  std::map<std::string, std::string> out;
  for (const auto& [role, id] : g.labels) out.emplace(id, role);
  return out;
}

}  // namespace

std::optional<std::vector<std::size_t>> gadget_correspondence(const GadgetLayout& g1, const GadgetLayout& g2) {
  if (g1.n != g2.n || g1.framework.edge_count() != g2.framework.edge_count()) return std::nullopt;
  const auto roles1 = roles_by_id(g1);
  std::vector<std::size_t> corr;
  std::set<std::size_t> used;
  for (EdgeIndex k = 0; k < g1.framework.edge_count(); ++k) {
    const auto [u, v] = g1.framework.graph().edge_label(k);
    auto ru = transfer_role(roles1.at(u), g1, g2);
    auto rv = transfer_role(roles1.at(v), g1, g2);
    if (!ru || !rv || !g2.labels.count(*ru) || !g2.labels.count(*rv)) return std::nullopt;
    auto e2 = g2.framework.graph().find_edge(g2.labels.at(*ru), g2.labels.at(*rv));
    if (!e2 || !used.insert(*e2).second) return std::nullopt;
    corr.push_back(*e2);
  }
  return corr;
}

bool InvarianceReport::ok() const {
  const bool trials_ok = std::all_of(trials.begin(), trials.end(), [](const InvarianceTrial& t) {
    return t.equivalent && t.same_graph && t.matroid_equal;
  });
  const bool disc_ok = !discrimination || (discrimination->inequivalent && discrimination->matroids_differ);
  return trials_ok && disc_ok;
}

InvarianceReport matroid_invariance_harness(const LineArrangement& arrangement, std::size_t trials,
                                            std::uint64_t seed, const Rational& magnitude,
                                            const LineArrangement* against) {
  InvarianceReport report;
  report.n = arrangement.size();
  const GadgetLayout reference = build_gadget(arrangement);
  const StressMatroid m_ref = stress_matroid(reference.framework);
  report.reference_circuits = m_ref.circuits.size();

  for (std::size_t t = 0; t < trials; ++t) {
    InvarianceTrial trial;
    trial.index = t;
    trial.seed = seed + t;
    const Perturbation p = perturb_preserving_type(arrangement, magnitude, trial.seed);
    trial.halvings = p.halvings;
    trial.equivalent = equivalent(arrangement, p.arrangement);
    const GadgetLayout g = build_gadget(p.arrangement, &reference.frame);
    const auto corr = gadget_correspondence(reference, g);
    trial.same_graph = corr.has_value();
    if (corr) trial.matroid_equal = matroid_equal(m_ref, stress_matroid(g.framework), *corr);
    report.trials.push_back(trial);
  }

  if (against != nullptr) {
    if (against->size() != arrangement.size())
      throw Error(ErrorKind::SizeMismatch, "comparison arrangement has a different size");
    Discrimination disc;
    disc.inequivalent = !equivalent(arrangement, *against);
    const GadgetLayout other = build_gadget(*against, &reference.frame);
    if (auto corr = gadget_correspondence(reference, other)) {
      disc.method = "same-graph";
      disc.matroids_differ = !matroid_equal(m_ref, stress_matroid(other.framework), *corr);
    } else {
      // Realize the reference graph with the other gadget's vertex positions.
      disc.method = "transplant";
      const auto roles = roles_by_id(reference);
      std::vector<Point> positions;
      for (const auto& id : reference.framework.graph().vertex_ids()) {
        const auto role = transfer_role(roles.at(id), reference, other);
        positions.push_back(other.position(*role));
      }
      const Framework moved(reference.framework.graph(), std::move(positions));
      disc.matroids_differ =
          !matroid_equal(m_ref, stress_matroid(moved), identity_correspondence(moved.edge_count()));
    }
    report.discrimination = disc;
  }
  return report;
}

namespace {

std::vector<Point> incident_directions(const Framework& f, VertexIndex v) {
  std::vector<Point> out;
  for (EdgeIndex e : f.graph().incident(v)) out.push_back(f.position(f.graph().other_end(e, v)) - f.position(v));
  return out;
}

}  // namespace

std::vector<std::array<std::size_t, 3>> parallel_incident_edges(const Framework& f) {
  std::vector<std::array<std::size_t, 3>> out;
  for (VertexIndex v = 0; v < f.vertex_count(); ++v) {
    const auto& inc = f.graph().incident(v);
    const auto dirs = incident_directions(f, v);
    for (std::size_t i = 0; i < dirs.size(); ++i)
      for (std::size_t j = i + 1; j < dirs.size(); ++j)
        if (parallel(dirs[i], dirs[j])) out.push_back({v, inc[i], inc[j]});
  }
  return out;
}

Framework k4_replace(const Framework& f, EdgeIndex edge, Side side, unsigned max_attempts) {
  if (edge >= f.edge_count()) throw Error(ErrorKind::InvalidArgument, "edge index out of range");
  const Graph& g = f.graph();
  const auto [i, j] = g.edge(edge);
  const Point pi = f.position(i), pj = f.position(j);
  if (pi == pj) throw Error(ErrorKind::DegenerateEdge, "cannot replace a degenerate edge");

  const Point d = pj - pi;
  const Rational sigma = side == Side::Left ? Rational(1) : Rational(-1);
  const Point normal = sigma * Point(-d.y(), d.x());

  const std::string ui = g.id(i), uj = g.id(j);
  const std::string id_u = "k4:" + ui + "-" + uj + ":u";
  const std::string id_w = "k4:" + ui + "-" + uj + ":w";

  std::vector<std::pair<std::string, std::string>> edges;
  for (EdgeIndex k = 0; k < f.edge_count(); ++k)
    if (k != edge) edges.push_back(g.edge_label(k));
  edges.emplace_back(ui, id_u);
  edges.emplace_back(ui, id_w);
  edges.emplace_back(uj, id_u);
  edges.emplace_back(uj, id_w);
  edges.emplace_back(id_u, id_w);
  std::vector<std::string> ids = g.vertex_ids();
  ids.push_back(id_u);
  ids.push_back(id_w);
  const Graph replaced(ids, edges);

  // Offsets from a fixed sequence; the quadrilateral i, j, w, u must be convex.
  std::mt19937_64 rng(0x4b34ULL + edge);
  auto jitter = [&] { return Rational(static_cast<long>(rng() % 41) - 20, 300); };
  for (unsigned attempt = 0; attempt < max_attempts; ++attempt) {
    const Point u = pi + (Rational(1, 3) + jitter()) * d + (Rational(1, 5) + jitter()) * normal;
    const Point w = pi + (Rational(2, 3) + jitter()) * d + (Rational(1, 5) + jitter()) * normal;
    const Sign s = orient(pi, pj, w);
    if (s == Sign::Zero || orient(pj, w, u) != s || orient(w, u, pi) != s || orient(u, pi, pj) != s) continue;
    if (std::any_of(f.positions().begin(), f.positions().end(),
                    [&](const Point& p) { return p == u || p == w; }))
      continue;
    std::vector<Point> positions = f.positions();
    positions.push_back(u);
    positions.push_back(w);
    Framework candidate(replaced, std::move(positions));
    const VertexIndex vu = ids.size() - 2, vw = ids.size() - 1;
    bool clean = true;
    for (VertexIndex v : {i, j, vu, vw}) {
      // Only pairs involving the new edges count; older pairs are not ours to fix.
      const auto& inc = candidate.graph().incident(v);
      const auto dirs = incident_directions(candidate, v);
      for (std::size_t a = 0; a < dirs.size() && clean; ++a)
        for (std::size_t b = a + 1; b < dirs.size() && clean; ++b) {
          const bool involves_new = inc[a] + 5 >= candidate.edge_count() || inc[b] + 5 >= candidate.edge_count();
          if (involves_new && parallel(dirs[a], dirs[b])) clean = false;
        }
    }
    if (!clean) continue;
    return candidate;
  }
  throw Error(ErrorKind::PlacementFailed, "no admissible K4 placement for edge " + ui + "-" + uj);
}

Framework k4_replace_all(const Framework& f, Side side) {
  Framework out = f;
  for (EdgeIndex k = 0; k < f.edge_count(); ++k) {
    const auto [u, v] = f.graph().edge_label(k);
    out = k4_replace(out, *out.graph().find_edge(u, v), side);
  }
  return out;
}

GammaPrime gamma_prime(const LineArrangement& arrangement) {
  const GadgetLayout g = build_gadget(arrangement);
  const std::size_t n = g.n;
  std::vector<std::string> ids;
  std::vector<Point> positions;
  for (char letter : {'A', 'D'})
    for (std::size_t k = 0; k < n; ++k) {
      ids.push_back(role_name(letter, k));
      positions.push_back(g.position(ids.back()));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ids.push_back(crossing_role(i, j));
      positions.push_back(g.position(ids.back()));
    }
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t k = 0; k < n; ++k) {
    for (EdgeIndex e : g.line_of[k]) edges.push_back(g.framework.graph().edge_label(e));
    edges.emplace_back(role_name('A', k), role_name('D', k));
  }
  Framework f(Graph(ids, edges), std::move(positions));
  StressMatroid m = stress_matroid(f);
  return {std::move(f), std::move(m)};
}

HarmonicGadget harmonic_gadget(const Point& p1, const Point& p2, const Point& p3) {
  if (p1 == p2 || p1 == p3 || p2 == p3) throw Error(ErrorKind::SeedDegenerate, "seed points must be distinct");
  if (orient(p1, p2, p3) != Sign::Zero) throw Error(ErrorKind::SeedDegenerate, "seed points must be collinear");
  const Line base = Line::through(p1, p2);
  const Point dir = p2 - p1;
  const Point perp(-dir.y(), dir.x());

  // Complete quadrangle: R off the line, S on R p3; U = p1S ^ Rp2, V = p2S ^ Rp1.
  for (long k = 0; k < 16; ++k) {
    const Point R = p1 + perp + Rational(k, 3) * dir;
    const Point S = (R + p3) / Rational(2);
    const auto u = intersect(Line::through(p1, S), Line::through(R, p2));
    const auto v = intersect(Line::through(p2, S), Line::through(R, p1));
    if (!std::holds_alternative<Point>(u) || !std::holds_alternative<Point>(v)) continue;
    const Point U = std::get<Point>(u), V = std::get<Point>(v);
    if (U == V) continue;
    const Line uv = Line::through(U, V);
    if (uv == base) continue;
    const auto q = intersect(uv, base);
    if (!std::holds_alternative<Point>(q))
      throw Error(ErrorKind::SeedDegenerate, "third seed is the midpoint; its harmonic conjugate is at infinity");
    const Point p4 = std::get<Point>(q);

    const std::vector<std::string> ids{"1", "2", "3", "4", "R", "S", "U", "V"};
    const std::vector<Point> pts{p1, p2, p3, p4, R, S, U, V};
    bool distinct = true;
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b) distinct = distinct && pts[a] != pts[b];
    if (!distinct) continue;

    HarmonicGadget out;
    std::vector<std::pair<std::string, std::string>> edges;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    auto add_edge = [&](std::size_t a, std::size_t b) {
      if (seen.emplace(a, b).second) edges.emplace_back(ids[a], ids[b]);
    };
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b)
        for (std::size_t c = b + 1; c < pts.size(); ++c)
          if (orient(pts[a], pts[b], pts[c]) == Sign::Zero) {
            out.collinear_triples.push_back({a, b, c});
            add_edge(a, b);
            add_edge(b, c);
            add_edge(a, c);
          }
    const Graph graph(ids, edges);
    out.framework = Framework(graph, pts);
    std::vector<Point> line_pts;
    for (std::size_t a = 0; a < pts.size(); ++a) line_pts.emplace_back(Rational(static_cast<long>(a)), Rational(0));
    out.collinear = Framework(graph, std::move(line_pts));
    out.quadruple = {0, 1, 2, 3};
    out.cross_ratio = cross_ratio(p1, p2, p3, p4);
    // The stress dimension is the rank of the oriented matroid; compare
    // circuit sets only when the ranks agree.
    const StressBasis b1 = stress_basis(out.framework), b2 = stress_basis(out.collinear);
    out.matroids_differ = b1.dimension() != b2.dimension() ||
                          circuits_from_basis(b1) != circuits_from_basis(b2);
    return out;
  }
  throw Error(ErrorKind::SeedDegenerate, "no complete quadrangle found for these seeds");
}

}  // namespace stressmat
