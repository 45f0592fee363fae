#include <doctest.h>

#include "stressmat/gadget.hpp"
#include "support.hpp"

using namespace stressmat;
using testkit::error_of;

namespace {

const GadgetLayout& gadget(std::size_t n) {
  static std::map<std::size_t, GadgetLayout> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gadget(testkit::arrangement(n))).first;
  return it->second;
}

Rational along(const Point& from, const Point& to, const Point& p) { return (p - from).dot(to - from); }

}  // namespace

TEST_SUITE("gadget") {
  TEST_CASE("rhombus for two lines") {
    // y = x and y = -x + 1
    const LineArrangement l = testkit::lines({{1, -1, 0}, {1, 1, -1}});
    const Rhombus r = build_rhombus(l);
    CHECK(r.A.y() == Rational(0));
    CHECK(r.C == Point(-r.A.x(), r.A.y()));
    CHECK(r.B.x() == Rational(0));
    CHECK(r.D == Point(r.B.x(), -r.B.y()));
    for (const auto& line : r.normalized.lines) {
      CHECK(segment_interior_crossing(line, Segment(r.A, r.B)));
      CHECK(segment_interior_crossing(line, Segment(r.A, r.D)));
    }
    const Point t = r.normalized.crossing(0, 1);
    const Sign s = orient(r.A, r.B, t);
    CHECK(s != Sign::Zero);
    CHECK(orient(r.B, r.C, t) == s);
    CHECK(orient(r.C, r.D, t) == s);
    CHECK(orient(r.D, r.A, t) == s);
    CHECK(error_of([] { (void)build_rhombus(testkit::lines({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}})); }) ==
          ErrorKind::NotGeneric);
  }

  TEST_CASE("counts and dimension") {
    for (std::size_t n : {2u, 3u, 4u}) {
      const GadgetLayout& g = gadget(n);
      CAPTURE(n);
      CHECK(g.framework.vertex_count() == 4 + 4 * n + n * (n - 1) / 2);
      CHECK(g.framework.edge_count() == n * n + 7 * n + 6);
      CHECK(stress_basis(g.framework).dimension() == n + 1);
      for (const auto& chain : g.line_of) CHECK(chain.size() == n);
      CHECK(degenerate_edges(g.framework).empty());
    }
    CHECK(gadget(3).framework.vertex_count() == 19);
    CHECK(gadget(3).framework.edge_count() == 36);
  }

  TEST_CASE("layout geometry") {
    const GadgetLayout& g = gadget(4);
    const Point A = g.position("A"), B = g.position("B"), D = g.position("D");
    for (std::size_t k = 0; k + 1 < g.n; ++k) {
      CHECK(along(A, B, g.position(role_name('A', k))) < along(A, B, g.position(role_name('A', k + 1))));
      // D points run the other way when read from A.
      CHECK(along(A, D, g.position(role_name('D', k))) > along(A, D, g.position(role_name('D', k + 1))));
    }
    for (std::size_t k = 0; k < g.n; ++k) {
      CHECK(g.position(role_name('B', k)) == reflect_vertical_axis(g.position(role_name('A', k)), Rational(0)));
      CHECK(g.position(role_name('C', k)) == reflect_vertical_axis(g.position(role_name('D', k)), Rational(0)));
    }
    std::vector<std::size_t> order = g.line_order;
    std::sort(order.begin(), order.end());
    CHECK(order == std::vector<std::size_t>{0, 1, 2, 3});
  }

  TEST_CASE("circuit classes") {
    for (std::size_t n : {2u, 3u}) {
      const GadgetLayout& g = gadget(n);
      const GadgetCircuits c = discover_circuits(g);
      CHECK(c.b.size() == n);
      CHECK(c.c.size() == n);
      CHECK(c.d.size() == n);
      const GadgetEdges e = g.edges();
      const auto sides = e.all_sides();
      for (EdgeIndex k : sides) CHECK(c.a[k] == c.a[sides.front()]);
      CHECK(c.a[e.diagonal_ac] != c.a[sides.front()]);
      CHECK(c.a[e.diagonal_bd] == c.a[e.diagonal_ac]);
      CHECK(sign_vector(c.a_stress) == c.a);
      // Support of (a) is solvable on its own, with the same signs.
      std::set<EdgeIndex> sup(sides.begin(), sides.end());
      sup.insert(e.diagonal_ac);
      sup.insert(e.diagonal_bd);
      const StressBasis local = solve_on_support(g.framework, sup);
      REQUIRE(local.dimension() == 1);
      CHECK(canonical(sign_vector(local.vector(0))) == canonical(c.a));
      for (const auto& s : c.d_stress) CHECK(check_equilibrium(g.framework, s));
      for (const auto& s : c.b_stress) CHECK(check_equilibrium(g.framework, s));
    }
  }

  TEST_CASE("verification passes on built gadgets") {
    for (std::size_t n : {2u, 3u}) {
      const GadgetReport r = verify_gadget(gadget(n), 25, 7);
      CAPTURE(n);
      for (const auto& c : r.checks) {
        CAPTURE(c.name);
        CAPTURE(c.detail);
        CHECK(c.passed);
      }
      CHECK(r.dimension == n + 1);
    }
  }

  TEST_CASE("moving C1 along CD breaks verification") {
    GadgetLayout bad = gadget(3);
    const VertexIndex c1 = bad.vertex("C1");
    const Point from = bad.framework.position(c1), to = bad.position("D");
    bad.framework = bad.framework.with_position(c1, from + Rational(1, 7) * (to - from));
    const GadgetReport r = verify_gadget(bad, 5, 1);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.find("dimension")->passed);
    CHECK_FALSE(r.find("circuit-classification")->passed);
    CHECK_FALSE(r.find("desargues-certificates")->passed);
  }

  TEST_CASE("extraction round trip") {
    for (std::size_t n : {2u, 3u, 4u}) {
      const LineArrangement l = testkit::arrangement(n);
      const GadgetLayout& g = gadget(n);
      const LineArrangement back = extract_arrangement(g);
      const LineArrangement normalized = l.transformed(g.frame.matrix, g.frame.translation);
      for (std::size_t k = 0; k < n; ++k) CHECK(back[k] == normalized[g.line_order[k]]);
      LineArrangement reordered;
      for (std::size_t k : g.line_order) reordered.lines.push_back(l[k]);
      CHECK(equivalent(back, reordered));
    }
    GadgetLayout bent = gadget(3);
    const EdgeIndex mid = bent.line_of[0][1];
    const VertexIndex v = bent.framework.graph().edge(mid).first;
    bent.framework = bent.framework.with_position(v, bent.framework.position(v) + Point(0, 1));
    CHECK(error_of([&] { (void)extract_arrangement(bent); }) == ErrorKind::ChainNotCollinear);
  }

  TEST_CASE("matroid invariance and discrimination") {
    const InvarianceReport r = matroid_invariance_harness(testkit::arrangement(3), 5, 11);
    CHECK(r.ok());
    CHECK(r.trials.size() == 5);
    for (const auto& t : r.trials) {
      CHECK(t.equivalent);
      CHECK(t.same_graph);
      CHECK(t.matroid_equal);
    }
    CHECK(matroid_invariance_harness(testkit::arrangement(3), 0, 1).ok());
    const LineArrangement slid = testkit::arrangement4_slid();
    const InvarianceReport d = matroid_invariance_harness(testkit::arrangement(4), 0, 1, Rational(1, 100), &slid);
    REQUIRE(d.discrimination);
    CHECK(d.discrimination->inequivalent);
    CHECK(d.discrimination->matroids_differ);
  }

  TEST_CASE("affine images give the same matroid") {
    testkit::Rng rng(61);
    const LineArrangement l = testkit::arrangement(3);
    const GadgetLayout& g = gadget(3);
    const StressMatroid m = stress_matroid(g.framework);
    CHECK(degenerate_edge_signature(m).empty());
    for (int trial = 0; trial < 3; ++trial) {
      const RatMatrix2 a = rng.invertible();
      const Point t = rng.point();
      CHECK(matroid_equal(m, stress_matroid(affine_transform(g.framework, a, t)), identity_correspondence(m.edge_count())));
      // Pull the frame back through the map so the rhombus is the same one.
      GadgetFrame frame = g.frame;
      frame.matrix = g.frame.matrix * inverse2(a);
      frame.translation = g.frame.translation - frame.matrix * t;
      const GadgetLayout h = build_gadget(l.transformed(a, t), &frame);
      const auto corr = gadget_correspondence(g, h);
      REQUIRE(corr);
      CHECK(matroid_equal(m, stress_matroid(h.framework), *corr));
      // The automatic frame may read the lines from their other ends, giving
      // a different graph; when the graphs agree the matroids must too.
      const GadgetLayout free = build_gadget(l.transformed(a, t));
      if (const auto c = gadget_correspondence(g, free)) CHECK(matroid_equal(m, stress_matroid(free.framework), *c));
    }
  }

  TEST_CASE("K4 replacement") {
    const Framework& f = gadget(2).framework;
    const Framework all = k4_replace_all(f, Side::Left);
    CHECK(all.edge_count() == 5 * f.edge_count());
    CHECK(all.vertex_count() == f.vertex_count() + 2 * f.edge_count());
    CHECK(parallel_incident_edges(all).empty());
    CHECK(is_stressable(all));
    for (EdgeIndex e : {EdgeIndex(0), EdgeIndex(12), EdgeIndex(23)}) {
      const Framework l = k4_replace(f, e, Side::Left), r = k4_replace(f, e, Side::Right);
      CHECK(matroid_equal(stress_matroid(l), stress_matroid(r), identity_correspondence(l.edge_count())));
    }
    // Two edges, four side combinations.
    std::vector<StressMatroid> ms;
    for (Side s1 : {Side::Left, Side::Right})
      for (Side s2 : {Side::Left, Side::Right}) {
        const Framework once = k4_replace(f, 0, s1);
        const auto [u, v] = f.graph().edge_label(5);
        const Framework twice = k4_replace(once, *once.graph().find_edge(u, v), s2);
        CHECK(is_stressable(twice));
        ms.push_back(stress_matroid(twice));
      }
    for (const auto& m : ms) CHECK(matroid_equal(ms.front(), m, identity_correspondence(m.edge_count())));
    const Framework squashed = f.with_position(f.graph().edge(0).second, f.position(f.graph().edge(0).first));
    CHECK(error_of([&] { (void)k4_replace(squashed, 0, Side::Left); }) == ErrorKind::DegenerateEdge);
  }

  TEST_CASE("line-only variant") {
    const LineArrangement l = testkit::arrangement(3);
    const GammaPrime g = gamma_prime(l);
    const LineArrangement lines = extract_arrangement(gadget(3));
    for (EdgeIndex e = 0; e < g.framework.edge_count(); ++e) {
      const auto [u, v] = g.framework.graph().edge(e);
      const Point p = g.framework.position(u), q = g.framework.position(v);
      CHECK(std::any_of(lines.lines.begin(), lines.lines.end(),
                        [&](const Line& line) { return line.contains(p) && line.contains(q); }));
    }
    CHECK(is_stressable(g.framework));
    CHECK_FALSE(g.matroid.circuits.empty());
    CHECK(error_of([] { (void)gamma_prime(testkit::lines({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}})); }) ==
          ErrorKind::NotGeneric);
  }

  TEST_CASE("harmonic quadruple") {
    const Point p1(0, 0), p2(2, 0), p3(Rational(1, 2), Rational(0));
    const HarmonicGadget h = harmonic_gadget(p1, p2, p3);
    CHECK(h.framework.position(h.quadruple[3]) == Point(-1, 0));
    CHECK(h.cross_ratio == Rational(-1));
    CHECK(h.matroids_differ);
    for (const auto& t : h.collinear_triples) {
      const Graph k3({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
      CHECK(is_stressable(Framework(k3, {h.framework.position(t[0]), h.framework.position(t[1]),
                                         h.framework.position(t[2])})));
    }
    CHECK(error_of([] { (void)harmonic_gadget(Point(0, 0), Point(2, 0), Point(1, 0)); }) == ErrorKind::SeedDegenerate);
    CHECK(error_of([] { (void)harmonic_gadget(Point(0, 0), Point(2, 0), Point(1, 1)); }) == ErrorKind::SeedDegenerate);
    CHECK(error_of([] { (void)harmonic_gadget(Point(0, 0), Point(0, 0), Point(1, 0)); }) == ErrorKind::SeedDegenerate);
  }

  TEST_CASE("harmonic conjugate for random seeds") {
    testkit::Rng rng(62);
    for (int trial = 0; trial < 10; ++trial) {
      const Point p1 = rng.point(), dir = rng.point();
      if (dir.isZero()) continue;
      const Rational t = rng.rational();
      if (t.is_zero() || t == Rational(1) || t == Rational(1, 2)) continue;
      const HarmonicGadget h = harmonic_gadget(p1, p1 + dir, p1 + t * dir);
      CHECK(h.cross_ratio == Rational(-1));
      CHECK(h.matroids_differ);
    }
  }
}
