#include <doctest.h>

#include <set>

#include "stressmat/linalg.hpp"
#include "stressmat/sign_matroid.hpp"
#include "support.hpp"

using namespace stressmat;
using testkit::error_of;

namespace {

StressBasis basis(std::initializer_list<std::initializer_list<long>> rows) {
  StressBasis b;
  const auto cols = static_cast<Eigen::Index>(rows.begin()->size());
  b.vectors = RatMatrix(static_cast<Eigen::Index>(rows.size()), cols);
  b.edge_count = static_cast<std::size_t>(cols);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (long v : row) b.vectors(r, c++) = Rational(v);
    ++r;
  }
  return b;
}

std::set<SignVector> as_set(const std::vector<SignVector>& v) { return {v.begin(), v.end()}; }

// Independent tile dimension: dimension of the subspace of stresses vanishing where x does.
std::size_t span_dimension(const StressBasis& b, const SignVector& x) {
  std::vector<Eigen::Index> zeros;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] == '0') zeros.push_back(static_cast<Eigen::Index>(k));
  RatMatrix restricted(b.vectors.rows(), static_cast<Eigen::Index>(zeros.size()));
  for (std::size_t k = 0; k < zeros.size(); ++k) restricted.col(static_cast<Eigen::Index>(k)) = b.vectors.col(zeros[k]);
  return b.dimension() - testkit::bareiss_rank(restricted);
}

}  // namespace

TEST_SUITE("sign-matroid") {
  TEST_CASE("sign vector helpers") {
    CHECK(canonical("-0+") == "+0-");
    CHECK(negated("+-0") == "-+0");
    CHECK(compose("+00", "-+-") == "++-");
    CHECK(conformal_leq("+00", "+-0"));
    CHECK_FALSE(conformal_leq("+00", "-+0"));
    CHECK(conformal_leq("000", "+-0"));
    CHECK(support("0+-0") == std::vector<std::size_t>{1, 2});
  }

  TEST_CASE("circuits of coordinate bases") {
    CHECK(circuits_from_basis(basis({{1, 1}})) == std::vector<SignVector>{"++"});
    CHECK(as_set(circuits_from_basis(basis({{1, 1, 0}, {0, 0, 1}}))) == std::set<SignVector>{"++0", "00+"});
  }

  TEST_CASE("interior-point K4 matroid") {
    const StressMatroid m = stress_matroid(testkit::k4_interior(), true);
    CHECK(m.circuits == std::vector<SignVector>{"+++---"});
    CHECK(m.signed_circuits() == std::vector<SignVector>{"+++---", "---+++"});
    CHECK(as_set(m.full_covectors()) == std::set<SignVector>{"+++---", "---+++", "000000"});
    const StressBasis b = stress_basis(testkit::k4_interior());
    CHECK(as_set(sign_vectors_oracle(b)) == std::set<SignVector>{"+++---", "---+++"});
    const FacePoset fp = face_poset(m);
    CHECK(fp.leq("000000", "+++---"));
    CHECK(fp.tile_dimension("+++---") == 1);
  }

  TEST_CASE("all sign vectors of small spaces") {
    const auto coords = basis({{1, 1, 0}, {0, 0, 1}});
    const std::set<SignVector> expected{"++0", "--0", "00+", "00-", "+++", "++-", "--+", "---", "000"};
    CHECK(as_set(all_sign_vectors(coords, 1000)) == expected);
    std::set<SignVector> nonzero = expected;
    nonzero.erase("000");
    CHECK(as_set(sign_vectors_oracle(coords)) == nonzero);
    const auto full = basis({{1, 0}, {0, 1}});
    CHECK(all_sign_vectors(full, 1000).size() == 9);
    CHECK(error_of([&] { (void)all_sign_vectors(full, 3); }) == ErrorKind::CapExceeded);
  }

  TEST_CASE("matroid comparison") {
    const StressMatroid interior = stress_matroid(testkit::k4_interior());
    const StressMatroid convex = stress_matroid(testkit::k4_convex());
    CHECK(matroid_equal(interior, interior, identity_correspondence(6)));
    CHECK_FALSE(matroid_equal(interior, convex, identity_correspondence(6)));
    CHECK(error_of([&] { (void)matroid_equal(interior, convex, {0, 1, 2}); }) == ErrorKind::ArityMismatch);
    CHECK(error_of([&] { (void)matroid_equal(interior, convex, {0, 0, 1, 2, 3, 4}); }) == ErrorKind::ArityMismatch);
    // Reordering edges through a permutation keeps equality.
    const std::vector<std::size_t> swap{1, 0, 2, 3, 4, 5};
    StressMatroid permuted = interior;
    for (auto& c : permuted.circuits) std::swap(c[0], c[1]);
    CHECK(matroid_equal(interior, permuted, swap));
  }

  TEST_CASE("degenerate edge signature") {
    const Framework k4 = testkit::k4_interior();
    for (EdgeIndex e = 0; e < k4.edge_count(); ++e) {
      const auto [u, v] = k4.graph().edge(e);
      const Framework contracted = k4.with_position(v, k4.position(u));
      CHECK(degenerate_edge_signature(stress_matroid(contracted)) == std::vector<EdgeIndex>{e});
    }
    CHECK(degenerate_edge_signature(StressMatroid{}).empty());
    CHECK(degenerate_edge_signature(stress_matroid(k4)).empty());
  }

  TEST_CASE("face poset of the plane") {
    const auto full = basis({{1, 0}, {0, 1}});
    StressMatroid m;
    m.edge_order = {{"a", "b"}, {"b", "c"}};
    m.circuits = circuits_from_basis(full);
    std::vector<SignVector> reps;
    for (const auto& x : all_sign_vectors(full, 100))
      if (!is_zero(x) && canonical(x) == x) reps.push_back(x);
    m.covectors = reps;
    const FacePoset fp = face_poset(m);
    CHECK(fp.leq("+0", "++"));
    CHECK_FALSE(fp.leq("+0", "-+"));
    CHECK(fp.tile_dimension("++") == 2);
    CHECK(fp.tile_dimension("00") == 0);
    CHECK(error_of([&] { (void)fp.tile_dimension("+++"); }) == ErrorKind::NotInPoset);
    CHECK(error_of([] { (void)face_poset(StressMatroid{}); }) == ErrorKind::CovectorsMissing);
  }

  TEST_CASE("oracle agreement on random bases") {
    testkit::Rng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
      const auto e = static_cast<std::size_t>(rng.integer(2, 7));
      const auto d = static_cast<std::size_t>(rng.integer(1, std::min<long>(3, static_cast<long>(e))));
      const StressBasis b = testkit::random_basis(rng, d, e);
      if (b.dimension() == 0) continue;
      const auto fast = all_sign_vectors(b, 100000);
      std::set<SignVector> nonzero(fast.begin(), fast.end());
      nonzero.erase(zero_vector(e));
      CHECK(nonzero == as_set(sign_vectors_oracle(b)));
      CHECK(circuits_from_basis(b) == testkit::oracle_circuits(b));
    }
  }

  TEST_CASE("covector set is closed under composition and negation") {
    testkit::Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
      const StressBasis b = testkit::random_basis(rng, 2, 6);
      const auto all = all_sign_vectors(b, 100000);
      const std::set<SignVector> s(all.begin(), all.end());
      for (const auto& x : all) {
        CHECK(s.count(negated(x)) == 1);
        for (const auto& y : all) CHECK(s.count(compose(x, y)) == 1);
      }
      CHECK(covectors_from_circuits(circuits_from_basis(b), 6, 100000) == all);
    }
  }

  TEST_CASE("tile dimension matches span dimension") {
    testkit::Rng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
      const StressBasis b = testkit::random_basis(rng, 2, 5);
      StressMatroid m;
      for (int k = 0; k < 5; ++k) m.edge_order.emplace_back(std::to_string(k), std::to_string(k + 10));
      m.circuits = circuits_from_basis(b);
      std::vector<SignVector> reps;
      for (const auto& x : all_sign_vectors(b, 100000))
        if (!is_zero(x) && canonical(x) == x) reps.push_back(x);
      m.covectors = reps;
      const FacePoset fp = face_poset(m);
      for (const auto& x : fp.elements()) CHECK(fp.tile_dimension(x) == span_dimension(b, x));
    }
  }

  TEST_CASE("oracle size limit") {
    const StressBasis big = basis({{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}});
    CHECK(error_of([&] { (void)sign_vectors_oracle(big); }) == ErrorKind::TooLarge);
  }

  TEST_CASE("cap from environment") {
    CHECK(covector_cap_from_env(77) >= 1);
  }
}
