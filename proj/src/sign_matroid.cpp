#include "stressmat/sign_matroid.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

#include "stressmat/error.hpp"
#include "stressmat/linalg.hpp"

namespace stressmat {

std::size_t covector_cap_from_env(std::size_t fallback) {
  const char* env = std::getenv("STRESSMATROID_MAX_CELLS");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw Error(ErrorKind::Parse, "STRESSMATROID_MAX_CELLS is not an integer");
  return static_cast<std::size_t>(v);
}

SignVector sign_vector(const Stress& s) {
  SignVector out(static_cast<std::size_t>(s.size()), '0');
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = sign_char(sign_of(s(i)));
  return out;
}

SignVector negated(const SignVector& x) {
  SignVector out = x;
  for (char& c : out) c = c == '+' ? '-' : (c == '-' ? '+' : '0');
  return out;
}

SignVector zero_vector(std::size_t length) { return SignVector(length, '0'); }

bool is_zero(const SignVector& x) {
  return std::all_of(x.begin(), x.end(), [](char c) { return c == '0'; });
}

SignVector canonical(const SignVector& x) {
  for (char c : x) {
    if (c == '+') return x;
    if (c == '-') return negated(x);
  }
  return x;
}

SignVector compose(const SignVector& x, const SignVector& y) {
  SignVector out = x;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i] == '0') out[i] = y[i];
  return out;
}

bool conformal_leq(const SignVector& x, const SignVector& y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != '0' && x[i] != y[i]) return false;
  return true;
}

std::vector<std::size_t> support(const SignVector& x) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != '0') out.push_back(i);
  return out;
}

std::vector<SignVector> StressMatroid::signed_circuits() const {
  std::vector<SignVector> out;
  for (const auto& c : circuits) {
    out.push_back(c);
    out.push_back(negated(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SignVector> StressMatroid::full_covectors() const {
  if (!covectors) throw Error(ErrorKind::CovectorsMissing, "matroid has no covector set");
  std::vector<SignVector> out{zero_vector(edge_count())};
  for (const auto& c : *covectors) {
    out.push_back(c);
    out.push_back(negated(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Incrementally maintained RREF of a set of vectors in Q^d.
class SpanBuilder {
 public:
  explicit SpanBuilder(Eigen::Index dim) : dim_(dim) {}

  // Reduces v against the current rows; returns the remainder.
  RatVector reduce(RatVector v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational& f = v(pivots_[r]);
      if (f.is_zero()) continue;
      const Rational factor = f;
      v -= factor * rows_[r];
    }
    return v;
  }

  bool try_add(const RatVector& v) {
    if (!insert(v)) return false;
    added_.push_back(v);
    return true;
  }

  void pop() {
    // Rows were reduced against the popped vector; rebuild from the originals.
    added_.pop_back();
    rows_.clear();
    pivots_.clear();
    for (const auto& v : added_) insert(v);
  }

  std::size_t size() const { return rows_.size(); }

  // The functional vanishing on the span (requires size == dim - 1).
  RatVector normal() const {
    RatMatrix m(static_cast<Eigen::Index>(rows_.size()), dim_);
    for (std::size_t r = 0; r < rows_.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = rows_[r].transpose();
    const RatMatrix k = nullspace(m);
    return k.row(0).transpose();
  }

 private:
  bool insert(const RatVector& v) {
    RatVector rem = reduce(v);
    Eigen::Index p = 0;
    while (p < dim_ && rem(p).is_zero()) ++p;
    if (p == dim_) return false;
    rem /= Rational(rem(p));
    for (auto& row : rows_) {
      if (!row(p).is_zero()) {
        const Rational factor = row(p);
        row -= factor * rem;
      }
    }
    rows_.push_back(std::move(rem));
    pivots_.push_back(p);
    return true;
  }

  Eigen::Index dim_;
  std::vector<RatVector> added_;
  std::vector<RatVector> rows_;
  std::vector<Eigen::Index> pivots_;
};

}  // namespace

std::vector<SignVector> circuits_from_basis(const StressBasis& b) {
  const Eigen::Index d = b.vectors.rows();
  const Eigen::Index e = b.vectors.cols();
  if (d == 0) return {};

  // One representative per class of parallel nonzero columns.
  std::vector<RatVector> reps;
  std::set<std::vector<std::string>> seen;
  for (Eigen::Index j = 0; j < e; ++j) {
    RatVector col = b.vectors.col(j);
    Eigen::Index p = 0;
    while (p < d && col(p).is_zero()) ++p;
    if (p == d) continue;
    col /= Rational(col(p));
    std::vector<std::string> key;
    for (Eigen::Index i = 0; i < d; ++i) key.push_back(col(i).str());
    if (seen.insert(key).second) reps.push_back(col);
  }

  std::set<SignVector> found;
  auto emit = [&](const RatVector& y) {
    const Stress v = (y.transpose() * b.vectors).transpose();
    found.insert(canonical(sign_vector(v)));
  };

  const auto target = static_cast<std::size_t>(d - 1);
  if (target == 0) {
    emit(RatVector::Ones(1));
  } else {
    SpanBuilder span(d);
    // Depth-first over (d-1)-subsets of column classes. A hyperplane is
    // emitted only from its greedy basis: an independent class that was
    // skipped must stay outside the final span.
    std::vector<std::size_t> skipped;
    auto in_span = [&](std::size_t j) { return span.reduce(reps[j]).isZero(); };
    auto dfs = [&](auto&& self, std::size_t start) -> void {
      if (span.size() == target) {
        emit(span.normal());
        return;
      }
      const std::size_t need = target - span.size();
      const std::size_t mark = skipped.size();
      for (std::size_t j = start; j + need <= reps.size(); ++j) {
        if (in_span(j)) continue;
        span.try_add(reps[j]);
        if (std::none_of(skipped.begin(), skipped.end(), in_span)) self(self, j + 1);
        span.pop();
        skipped.push_back(j);
      }
      skipped.resize(mark);
    };
    dfs(dfs, 0);
  }
  return {found.begin(), found.end()};
}

std::vector<SignVector> covectors_from_circuits(const std::vector<SignVector>& circuits,
                                                std::size_t length, std::size_t cap) {
  std::vector<SignVector> gens;
  for (const auto& c : circuits) {
    gens.push_back(c);
    gens.push_back(negated(c));
  }
  std::unordered_set<SignVector> all{zero_vector(length)};
  std::deque<SignVector> queue;
  auto add = [&](const SignVector& x) {
    if (!all.insert(x).second) return;
    if (all.size() > cap)
      throw Error(ErrorKind::CapExceeded,
                  "covector count exceeds cap " + std::to_string(cap));
    queue.push_back(x);
  };
  for (const auto& g : gens) add(g);
  while (!queue.empty()) {
    const SignVector x = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      if (conformal_leq(g, x)) continue;
      add(compose(x, g));
    }
  }
  std::vector<SignVector> out(all.begin(), all.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SignVector> all_sign_vectors(const StressBasis& b, std::size_t cap) {
  return covectors_from_circuits(circuits_from_basis(b), b.edge_count, cap);
}

namespace {

struct Inequality {
  std::vector<Rational> coeffs;
  bool strict;
};

// Divides by the leading absolute coefficient so duplicates compare equal.
void normalize(Inequality& q) {
  for (const auto& c : q.coeffs) {
    if (c.is_zero()) continue;
    const Rational scale = c.abs();
    for (auto& x : q.coeffs) x /= scale;
    return;
  }
}

// Feasibility of a homogeneous system {a.y > 0 | a.y >= 0} over Q.
bool fourier_motzkin_feasible(std::vector<Inequality> system, std::size_t vars) {
  for (std::size_t k = 0; k < vars; ++k) {
    std::vector<Inequality> pos, neg, next;
    for (auto& q : system) {
      const int s = q.coeffs[k].sign();
      if (s > 0) pos.push_back(std::move(q));
      else if (s < 0) neg.push_back(std::move(q));
      else next.push_back(std::move(q));
    }
    for (const auto& p : pos) {
      for (const auto& n : neg) {
        Inequality c{std::vector<Rational>(vars), p.strict || n.strict};
        const Rational wp = -n.coeffs[k];
        const Rational wn = p.coeffs[k];
        for (std::size_t i = 0; i < vars; ++i) c.coeffs[i] = wp * p.coeffs[i] + wn * n.coeffs[i];
        c.coeffs[k] = Rational(0);
        next.push_back(std::move(c));
      }
    }
    // Drop trivial rows, catch contradictions, dedupe.
    std::map<std::vector<std::string>, Inequality> unique;
    for (auto& q : next) {
      const bool all_zero =
          std::all_of(q.coeffs.begin(), q.coeffs.end(), [](const Rational& r) { return r.is_zero(); });
      if (all_zero) {
        if (q.strict) return false;
        continue;
      }
      normalize(q);
      std::vector<std::string> key;
      for (const auto& c : q.coeffs) key.push_back(c.str());
      auto [it, inserted] = unique.emplace(key, q);
      if (!inserted) it->second.strict = it->second.strict || q.strict;
    }
    system.clear();
    for (auto& [key, q] : unique) system.push_back(std::move(q));
  }
  return true;
}

}  // namespace

std::vector<SignVector> sign_vectors_oracle(const StressBasis& b) {
  const std::size_t e = b.edge_count;
  if (e > 10) throw Error(ErrorKind::TooLarge, "oracle limited to 10 edges");
  const auto d = static_cast<std::size_t>(b.vectors.rows());

  std::vector<SignVector> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < e; ++i) total *= 3;
  for (std::size_t code = 1; code < total; ++code) {
    SignVector x(e, '0');
    std::size_t c = code;
    for (std::size_t i = 0; i < e; ++i, c /= 3) x[i] = "0+-"[c % 3];

    std::vector<Inequality> system;
    for (std::size_t j = 0; j < e; ++j) {
      std::vector<Rational> col(d);
      for (std::size_t i = 0; i < d; ++i)
        col[i] = b.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      std::vector<Rational> neg(d);
      for (std::size_t i = 0; i < d; ++i) neg[i] = -col[i];
      if (x[j] == '+') system.push_back({col, true});
      else if (x[j] == '-') system.push_back({neg, true});
      else {
        system.push_back({col, false});
        system.push_back({neg, false});
      }
    }
    if (fourier_motzkin_feasible(std::move(system), d)) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

StressMatroid stress_matroid(const Framework& f, bool with_covectors, std::size_t cap) {
  StressMatroid m;
  for (EdgeIndex e = 0; e < f.edge_count(); ++e) m.edge_order.push_back(f.graph().edge_label(e));
  const StressBasis basis = stress_basis(f);
  m.circuits = circuits_from_basis(basis);
  if (with_covectors) {
    std::vector<SignVector> reps;
    for (const auto& x : covectors_from_circuits(m.circuits, f.edge_count(), cap))
      if (!is_zero(x) && canonical(x) == x) reps.push_back(x);
    m.covectors = std::move(reps);
  }
  return m;
}

std::vector<std::size_t> identity_correspondence(std::size_t n) {
  std::vector<std::size_t> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = i;
  return id;
}

bool matroid_equal(const StressMatroid& m1, const StressMatroid& m2,
                   const std::vector<std::size_t>& correspondence) {
  const std::size_t n = m1.edge_count();
  if (m2.edge_count() != n || correspondence.size() != n)
    throw Error(ErrorKind::ArityMismatch, "edge orders have different lengths");
  std::vector<bool> hit(n, false);
  for (std::size_t k : correspondence) {
    if (k >= n || hit[k]) throw Error(ErrorKind::ArityMismatch, "correspondence is not a bijection");
    hit[k] = true;
  }
  std::vector<SignVector> mapped;
  mapped.reserve(m1.circuits.size());
  for (const auto& c : m1.circuits) {
    SignVector t(n, '0');
    for (std::size_t k = 0; k < n; ++k) t[correspondence[k]] = c[k];
    mapped.push_back(canonical(t));
  }
  std::sort(mapped.begin(), mapped.end());
  return mapped == m2.circuits;
}

std::vector<EdgeIndex> degenerate_edge_signature(const StressMatroid& m) {
  std::vector<EdgeIndex> out;
  for (const auto& c : m.circuits) {
    const auto s = support(c);
    if (s.size() == 1) out.push_back(s.front());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FacePoset::FacePoset(std::vector<SignVector> elements) : elements_(std::move(elements)) {
  auto weight = [](const SignVector& x) { return support(x).size(); };
  std::sort(elements_.begin(), elements_.end(), [&](const SignVector& a, const SignVector& b) {
    const auto wa = weight(a), wb = weight(b);
    return wa != wb ? wa < wb : a < b;
  });
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);

  // Elements strictly below x have strictly smaller support, so they precede it.
  longest_.assign(elements_.size(), 1);
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (longest_[j] + 1 > longest_[i] && elements_[j] != elements_[i] &&
          conformal_leq(elements_[j], elements_[i]))
        longest_[i] = longest_[j] + 1;
    }
  }
}

std::size_t FacePoset::tile_dimension(const SignVector& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) throw Error(ErrorKind::NotInPoset, "sign vector '" + x + "' not in poset");
  return longest_[it->second] - 1;
}

FacePoset face_poset(const StressMatroid& m) { return FacePoset(m.full_covectors()); }

}  // namespace stressmat
