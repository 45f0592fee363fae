#include "stressmat/framework.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "stressmat/error.hpp"

namespace stressmat {

Graph::Graph(std::vector<std::string> vertex_ids,
             const std::vector<std::pair<std::string, std::string>>& edges)
    : ids_(std::move(vertex_ids)) {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second)
      throw Error(ErrorKind::InvalidArgument, "duplicate vertex id '" + ids_[i] + "'");
  }
  incident_.resize(ids_.size());
  std::set<std::pair<VertexIndex, VertexIndex>> seen;
  for (const auto& [a, b] : edges) {
    const VertexIndex u = vertex(a);
    const VertexIndex v = vertex(b);
    if (u == v) throw Error(ErrorKind::InvalidArgument, "loop at vertex '" + a + "'");
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second)
      throw Error(ErrorKind::InvalidArgument, "repeated edge " + a + "-" + b);
    incident_[u].push_back(edges_.size());
    incident_[v].push_back(edges_.size());
    edges_.emplace_back(u, v);
  }
}

std::optional<VertexIndex> Graph::find_vertex(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexIndex Graph::vertex(const std::string& id) const {
  auto v = find_vertex(id);
  if (!v) throw Error(ErrorKind::InvalidArgument, "unknown vertex id '" + id + "'");
  return *v;
}

std::optional<EdgeIndex> Graph::find_edge(VertexIndex u, VertexIndex v) const {
  for (EdgeIndex e : incident_[u])
    if (other_end(e, u) == v) return e;
  return std::nullopt;
}

std::optional<EdgeIndex> Graph::find_edge(const std::string& u, const std::string& v) const {
  auto a = find_vertex(u);
  auto b = find_vertex(v);
  if (!a || !b) return std::nullopt;
  return find_edge(*a, *b);
}

Framework::Framework(Graph graph, std::vector<Point> positions)
    : graph_(std::move(graph)), positions_(std::move(positions)) {
  if (positions_.size() != graph_.vertex_count())
    throw Error(ErrorKind::SizeMismatch, "realization does not cover every vertex");
}

Point Framework::edge_vector(EdgeIndex e) const {
  const auto& [u, v] = graph_.edge(e);
  return positions_[u] - positions_[v];
}

Framework Framework::with_position(VertexIndex v, Point p) const {
  Framework copy = *this;
  copy.positions_.at(v) = std::move(p);
  return copy;
}

RatMatrix equilibrium_matrix(const Framework& f) {
  const auto rows = static_cast<Eigen::Index>(2 * f.vertex_count());
  const auto cols = static_cast<Eigen::Index>(f.edge_count());
  RatMatrix m = RatMatrix::Zero(rows, cols);
  for (EdgeIndex e = 0; e < f.edge_count(); ++e) {
    const auto& [u, v] = f.graph().edge(e);
    const Point d = f.edge_vector(e);
    const auto col = static_cast<Eigen::Index>(e);
    // Column holds p_v - p_u at u and p_u - p_v at v; the kernel is unchanged by the sign.
    m(static_cast<Eigen::Index>(2 * u), col) = -d.x();
    m(static_cast<Eigen::Index>(2 * u + 1), col) = -d.y();
    m(static_cast<Eigen::Index>(2 * v), col) = d.x();
    m(static_cast<Eigen::Index>(2 * v + 1), col) = d.y();
  }
  return m;
}

namespace {

void require_length(const Framework& f, const Stress& s) {
  if (static_cast<std::size_t>(s.size()) != f.edge_count())
    throw Error(ErrorKind::LengthMismatch, "stress length " + std::to_string(s.size()) +
                                               " does not match " +
                                               std::to_string(f.edge_count()) + " edges");
}

// Direction from v towards the other end of e.
Point outgoing(const Framework& f, EdgeIndex e, VertexIndex v) {
  return f.position(f.graph().other_end(e, v)) - f.position(v);
}

bool antiparallel(const Point& u, const Point& v) {
  return cross<Rational>(u, v).is_zero() && u.dot(v).sign() < 0;
}

// v strictly inside the convex cone spanned by the non-collinear a, b.
bool strictly_inside_cone(const Point& a, const Point& b, const Point& v) {
  const int ab = cross<Rational>(a, b).sign();
  if (ab == 0) return false;
  return cross<Rational>(a, v).sign() == ab && cross<Rational>(v, b).sign() == ab;
}

}  // namespace

bool parallel(const Point& u, const Point& v) { return cross<Rational>(u, v).is_zero(); }

bool check_equilibrium(const Framework& f, const Stress& s) {
  require_length(f, s);
  std::vector<Point> force(f.vertex_count(), Point(Rational(0), Rational(0)));
  for (EdgeIndex e = 0; e < f.edge_count(); ++e) {
    const auto ei = static_cast<Eigen::Index>(e);
    if (s(ei).is_zero()) continue;
    const auto& [u, v] = f.graph().edge(e);
    const Point d = s(ei) * f.edge_vector(e);
    force[u] += d;
    force[v] -= d;
  }
  return std::all_of(force.begin(), force.end(),
                     [](const Point& p) { return p.x().is_zero() && p.y().is_zero(); });
}

std::vector<EdgeIndex> degenerate_edges(const Framework& f) {
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < f.edge_count(); ++e) {
    const auto& [u, v] = f.graph().edge(e);
    if (f.position(u) == f.position(v)) out.push_back(e);
  }
  return out;
}

Framework affine_transform(const Framework& f, const RatMatrix2& m, const Point& t) {
  if (det2(m).is_zero()) throw Error(ErrorKind::SingularMatrix, "affine map is singular");
  std::vector<Point> moved;
  moved.reserve(f.vertex_count());
  for (const Point& p : f.positions()) moved.emplace_back(m * p + t);
  return Framework(f.graph(), std::move(moved));
}

std::vector<RuleViolation> local_sign_rules_check(const Framework& f, const Stress& s) {
  if (!check_equilibrium(f, s))
    throw Error(ErrorKind::NotEquilibrium, "stress is not in equilibrium");

  std::vector<RuleViolation> violations;
  const Graph& g = f.graph();
  for (VertexIndex v = 0; v < f.vertex_count(); ++v) {
    const auto& inc = g.incident(v);
    std::vector<Point> dirs;
    for (EdgeIndex e : inc) dirs.push_back(outgoing(f, e, v));
    if (std::any_of(dirs.begin(), dirs.end(),
                    [](const Point& d) { return d.x().is_zero() && d.y().is_zero(); }))
      continue;
    auto value = [&](std::size_t k) { return s(static_cast<Eigen::Index>(inc[k])); };

    if (inc.size() == 3) {
      for (std::size_t mid = 0; mid < 3; ++mid) {
        const std::size_t o1 = (mid + 1) % 3, o2 = (mid + 2) % 3;
        if (!strictly_inside_cone(dirs[o1], dirs[o2], dirs[mid])) continue;
        const int s1 = value(o1).sign(), s3 = value(o2).sign(), s2 = value(mid).sign();
        if (!(s1 == s3 && s1 == -s2)) {
          violations.push_back({g.id(v), "1a",
                                "outer edges " + g.id(g.other_end(inc[o1], v)) + ", " +
                                    g.id(g.other_end(inc[o2], v)) + " vs inner edge " +
                                    g.id(g.other_end(inc[mid], v))});
        }
      }
      continue;
    }

    // Pass-through vertices: every edge has an antiparallel partner.
    if (inc.size() != 2 && inc.size() != 4) continue;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<bool> used(inc.size(), false);
    for (std::size_t i = 0; i < inc.size(); ++i) {
      if (used[i]) continue;
      for (std::size_t j = i + 1; j < inc.size(); ++j) {
        if (!used[j] && antiparallel(dirs[i], dirs[j])) {
          used[i] = used[j] = true;
          pairs.emplace_back(i, j);
          break;
        }
      }
    }
    if (pairs.size() * 2 != inc.size()) continue;
    if (pairs.size() == 2 && parallel(dirs[pairs[0].first], dirs[pairs[1].first])) continue;
    for (const auto& [i, j] : pairs) {
      const Point net = value(i) * dirs[i] + value(j) * dirs[j];
      if (!net.x().is_zero() || !net.y().is_zero()) {
        violations.push_back({g.id(v), "1b",
                              "opposite edges to " + g.id(g.other_end(inc[i], v)) + " and " +
                                  g.id(g.other_end(inc[j], v)) + " carry unequal unit stress"});
      }
    }
  }
  return violations;
}

std::optional<VertexStar> find_pass_through_star(const Framework& f, VertexIndex v) {
  const Graph& g = f.graph();
  const auto& inc = g.incident(v);
  if (inc.size() != 4) return std::nullopt;
  std::array<Point, 4> dirs;
  for (std::size_t k = 0; k < 4; ++k) dirs[k] = outgoing(f, inc[k], v);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (!antiparallel(dirs[i], dirs[j])) continue;
      std::array<std::size_t, 2> rest{};
      std::size_t r = 0;
      for (std::size_t k = 0; k < 4; ++k)
        if (k != i && k != j) rest[r++] = k;
      const int side1 = cross<Rational>(dirs[j], dirs[rest[0]]).sign();
      const int side2 = cross<Rational>(dirs[j], dirs[rest[1]]).sign();
      if (side1 == 0 || side1 != side2) continue;

      VertexIndex a = g.other_end(inc[i], v), b = g.other_end(inc[j], v);
      Point da = dirs[i], db = dirs[j];
      if (b < a) {
        std::swap(a, b);
        std::swap(da, db);
      }
      // In the frame (towards right, normal towards the extra edges), E1 makes
      // the larger angle with the right direction.
      const int sigma = cross<Rational>(db, dirs[rest[0]]).sign();
      std::size_t e1 = rest[0], e2 = rest[1];
      if (sigma * cross<Rational>(dirs[e1], dirs[e2]).sign() > 0) std::swap(e1, e2);
      return VertexStar{v, a, b, g.other_end(inc[e1], v), g.other_end(inc[e2], v)};
    }
  }
  return std::nullopt;
}

bool small_lemma_check(const Framework& f, const Stress& s, const VertexStar& star) {
  const Graph& g = f.graph();
  const VertexIndex v = star.vertex;
  if (g.incident(v).size() != 4)
    throw Error(ErrorKind::ShapeMismatch, "vertex '" + g.id(v) + "' does not have degree 4");
  const auto el = g.find_edge(v, star.left);
  const auto er = g.find_edge(v, star.right);
  const auto e1 = g.find_edge(v, star.e1);
  const auto e2 = g.find_edge(v, star.e2);
  if (!el || !er || !e1 || !e2)
    throw Error(ErrorKind::ShapeMismatch, "star neighbours are not adjacent to '" + g.id(v) + "'");

  const Point dl = outgoing(f, *el, v), dr = outgoing(f, *er, v);
  const Point w1 = outgoing(f, *e1, v), w2 = outgoing(f, *e2, v);
  if (!antiparallel(dl, dr))
    throw Error(ErrorKind::ShapeMismatch, "left and right edges are not collinear and opposite");
  const int sigma = cross<Rational>(dr, w1).sign();
  if (sigma == 0 || cross<Rational>(dr, w2).sign() != sigma)
    throw Error(ErrorKind::ShapeMismatch, "extra edges are not strictly on one side");
  if (sigma * cross<Rational>(w1, w2).sign() >= 0)
    throw Error(ErrorKind::ShapeMismatch, "E1 is not the edge nearer the left neighbour");

  if (!check_equilibrium(f, s))
    throw Error(ErrorKind::NotEquilibrium, "stress is not in equilibrium");

  auto at = [&](EdgeIndex e) { return s(static_cast<Eigen::Index>(e)); };
  // unit stress = s * length; |dl| = ratio * |dr| with a rational ratio.
  const Rational ratio = -dl.dot(dr) / dr.dot(dr);
  const int diff = (at(*er) - ratio * at(*el)).sign();
  return at(*e1).sign() == diff && at(*e2).sign() == -diff;
}

}  // namespace stressmat
