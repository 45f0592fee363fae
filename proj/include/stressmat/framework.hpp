#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stressmat/geometry.hpp"

namespace stressmat {

using EdgeIndex = std::size_t;
using VertexIndex = std::size_t;

/// Simple graph with labeled vertices. Edge order is the coordinate order of
/// every stress and sign vector computed on it.
class Graph {
 public:
  Graph() = default;
  /// Throws InvalidArgument on loops, repeated edges, duplicate or unknown ids.
  Graph(std::vector<std::string> vertex_ids,
        const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<std::string>& vertex_ids() const { return ids_; }
  const std::string& id(VertexIndex v) const { return ids_[v]; }
  const std::pair<VertexIndex, VertexIndex>& edge(EdgeIndex e) const { return edges_[e]; }
  const std::vector<std::pair<VertexIndex, VertexIndex>>& edges() const { return edges_; }

  std::optional<VertexIndex> find_vertex(const std::string& id) const;
  VertexIndex vertex(const std::string& id) const;  // throws InvalidArgument
  std::optional<EdgeIndex> find_edge(VertexIndex u, VertexIndex v) const;
  std::optional<EdgeIndex> find_edge(const std::string& u, const std::string& v) const;

  /// Edges incident to v, in edge order.
  const std::vector<EdgeIndex>& incident(VertexIndex v) const { return incident_[v]; }
  VertexIndex other_end(EdgeIndex e, VertexIndex v) const {
    return edges_[e].first == v ? edges_[e].second : edges_[e].first;
  }

  std::pair<std::string, std::string> edge_label(EdgeIndex e) const {
    return {ids_[edges_[e].first], ids_[edges_[e].second]};
  }

 private:
  std::vector<std::string> ids_;
  std::vector<std::pair<VertexIndex, VertexIndex>> edges_;
  std::unordered_map<std::string, VertexIndex> index_;
  std::vector<std::vector<EdgeIndex>> incident_;
};

/// Values s(i,j) in the convention sum_j s(i,j) (p_i - p_j) = 0, one per edge.
using Stress = RatVector;

/// A graph together with a planar realization; coincident endpoints are
/// representable and reported by degenerate_edges().
class Framework {
 public:
  Framework() = default;
  /// positions[k] belongs to graph.id(k). Throws SizeMismatch.
  Framework(Graph graph, std::vector<Point> positions);

  const Graph& graph() const { return graph_; }
  const std::vector<Point>& positions() const { return positions_; }
  const Point& position(VertexIndex v) const { return positions_[v]; }
  const Point& position(const std::string& id) const { return positions_[graph_.vertex(id)]; }

  std::size_t vertex_count() const { return graph_.vertex_count(); }
  std::size_t edge_count() const { return graph_.edge_count(); }

  /// p_u - p_v for edge e = (u, v) as stored.
  Point edge_vector(EdgeIndex e) const;

  Framework with_position(VertexIndex v, Point p) const;

 private:
  Graph graph_;
  std::vector<Point> positions_;
};

/// (2|V|) x |E| matrix whose kernel is the space of equilibrium stresses.
/// Rows 2v, 2v+1 hold the x and y balance at vertex v.
RatMatrix equilibrium_matrix(const Framework& f);

/// Throws LengthMismatch.
bool check_equilibrium(const Framework& f, const Stress& s);

std::vector<EdgeIndex> degenerate_edges(const Framework& f);

/// Every position mapped to m p + t. Throws SingularMatrix.
Framework affine_transform(const Framework& f, const RatMatrix2& m, const Point& t);

struct RuleViolation {
  std::string vertex;
  std::string rule;  // "1a" or "1b"
  std::string detail;
};

/// Local sign rules at vertices recognized geometrically:
///  1a: degree 3, one edge strictly inside the convex angle spanned by the
///      other two; the outer edges share a sign, the inner edge has the
///      opposite sign.
///  1b: incident edges pair up into straight pass-throughs (degree 2, or
///      degree 4 as two crossing lines); opposite edges carry equal unit
///      stress, i.e. their forces cancel.
/// Throws LengthMismatch, NotEquilibrium.
std::vector<RuleViolation> local_sign_rules_check(const Framework& f, const Stress& s);

/// Star of a vertex as used by the sign rule for a pass-through vertex with
/// two extra edges on one side: collinear neighbours `left` and `right`, and
/// the extra edges e1 (nearer the left neighbour) and e2.
struct VertexStar {
  VertexIndex vertex;
  VertexIndex left, right;
  VertexIndex e1, e2;
};

/// Detects the star automatically (left/right chosen by vertex order).
/// Returns nullopt if the vertex does not have this shape.
std::optional<VertexStar> find_pass_through_star(const Framework& f, VertexIndex v);

/// SIGN(s(E1)) = SIGN(s2 - s1) = -SIGN(s(E2)) in unit-stress terms, where
/// s1, s2 are the unit stresses towards left and right.
/// Throws ShapeMismatch, LengthMismatch, NotEquilibrium.
bool small_lemma_check(const Framework& f, const Stress& s, const VertexStar& star);

/// True iff two nonzero vectors are parallel or antiparallel.
bool parallel(const Point& u, const Point& v);

}  // namespace stressmat
