#include "stressmat/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "stressmat/error.hpp"

namespace stressmat::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) parse_error(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) parse_error(std::string("missing field \"") + key + "\"");
  return *it;
}

const Json& array_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) parse_error(std::string("field \"") + key + "\" must be an array");
  return v;
}

std::string string_of(const Json& j, const char* what) {
  if (!j.is_string()) parse_error(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::size_t index_of(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    parse_error(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

Json edge_pairs(const Graph& g) {
  Json out = Json::array();
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const auto [u, v] = g.edge_label(e);
    out.push_back(Json::array({u, v}));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> edge_pairs_from(const Json& arr) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2) parse_error("an edge must be a pair of vertex ids");
    out.emplace_back(string_of(e[0], "vertex id"), string_of(e[1], "vertex id"));
  }
  return out;
}

Json point_to_json(const Point& p) { return Json::array({to_json(p.x()), to_json(p.y())}); }

Point point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) parse_error("a point must be a pair of rationals");
  return Point(rational_from_json(j[0]), rational_from_json(j[1]));
}

SignVector sign_string(const Json& j, std::size_t length) {
  const std::string s = string_of(j, "sign vector");
  if (s.size() != length) throw Error(ErrorKind::LengthMismatch, "sign vector \"" + s + "\" has the wrong length");
  if (s.find_first_not_of("+-0") != std::string::npos) parse_error("sign vector \"" + s + "\" holds a bad symbol");
  return s;
}

std::vector<SignVector> canonical_set(const Json& arr, std::size_t length) {
  if (!arr.is_array()) parse_error("sign vectors must be an array");
  std::set<SignVector> out;
  for (const auto& x : arr) {
    SignVector s = sign_string(x, length);
    if (is_zero(s)) parse_error("zero sign vector in a set of nonzero representatives");
    out.insert(canonical(s));
  }
  return {out.begin(), out.end()};
}

}  // namespace

Json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  parse_error("rational values must be \"num/den\" strings, got " + j.dump());
}

Json to_json(const Framework& f) {
  Json vertices = Json::array();
  for (VertexIndex v = 0; v < f.vertex_count(); ++v)
    vertices.push_back(
        {{"id", f.graph().id(v)}, {"x", to_json(f.position(v).x())}, {"y", to_json(f.position(v).y())}});
  Json out;
  out["vertices"] = std::move(vertices);
  out["edges"] = edge_pairs(f.graph());
  return out;
}

Framework framework_from_json(const Json& j) {
  std::vector<std::string> ids;
  std::vector<Point> positions;
  for (const auto& v : array_field(j, "vertices")) {
    ids.push_back(string_of(field(v, "id"), "vertex id"));
    positions.emplace_back(rational_from_json(field(v, "x")), rational_from_json(field(v, "y")));
  }
  return Framework(Graph(std::move(ids), edge_pairs_from(array_field(j, "edges"))), std::move(positions));
}

Json stress_to_json(const Graph& g, const Stress& s) {
  if (static_cast<std::size_t>(s.size()) != g.edge_count())
    throw Error(ErrorKind::LengthMismatch, "stress length differs from the edge count");
  Json values = Json::array();
  for (Eigen::Index k = 0; k < s.size(); ++k) values.push_back(to_json(s(k)));
  Json out;
  out["edges_order"] = edge_pairs(g);
  out["values"] = std::move(values);
  return out;
}

Stress stress_from_json(const Json& j, const Graph& g) {
  const auto order = edge_pairs_from(array_field(j, "edges_order"));
  const Json& values = array_field(j, "values");
  if (order.size() != g.edge_count() || values.size() != g.edge_count())
    throw Error(ErrorKind::LengthMismatch, "stress length differs from the edge count");
  Stress s(static_cast<Eigen::Index>(values.size()));
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (order[e] != g.edge_label(e))
      throw Error(ErrorKind::LengthMismatch, "stress edge order differs from the framework at position " +
                                                 std::to_string(e));
    s(static_cast<Eigen::Index>(e)) = rational_from_json(values[e]);
  }
  return s;
}

Json basis_to_json(const Graph& g, const StressBasis& b) {
  Json stresses = Json::array();
  for (std::size_t k = 0; k < b.dimension(); ++k) stresses.push_back(stress_to_json(g, b.vector(k)));
  Json out;
  out["dimension"] = b.dimension();
  out["stresses"] = std::move(stresses);
  return out;
}

StressBasis basis_from_json(const Json& j, const Graph& g) {
  const Json& stresses = array_field(j, "stresses");
  if (index_of(field(j, "dimension"), "dimension") != stresses.size())
    throw Error(ErrorKind::LengthMismatch, "basis dimension differs from the number of stresses");
  StressBasis b;
  b.edge_count = g.edge_count();
  b.vectors = RatMatrix(static_cast<Eigen::Index>(stresses.size()), static_cast<Eigen::Index>(g.edge_count()));
  for (std::size_t k = 0; k < stresses.size(); ++k)
    b.vectors.row(static_cast<Eigen::Index>(k)) = stress_from_json(stresses[k], g).transpose();
  return b;
}

namespace {

Json matroid_core(const StressMatroid& m) {
  Json order = Json::array();
  for (const auto& [u, v] : m.edge_order) order.push_back(Json::array({u, v}));
  Json out;
  out["edge_order"] = std::move(order);
  out["circuits"] = m.circuits;
  return out;
}

}  // namespace

std::string matroid_sha(const StressMatroid& m) {
  const std::string bytes = matroid_core(m).dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::InvalidArgument, "sha256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int k = 0; k < length; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", digest[k]);
    hex += buf;
  }
  return hex;
}

Json to_json(const StressMatroid& m) {
  Json out = matroid_core(m);
  if (m.covectors) out["covectors"] = *m.covectors;
  out["sha"] = matroid_sha(m);
  return out;
}

StressMatroid matroid_from_json(const Json& j) {
  StressMatroid m;
  m.edge_order = edge_pairs_from(array_field(j, "edge_order"));
  m.circuits = canonical_set(field(j, "circuits"), m.edge_count());
  if (j.contains("covectors")) m.covectors = canonical_set(j["covectors"], m.edge_count());
  return m;
}

Json to_json(const LineArrangement& l) {
  Json lines = Json::array();
  for (const auto& line : l.lines) lines.push_back({{"a", to_json(line.a())}, {"b", to_json(line.b())}, {"c", to_json(line.c())}});
  Json out;
  out["lines"] = std::move(lines);
  return out;
}

LineArrangement arrangement_from_json(const Json& j) {
  LineArrangement out;
  for (const auto& l : array_field(j, "lines"))
    out.lines.emplace_back(rational_from_json(field(l, "a")), rational_from_json(field(l, "b")),
                           rational_from_json(field(l, "c")));
  return out;
}

Json to_json(const ArrangementType& t) {
  Json orders = Json::array();
  for (const auto& order : t.crossing_orders) {
    Json row = Json::array();
    for (std::size_t k : order) row.push_back(k + 1);
    orders.push_back(std::move(row));
  }
  Json out;
  out["crossing_orders"] = std::move(orders);
  out["side_signs"] = t.side_signs;
  return out;
}

Json to_json(const GadgetLayout& g) {
  Json out = to_json(g.framework);
  out["n"] = g.n;
  Json labels = Json::object();
  for (const auto& [role, id] : g.labels) labels[role] = id;
  out["labels"] = std::move(labels);
  Json line_of = Json::object();
  for (std::size_t k = 0; k < g.line_of.size(); ++k) line_of[std::to_string(k + 1)] = g.line_of[k];
  out["line_of"] = std::move(line_of);
  Json order = Json::array();
  for (std::size_t k : g.line_order) order.push_back(k + 1);
  out["line_order"] = std::move(order);
  Json matrix = Json::array();
  for (int r = 0; r < 2; ++r) matrix.push_back(Json::array({to_json(g.frame.matrix(r, 0)), to_json(g.frame.matrix(r, 1))}));
  out["frame"] = {{"matrix", std::move(matrix)},
                  {"translation", point_to_json(g.frame.translation)},
                  {"half_width", to_json(g.frame.half_width)},
                  {"half_height", to_json(g.frame.half_height)}};
  return out;
}

GadgetLayout layout_from_json(const Json& j) {
  GadgetLayout g;
  g.framework = framework_from_json(j);
  g.n = index_of(field(j, "n"), "n");
  const Json& labels = field(j, "labels");
  if (!labels.is_object()) parse_error("\"labels\" must be an object");
  for (const auto& [role, id] : labels.items()) {
    const std::string vid = string_of(id, "label target");
    if (!g.framework.graph().find_vertex(vid)) parse_error("label " + role + " names unknown vertex " + vid);
    g.labels.emplace(role, vid);
  }
  const Json& line_of = field(j, "line_of");
  if (!line_of.is_object() || line_of.size() != g.n) parse_error("\"line_of\" must map each of the n lines");
  for (std::size_t k = 0; k < g.n; ++k) {
    const Json& chain = array_field(line_of, std::to_string(k + 1).c_str());
    std::vector<EdgeIndex> edges;
    for (const auto& e : chain) {
      edges.push_back(index_of(e, "edge index"));
      if (edges.back() >= g.framework.edge_count()) parse_error("line_of names an edge out of range");
    }
    g.line_of.push_back(std::move(edges));
  }
  for (const auto& k : array_field(j, "line_order")) {
    const std::size_t label = index_of(k, "line label");
    if (label == 0 || label > g.n) parse_error("line_order label out of range");
    g.line_order.push_back(label - 1);
  }
  if (g.line_order.size() != g.n) parse_error("\"line_order\" must list n lines");
  const Json& frame = field(j, "frame");
  const Json& matrix = field(frame, "matrix");
  if (!matrix.is_array() || matrix.size() != 2) parse_error("frame matrix must be 2x2");
  for (int r = 0; r < 2; ++r) {
    const Point row = point_from_json(matrix[r]);
    g.frame.matrix(r, 0) = row.x();
    g.frame.matrix(r, 1) = row.y();
  }
  g.frame.translation = point_from_json(field(frame, "translation"));
  g.frame.half_width = rational_from_json(field(frame, "half_width"));
  g.frame.half_height = rational_from_json(field(frame, "half_height"));
  return g;
}

Json to_json(const GadgetReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  Json out;
  out["n"] = r.n;
  out["dimension"] = r.dimension;
  out["ok"] = r.ok();
  out["checks"] = std::move(checks);
  return out;
}

Json to_json(const InvarianceReport& r) {
  Json trials = Json::array();
  for (const auto& t : r.trials)
    trials.push_back({{"index", t.index},
                      {"seed", t.seed},
                      {"halvings", t.halvings},
                      {"equivalent", t.equivalent},
                      {"same_graph", t.same_graph},
                      {"matroid_equal", t.matroid_equal}});
  Json out;
  out["n"] = r.n;
  out["reference_circuits"] = r.reference_circuits;
  out["ok"] = r.ok();
  out["trials"] = std::move(trials);
  if (r.discrimination)
    out["discrimination"] = {{"inequivalent", r.discrimination->inequivalent},
                             {"matroids_differ", r.discrimination->matroids_differ},
                             {"method", r.discrimination->method}};
  return out;
}

Json to_json(const HarmonicGadget& h) {
  const Graph& g = h.framework.graph();
  Json quadruple = Json::array();
  for (VertexIndex v : h.quadruple) quadruple.push_back(g.id(v));
  Json triples = Json::array();
  for (const auto& t : h.collinear_triples) triples.push_back(Json::array({g.id(t[0]), g.id(t[1]), g.id(t[2])}));
  Json out;
  out["framework"] = to_json(h.framework);
  out["collinear"] = to_json(h.collinear);
  out["quadruple"] = std::move(quadruple);
  out["cross_ratio"] = to_json(h.cross_ratio);
  out["collinear_triples"] = std::move(triples);
  out["matroids_differ"] = h.matroids_differ;
  return out;
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << dump(j);
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for " + path.string());
}

}  // namespace stressmat::io
