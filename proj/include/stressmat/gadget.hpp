#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stressmat/arrangement.hpp"
#include "stressmat/sign_matroid.hpp"

namespace stressmat {

/// Affine normalization p -> matrix p + translation applied to the input
/// arrangement, and the rhombus A=(-w,0), B=(0,h), C=(w,0), D=(0,-h) built
/// around the normalized lines. Reflection across BD is x -> -x.
struct GadgetFrame {
  RatMatrix2 matrix = RatMatrix2::Identity();
  Point translation = Point(Rational(0), Rational(0));
  Rational half_width;   // w
  Rational half_height;  // h

  Point corner(char letter) const;
};

struct Rhombus {
  GadgetFrame frame;
  LineArrangement normalized;  // input lines in the normalized frame, input order
  Point A, B, C, D;
};

/// Rhombus whose sides AB and AD are crossed in their interiors by every
/// line and which holds every crossing strictly inside. If `hint` is given
/// and admissible for this arrangement it is reused. Throws NotGeneric,
/// ConstructionFailed.
Rhombus build_rhombus(const LineArrangement& arrangement, const GadgetFrame* hint = nullptr);

/// Role names: "A".."D", "A1".."An", "T1_2"; `line` is 0-based, names are 1-based.
std::string role_name(char letter, std::size_t line);
std::string crossing_role(std::size_t i, std::size_t j);

struct GadgetEdges {
  std::array<std::vector<EdgeIndex>, 4> sides;  // chains A->B, B->C, C->D, D->A
  EdgeIndex diagonal_ac = 0;
  EdgeIndex diagonal_bd = 0;
  std::vector<std::array<EdgeIndex, 3>> quads;  // AiBi, BiCi, CiDi
  std::vector<std::vector<EdgeIndex>> chains;   // segments of line i from Ai to Di

  std::vector<EdgeIndex> all_sides() const;
};

struct GadgetLayout {
  Framework framework;
  std::size_t n = 0;
  std::map<std::string, std::string> labels;    // role -> vertex id
  std::vector<std::vector<EdgeIndex>> line_of;  // chain edges of gadget line i, from Ai to Di
  std::vector<std::size_t> line_order;          // gadget line i -> input line index
  GadgetFrame frame;

  VertexIndex vertex(const std::string& role) const;
  const Point& position(const std::string& role) const { return framework.position(vertex(role)); }
  /// Edge between two roles; throws InvalidArgument if absent.
  EdgeIndex edge(const std::string& r1, const std::string& r2) const;
  GadgetEdges edges() const;
};

/// Builds the framework from a generic arrangement. Gadget line i is the
/// input line whose crossing with AB is the i-th from A.
GadgetLayout build_gadget(const LineArrangement& arrangement, const GadgetFrame* hint = nullptr);

/// Distinguished circuits with one realizing stress each:
///  a: rhombus sides and both diagonals;
///  c_i: Desargues subframework through diagonal AC (chains A..Ai, A..Di);
///  d_i: Desargues subframework through diagonal BD (chains Ai..B, Di..D);
///  b_i: circuit carrying lines i and i+1 (cyclically), no diagonals.
struct GadgetCircuits {
  SignVector a;
  std::vector<SignVector> b, c, d;
  Stress a_stress;
  std::vector<Stress> b_stress, c_stress, d_stress;
};

/// Throws ClassificationFailed if a class is empty or ambiguous.
GadgetCircuits discover_circuits(const GadgetLayout& layout);
GadgetCircuits discover_circuits(const GadgetLayout& layout, const std::vector<SignVector>& circuits);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct GadgetReport {
  std::size_t n = 0;
  std::size_t dimension = 0;
  std::vector<CheckResult> checks;

  bool ok() const;
  const CheckResult* find(const std::string& name) const;
};

/// Runs every structural check on the layout; `samples` random rational
/// elements of the stress space feed the sign-rule and ratio checks.
GadgetReport verify_gadget(const GadgetLayout& layout, std::size_t samples = 100, std::uint64_t seed = 1);

/// The arrangement spanned by the line chains, in gadget order. Throws
/// ChainNotCollinear.
LineArrangement extract_arrangement(const GadgetLayout& layout);

/// Edge k of g1 corresponds to edge result[k] of g2, matching roles through
/// the input line each gadget line came from; nullopt if the graphs differ.
std::optional<std::vector<std::size_t>> gadget_correspondence(const GadgetLayout& g1,
                                                              const GadgetLayout& g2);

struct InvarianceTrial {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  unsigned halvings = 0;
  bool equivalent = false;
  bool same_graph = false;
  bool matroid_equal = false;
};

struct Discrimination {
  bool inequivalent = false;
  bool matroids_differ = false;
  std::string method;  // "same-graph" or "transplant"
};

struct InvarianceReport {
  std::size_t n = 0;
  std::size_t reference_circuits = 0;
  std::vector<InvarianceTrial> trials;
  std::optional<Discrimination> discrimination;

  bool ok() const;
};

/// Gadgets of type-preserving perturbations must share the stress matroid;
/// the gadget of `against` (if given, an inequivalent arrangement) must not.
InvarianceReport matroid_invariance_harness(const LineArrangement& arrangement, std::size_t trials,
                                            std::uint64_t seed, const Rational& magnitude = Rational(1, 100),
                                            const LineArrangement* against = nullptr);

enum class Side { Left, Right };

/// Replaces edge (i,j) by a stressed K4 on {i, j, u, w} minus (i,j), with u,w
/// on the chosen side of i->j. The new vertices are appended, the edge is
/// removed and the five new edges are appended in the order iu, iw, ju, jw,
/// uw. Throws DegenerateEdge, PlacementFailed.
Framework k4_replace(const Framework& f, EdgeIndex edge, Side side, unsigned max_attempts = 64);

/// k4_replace applied to every edge of f, in edge order.
Framework k4_replace_all(const Framework& f, Side side);

/// Pairs of parallel edges sharing a vertex, as (vertex, edge, edge).
std::vector<std::array<std::size_t, 3>> parallel_incident_edges(const Framework& f);

struct GammaPrime {
  Framework framework;
  StressMatroid matroid;
};

/// The line-only variant: vertices Ai, Di, Tij; edges are the chain
/// segments of each line plus the full span AiDi.
GammaPrime gamma_prime(const LineArrangement& arrangement);

struct HarmonicGadget {
  Framework framework;        // complete-quadrangle realization
  Framework collinear;        // same graph, every vertex on one line
  std::array<VertexIndex, 4> quadruple{};  // seeds 1, 2, 3 and the forced fourth point
  Rational cross_ratio;
  std::vector<std::array<VertexIndex, 3>> collinear_triples;
  bool matroids_differ = false;
};

/// Seeds: three distinct collinear points. Throws SeedDegenerate.
HarmonicGadget harmonic_gadget(const Point& p1, const Point& p2, const Point& p3);

}  // namespace stressmat
