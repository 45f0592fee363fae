#include "stressmat/svg.hpp"

#include <algorithm>
#include <cstdio>

#include "stressmat/error.hpp"

namespace stressmat {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 40.0;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string emit_svg(const Framework& f, const std::optional<Stress>& stress) {
  if (const auto bad = degenerate_edges(f); !bad.empty()) {
    const auto [u, v] = f.graph().edge_label(bad.front());
    throw Error(ErrorKind::DegenerateEdge, "edge " + u + "-" + v + " has coincident endpoints");
  }
  if (stress && static_cast<std::size_t>(stress->size()) != f.edge_count())
    throw Error(ErrorKind::LengthMismatch, "stress length differs from the edge count");

  double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
  for (VertexIndex v = 0; v < f.vertex_count(); ++v) {
    const double x = f.position(v).x().to_double(), y = f.position(v).y().to_double();
    if (v == 0) {
      min_x = max_x = x;
      min_y = max_y = y;
    }
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double scale = (kCanvas - 2 * kMargin) / span;
  auto sx = [&](const Point& p) { return kMargin + (p.x().to_double() - min_x) * scale; };
  auto sy = [&](const Point& p) { return kMargin + (max_y - p.y().to_double()) * scale; };
  const double width = 2 * kMargin + (max_x - min_x) * scale;
  const double height = 2 * kMargin + (max_y - min_y) * scale;

  double peak = 0;
  if (stress)
    for (Eigen::Index k = 0; k < stress->size(); ++k) peak = std::max(peak, (*stress)(k).abs().to_double());

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width) + "\" height=\"" +
                    fixed(height) + "\" viewBox=\"0 0 " + fixed(width) + " " + fixed(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (EdgeIndex e = 0; e < f.edge_count(); ++e) {
    const auto [u, v] = f.graph().edge(e);
    std::string style = "stroke=\"#333333\" stroke-width=\"1.500\"";
    if (stress) {
      const Rational& s = (*stress)(static_cast<Eigen::Index>(e));
      if (s.is_zero()) {
        style = "stroke=\"#999999\" stroke-width=\"1.000\" stroke-dasharray=\"6 4\"";
      } else {
        const double w = 1.0 + 5.0 * s.abs().to_double() / peak;
        style = std::string("stroke=\"") + (s.sign() > 0 ? "#1f5fbf" : "#c8312b") + "\" stroke-width=\"" +
                fixed(w) + "\"";
      }
    }
    out += "<line x1=\"" + fixed(sx(f.position(u))) + "\" y1=\"" + fixed(sy(f.position(u))) + "\" x2=\"" +
           fixed(sx(f.position(v))) + "\" y2=\"" + fixed(sy(f.position(v))) + "\" " + style + "/>\n";
  }
  for (VertexIndex v = 0; v < f.vertex_count(); ++v) {
    const Point& p = f.position(v);
    out += "<circle cx=\"" + fixed(sx(p)) + "\" cy=\"" + fixed(sy(p)) + "\" r=\"3.500\" fill=\"black\"/>\n";
    out += "<text x=\"" + fixed(sx(p) + 5) + "\" y=\"" + fixed(sy(p) - 5) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(f.graph().id(v)) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace stressmat
