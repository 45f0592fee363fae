#include "stressmat/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>

#include "stressmat/error.hpp"
#include "stressmat/io.hpp"
#include "stressmat/svg.hpp"

namespace stressmat::cli {

namespace {

using io::Json;

std::string_view class_name(ErrorClass c) {
  switch (c) {
    case ErrorClass::Validation: return "validation";
    case ErrorClass::Verification: return "verification";
    case ErrorClass::Budget: return "budget";
  }
  return "validation";
}

int report_error(std::ostream& err, std::string_view kind, ErrorClass cls, const std::string& message) {
  Json j;
  j["error"] = {{"kind", kind}, {"class", class_name(cls)}, {"message", message}};
  err << j.dump() << "\n";
  return static_cast<int>(cls);
}

/// Sends text to -o if given, else to the output stream.
struct Sink {
  std::string path;
  std::ostream* out;

  void text(const std::string& s) const {
    if (path.empty()) {
      *out << s;
      return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
    f << s;
  }
  void json(const Json& j) const { text(io::dump(j)); }
};

Point parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::Parse, "a point is written x,y; got \"" + text + "\"");
  return Point(Rational::parse(text.substr(0, comma)), Rational::parse(text.substr(comma + 1)));
}

std::vector<std::size_t> label_correspondence(const StressMatroid& m1, const StressMatroid& m2) {
  std::map<std::pair<std::string, std::string>, std::size_t> where;
  for (std::size_t k = 0; k < m2.edge_order.size(); ++k) {
    auto [u, v] = m2.edge_order[k];
    if (v < u) std::swap(u, v);
    where.emplace(std::make_pair(u, v), k);
  }
  std::vector<std::size_t> corr;
  for (auto [u, v] : m1.edge_order) {
    if (v < u) std::swap(u, v);
    auto it = where.find({u, v});
    if (it == where.end()) throw Error(ErrorKind::ArityMismatch, "edge " + u + "-" + v + " missing from second matroid");
    corr.push_back(it->second);
  }
  return corr;
}

std::vector<std::size_t> file_correspondence(const std::string& path) {
  const Json j = io::read_file(path);
  const Json& arr = j.is_object() && j.contains("correspondence") ? j["correspondence"] : j;
  if (!arr.is_array()) throw Error(ErrorKind::Parse, "correspondence file must hold an array of edge indices");
  std::vector<std::size_t> out;
  for (const auto& v : arr) {
    if (!v.is_number_unsigned()) throw Error(ErrorKind::Parse, "correspondence entries must be edge indices");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

// Rewrites "gadget build" style invocations to their single-word verbs.
std::vector<std::string> normalize_verbs(std::vector<std::string> args) {
  if (args.size() >= 2 && args[0] == "gadget") {
    static const std::map<std::string, std::string> verbs{{"build", "gadget-build"},
                                                          {"verify", "gadget-verify"},
                                                          {"invariance", "invariance"},
                                                          {"k4replace", "k4replace"},
                                                          {"gammaprime", "gammaprime"},
                                                          {"harmonic", "harmonic"},
                                                          {"extract", "extract"}};
    if (auto it = verbs.find(args[1]); it != verbs.end()) {
      args.erase(args.begin());
      args[0] = it->second;
    }
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact equilibrium stresses, oriented matroids of stresses and arrangement gadgets", "stressmat"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string output;
  std::string input, second;
  std::uint64_t seed = 1;
  std::size_t trials = 20, samples = 100, cap = 0;
  bool covectors = false;
  std::string map_mode = "id", magnitude = "1/100", against, edge_spec = "all", side = "left", stress_path;
  std::string p1 = "0,0", p2 = "2,0", p3 = "1/2,0";

  auto with_output = [&](CLI::App* sub) { sub->add_option("-o,--output", output, "Write the result to this path"); };

  auto* stresses = app.add_subcommand("stresses", "Basis of the equilibrium stress space");
  stresses->add_option("framework", input, "Framework or layout file")->required();
  with_output(stresses);

  auto* matroid = app.add_subcommand("matroid", "Circuits (and optionally covectors) of the stress matroid");
  matroid->add_option("framework", input, "Framework or layout file")->required();
  matroid->add_flag("--covectors", covectors, "Also enumerate all covectors");
  matroid->add_option("--cap", cap, "Covector cap (default from STRESSMATROID_MAX_CELLS or 1000000)");
  with_output(matroid);

  auto* equal = app.add_subcommand("equal", "Compare two matroid files; exit 2 if they differ");
  equal->add_option("first", input, "Matroid file")->required();
  equal->add_option("second", second, "Matroid file")->required();
  equal->add_option("--map", map_mode, "Edge correspondence: id, labels, or a JSON file of indices");
  with_output(equal);

  auto* build = app.add_subcommand("gadget-build", "Build the gadget framework of an arrangement");
  build->add_option("arrangement", input, "Arrangement file")->required();
  with_output(build);

  auto* verify = app.add_subcommand("gadget-verify", "Run the structural checks on a gadget layout");
  verify->add_option("layout", input, "Layout file")->required();
  verify->add_option("--samples", samples, "Random stresses to test");
  verify->add_option("--seed", seed, "Sampling seed");
  with_output(verify);

  auto* invariance = app.add_subcommand("invariance", "Matroid invariance under type-preserving perturbation");
  invariance->add_option("arrangement", input, "Arrangement file")->required();
  invariance->add_option("--trials", trials, "Number of perturbations");
  invariance->add_option("--seed", seed, "Seed of the first trial");
  invariance->add_option("--magnitude", magnitude, "Initial perturbation size as num/den");
  invariance->add_option("--against", against, "Inequivalent arrangement whose gadget must differ");
  with_output(invariance);

  auto* k4 = app.add_subcommand("k4replace", "Replace edges by stressed K4 subframeworks");
  k4->add_option("framework", input, "Framework file")->required();
  k4->add_option("--edge", edge_spec, "Edge index or 'all'");
  k4->add_option("--side", side, "left or right")->check(CLI::IsMember({"left", "right"}));
  with_output(k4);

  auto* gamma = app.add_subcommand("gammaprime", "Line-only variant of the gadget");
  gamma->add_option("arrangement", input, "Arrangement file")->required();
  with_output(gamma);

  auto* harmonic = app.add_subcommand("harmonic", "Harmonic quadruple forced by collinear triangles");
  harmonic->add_option("--p1", p1, "First seed point x,y");
  harmonic->add_option("--p2", p2, "Second seed point x,y");
  harmonic->add_option("--p3", p3, "Third seed point x,y");
  with_output(harmonic);

  auto* svg = app.add_subcommand("svg", "Draw a framework, optionally coloured by a stress");
  svg->add_option("framework", input, "Framework or layout file")->required();
  svg->add_option("--stress", stress_path, "Stress file");
  with_output(svg);

  auto* type = app.add_subcommand("type", "Combinatorial type of an arrangement");
  type->add_option("arrangement", input, "Arrangement file")->required();
  with_output(type);

  auto* extract = app.add_subcommand("extract", "Arrangement spanned by the line chains of a layout");
  extract->add_option("layout", input, "Layout file")->required();
  with_output(extract);

  std::vector<std::string> args = normalize_verbs(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return report_error(err, "Usage", ErrorClass::Validation, e.what());
  }

  const Sink sink{output, &out};
  try {
    if (stresses->parsed()) {
      const Framework f = io::framework_from_json(io::read_file(input));
      sink.json(io::basis_to_json(f.graph(), stress_basis(f)));
    } else if (matroid->parsed()) {
      const Framework f = io::framework_from_json(io::read_file(input));
      const std::size_t limit = cap > 0 ? cap : covector_cap_from_env();
      sink.json(io::to_json(stress_matroid(f, covectors, limit)));
    } else if (equal->parsed()) {
      const StressMatroid m1 = io::matroid_from_json(io::read_file(input));
      const StressMatroid m2 = io::matroid_from_json(io::read_file(second));
      std::vector<std::size_t> corr;
      if (map_mode == "id") {
        if (m1.edge_count() != m2.edge_count()) throw Error(ErrorKind::ArityMismatch, "matroids have different arity");
        corr = identity_correspondence(m1.edge_count());
      } else if (map_mode == "labels") {
        corr = label_correspondence(m1, m2);
      } else {
        corr = file_correspondence(map_mode);
      }
      const bool same = matroid_equal(m1, m2, corr);
      Json j;
      j["equal"] = same;
      sink.json(j);
      return same ? 0 : static_cast<int>(ErrorClass::Verification);
    } else if (build->parsed()) {
      sink.json(io::to_json(build_gadget(io::arrangement_from_json(io::read_file(input)))));
    } else if (verify->parsed()) {
      const GadgetReport report = verify_gadget(io::layout_from_json(io::read_file(input)), samples, seed);
      sink.json(io::to_json(report));
      return report.ok() ? 0 : static_cast<int>(ErrorClass::Verification);
    } else if (invariance->parsed()) {
      const LineArrangement l = io::arrangement_from_json(io::read_file(input));
      std::optional<LineArrangement> other;
      if (!against.empty()) other = io::arrangement_from_json(io::read_file(against));
      const InvarianceReport report = matroid_invariance_harness(l, trials, seed, Rational::parse(magnitude),
                                                                 other ? &*other : nullptr);
      sink.json(io::to_json(report));
      return report.ok() ? 0 : static_cast<int>(ErrorClass::Verification);
    } else if (k4->parsed()) {
      const Framework f = io::framework_from_json(io::read_file(input));
      const Side s = side == "left" ? Side::Left : Side::Right;
      if (edge_spec == "all") {
        sink.json(io::to_json(k4_replace_all(f, s)));
      } else {
        std::size_t edge = 0;
        try {
          std::size_t used = 0;
          edge = std::stoul(edge_spec, &used);
          if (used != edge_spec.size()) throw std::invalid_argument(edge_spec);
        } catch (const std::logic_error&) {
          throw Error(ErrorKind::Parse, "--edge takes an edge index or 'all'");
        }
        sink.json(io::to_json(k4_replace(f, edge, s)));
      }
    } else if (gamma->parsed()) {
      const GammaPrime g = gamma_prime(io::arrangement_from_json(io::read_file(input)));
      Json j;
      j["framework"] = io::to_json(g.framework);
      j["stressable"] = !g.matroid.circuits.empty();
      j["matroid"] = io::to_json(g.matroid);
      sink.json(j);
    } else if (harmonic->parsed()) {
      const HarmonicGadget h = harmonic_gadget(parse_point(p1), parse_point(p2), parse_point(p3));
      sink.json(io::to_json(h));
      return h.cross_ratio == Rational(-1) && h.matroids_differ ? 0 : static_cast<int>(ErrorClass::Verification);
    } else if (svg->parsed()) {
      const Framework f = io::framework_from_json(io::read_file(input));
      std::optional<Stress> s;
      if (!stress_path.empty()) s = io::stress_from_json(io::read_file(stress_path), f.graph());
      sink.text(emit_svg(f, s));
    } else if (type->parsed()) {
      sink.json(io::to_json(combinatorial_type(io::arrangement_from_json(io::read_file(input)))));
    } else if (extract->parsed()) {
      sink.json(io::to_json(extract_arrangement(io::layout_from_json(io::read_file(input)))));
    }
  } catch (const Error& e) {
    return report_error(err, to_string(e.kind()), classify(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return report_error(err, "Parse", ErrorClass::Validation, e.what());
  } catch (const std::exception& e) {
    return report_error(err, "InvalidArgument", ErrorClass::Validation, e.what());
  }
  return 0;
}

}  // namespace stressmat::cli
