#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stressmat/cli.hpp"
#include "stressmat/io.hpp"
#include "stressmat/svg.hpp"
#include "support.hpp"

using namespace stressmat;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "stressmat_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("format round trips") {
    const Framework k4 = testkit::k4_interior();
    const io::Json fj = io::to_json(k4);
    const Framework back = io::framework_from_json(io::Json::parse(io::dump(fj)));
    CHECK(back.positions() == k4.positions());
    CHECK(back.graph().edges() == k4.graph().edges());
    CHECK(io::dump(io::to_json(back)) == io::dump(fj));

    const StressBasis b = stress_basis(k4);
    const Stress s = b.vector(0);
    CHECK(io::stress_from_json(io::stress_to_json(k4.graph(), s), k4.graph()) == s);
    CHECK(io::basis_from_json(io::basis_to_json(k4.graph(), b), k4.graph()).vectors == b.vectors);

    const StressMatroid m = stress_matroid(k4, true);
    const StressMatroid mb = io::matroid_from_json(io::to_json(m));
    CHECK(mb.circuits == m.circuits);
    CHECK(mb.covectors == m.covectors);
    CHECK(io::matroid_sha(mb) == io::matroid_sha(m));
    CHECK(io::matroid_sha(m) != io::matroid_sha(stress_matroid(testkit::k4_convex())));

    const LineArrangement l = testkit::arrangement(3);
    CHECK(io::arrangement_from_json(io::to_json(l)) == l);

    const GadgetLayout g = build_gadget(l);
    const GadgetLayout gb = io::layout_from_json(io::Json::parse(io::dump(io::to_json(g))));
    CHECK(io::dump(io::to_json(gb)) == io::dump(io::to_json(g)));
    CHECK(gb.line_of == g.line_of);
    CHECK(gb.labels == g.labels);
    CHECK(verify_gadget(gb, 3, 1).ok());
  }

  TEST_CASE("rational fields") {
    CHECK(io::to_json(Rational(-3, 2)) == "-3/2");
    CHECK(io::to_json(Rational(0)) == "0/1");
    CHECK(io::rational_from_json(io::Json(5)) == Rational(5));
    CHECK(testkit::error_of([] { (void)io::rational_from_json(io::Json(0.5)); }) == ErrorKind::Parse);
    CHECK(testkit::error_of([] { (void)io::framework_from_json(io::Json::parse(R"({"vertices":[]})")); }) ==
          ErrorKind::Parse);
    const Graph g = testkit::k4_interior().graph();
    const auto short_stress = io::Json::parse(R"({"edges_order":[["1","2"]],"values":["1/1"]})");
    CHECK(testkit::error_of([&] { (void)io::stress_from_json(short_stress, g); }) == ErrorKind::LengthMismatch);
  }

  TEST_CASE("matroid command on the K4 example") {
    const Run r = run({"matroid", testkit::data_path("k4.json")});
    CHECK(r.code == 0);
    const io::Json j = io::Json::parse(r.out);
    CHECK(j["circuits"] == io::Json::array({"+++---"}));
    CHECK(j["sha"].get<std::string>().size() == 64);
  }

  TEST_CASE("build then stresses") {
    const fs::path dir = scratch_dir();
    const std::string layout = (dir / "gadget3.json").string();
    CHECK(run({"gadget-build", testkit::data_path("arr3.json"), "-o", layout}).code == 0);
    const Run s = run({"stresses", layout});
    CHECK(s.code == 0);
    CHECK(io::Json::parse(s.out)["dimension"] == 4);
    const Run alias = run({"gadget", "verify", layout, "--samples", "5"});
    CHECK(alias.code == 0);
    CHECK(io::Json::parse(alias.out)["ok"] == true);
    const Run x = run({"extract", layout});
    CHECK(x.code == 0);
    CHECK(io::arrangement_from_json(io::Json::parse(x.out)).size() == 3);
  }

  TEST_CASE("equal command") {
    const fs::path dir = scratch_dir();
    const std::string m1 = (dir / "m1.json").string(), m2 = (dir / "m2.json").string();
    io::write_file(m1, io::to_json(stress_matroid(testkit::k4_interior())));
    io::write_file(m2, io::to_json(stress_matroid(testkit::k4_convex())));
    CHECK(run({"equal", m1, m1, "--map", "id"}).code == 0);
    CHECK(run({"equal", m1, m2, "--map", "id"}).code == 2);
    CHECK(run({"equal", m1, m1, "--map", "labels"}).code == 0);
    const std::string corr = (dir / "corr.json").string();
    io::write_file(corr, io::Json::array({0, 1, 2, 3, 4, 5}));
    CHECK(run({"equal", m1, m1, "--map", corr}).code == 0);
  }

  TEST_CASE("exit codes and error objects") {
    const Run missing = run({"stresses", "/nonexistent/file.json"});
    CHECK(missing.code == 1);
    const io::Json e = io::Json::parse(missing.err);
    CHECK(e["error"]["class"] == "validation");
    CHECK(run({"no-such-verb"}).code == 1);
    CHECK(run({}).code == 1);

    const Run cap = run({"matroid", testkit::data_path("k4.json"), "--covectors", "--cap", "2"});
    CHECK(cap.code == 3);
    CHECK(io::Json::parse(cap.err)["error"]["kind"] == "CapExceeded");

    const fs::path dir = scratch_dir();
    GadgetLayout bad = build_gadget(testkit::arrangement(2));
    bad.framework = bad.framework.with_position(bad.vertex("C1"), Point(bad.position("C1") + Point(Rational(1, 5), Rational(-1, 5))));
    const std::string bad_path = (dir / "bad.json").string();
    io::write_file(bad_path, io::to_json(bad));
    CHECK(run({"gadget-verify", bad_path, "--samples", "3"}).code == 2);

    const Run harmonic = run({"harmonic", "--p1", "0,0", "--p2", "2,0", "--p3", "1,0"});
    CHECK(harmonic.code == 1);
    CHECK(io::Json::parse(harmonic.err)["error"]["kind"] == "SeedDegenerate");
  }

  TEST_CASE("outputs are byte-identical across runs") {
    const fs::path dir = scratch_dir();
    const std::vector<std::vector<std::string>> commands{
        {"matroid", testkit::data_path("k4.json"), "--covectors"},
        {"gadget-build", testkit::data_path("arr3.json")},
        {"invariance", testkit::data_path("arr3.json"), "--trials", "3", "--seed", "9"},
        {"k4replace", testkit::data_path("k4.json"), "--edge", "all", "--side", "right"},
        {"gammaprime", testkit::data_path("arr3.json")},
        {"harmonic"},
        {"svg", testkit::data_path("k4.json")},
        {"type", testkit::data_path("arr4.json")},
    };
    for (const auto& cmd : commands) {
      CAPTURE(cmd.front());
      const Run a = run(cmd), b = run(cmd);
      CHECK(a.code == 0);
      CHECK(a.out == b.out);
      CHECK_FALSE(a.out.empty());
      auto with_file = cmd;
      with_file.push_back("-o");
      with_file.push_back((dir / "det.out").string());
      CHECK(run(with_file).code == 0);
      CHECK(slurp(dir / "det.out") == a.out);
    }
  }

  TEST_CASE("svg styling") {
    const Framework k4 = testkit::k4_interior();
    const std::string plain = emit_svg(k4);
    CHECK(count(plain, "<line ") == 6);
    CHECK(count(plain, "#1f5fbf") == 0);
    const std::string coloured = emit_svg(k4, stress_basis(k4).vector(0));
    CHECK(count(coloured, "#1f5fbf") == 3);
    CHECK(count(coloured, "#c8312b") == 3);

    const GadgetLayout g = build_gadget(testkit::arrangement(3));
    const std::string a = emit_svg(g.framework, discover_circuits(g).a_stress);
    // Solid: the four subdivided rhombus sides and the two diagonals.
    const std::size_t solid = 4 * (g.n + 1) + 2;
    CHECK(count(a, "stroke-dasharray") == g.framework.edge_count() - solid);
    CHECK(count(a, "<line ") == g.framework.edge_count());

    const Framework squashed = k4.with_position(1, k4.position(0));
    CHECK(testkit::error_of([&] { (void)emit_svg(squashed); }) == ErrorKind::DegenerateEdge);
  }
}
