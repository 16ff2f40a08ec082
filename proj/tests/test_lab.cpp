#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "curveflow/error.hpp"
#include "curveflow/lab/io.hpp"
#include "curveflow/lab/lab.hpp"
#include "curveflow/shapes.hpp"

using namespace curveflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("curveflow-tests-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string small_circle(const std::string& name, const std::string& p, const std::string& slope,
                         const std::string& stop_time = "inf") {
  return "[" + name + "]\n"
         "kind = curve-flow\nshape = circle\nshape.samples = 64\nshape.radius = 1\n"
         "law.p = " + p + "\n"
         "flow.cfl = 0.5\nflow.resample_every = 20\nflow.target_spacing = 0\n"
         "flow.min_vertices = 64\nflow.max_vertices = 1024\nflow.stop_area_fraction = 0.02\n"
         "flow.max_curvature_factor = 10000\nflow.max_steps = 1000000\nflow.snapshots = 20\n"
         "flow.stop_time = " + stop_time + "\n"
         "analyses = embeddedness, radius-law, area-law\n"
         "radius.t_max = 0.4\ntolerance.radius = 1e-2\n"
         "tolerance.slope = " + slope + "\ntolerance.extinction = 0.02\n";
}

std::string config_error(const std::string& text) {
  try {
    lab::parse_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  FAIL("config accepted");
  return {};
}

}  // namespace

TEST_SUITE("lab") {
  TEST_CASE("shipped catalog parses") {
    const auto scenarios = lab::load_config(CURVEFLOW_CATALOG);
    CHECK(scenarios.size() == 10);
    for (const char* name : {"circle_law", "ellipse_area_law", "spiral_grayson", "affine_ellipse",
                             "dumbbell_pinch", "oracle_check"}) {
      INFO(name);
      CHECK(std::any_of(scenarios.begin(), scenarios.end(), [&](const auto& s) { return s.name == name; }));
    }
    for (std::size_t i = 0; i < scenarios.size(); ++i)
      for (std::size_t j = i + 1; j < scenarios.size(); ++j) CHECK(scenarios[i].name != scenarios[j].name);
  }

  TEST_CASE("empty document") {
    CHECK(lab::parse_config("").empty());
    CHECK(lab::parse_config("# nothing here\n\n").empty());
  }

  TEST_CASE("semantic errors name the key") {
    CHECK(config_error(small_circle("bad", "-1", "0.005")).find("law.p") != std::string::npos);
    std::string missing = small_circle("m", "1", "0.005");
    missing.erase(missing.find("shape.samples"), std::string("shape.samples = 64\n").size());
    CHECK(config_error(missing).find("shape.samples") != std::string::npos);
    CHECK(config_error(small_circle("x", "1", "0.005") + "bogus.key = 1\n").find("bogus.key") != std::string::npos);
  }

  TEST_CASE("syntax errors carry the line number") {
    CHECK(config_error("[broken\nkind = curve-flow\n").find("line 1") != std::string::npos);
    CHECK(config_error("# comment\n\nnot a pair\n").find("line 3") != std::string::npos);
  }

  TEST_CASE("curve and profile files round trip") {
    const fs::path dir = scratch("io");
    const PlaneCurve c = shapes::spiral(512);
    io::write_curve(dir / "c.xy", c);
    const PlaneCurve back = io::read_curve(dir / "c.xy");
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(back[i] == c[i]);

    const AxiProfile p = axi::build_profile(axi::Torus{1.0, 0.2}, 64);
    io::write_profile(dir / "t.prof", p);
    const AxiProfile q = io::read_profile(dir / "t.prof");
    CHECK(q.topology() == Topology::Periodic);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(q.samples()[i] == p.samples()[i]);

    io::write_text(dir / "crlf.xy", "# header\r\n1 0\r\n0 1\r\n-1 0\r\n0 -1\r\n0.7 0.7\r\n-0.7 0.7\r\n-0.7 -0.7\r\n0.7 -0.71\r\n");
    CHECK(io::read_curve(dir / "crlf.xy").size() == 8);

    io::write_text(dir / "bad.xy", "1 0\n0 one\n");
    try {
      io::read_curve(dir / "bad.xy");
      FAIL("accepted malformed file");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidInput);
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    CHECK_THROWS_AS(io::read_curve(dir / "missing.xy"), Error);
  }

  TEST_CASE("unit circle svg") {
    const fs::path dir = scratch("svg");
    lab::emit_svg(shapes::circle(256, 1.0), dir / "c.svg");
    const std::string svg = slurp(dir / "c.svg");
    CHECK(svg.find("viewBox=\"-1.05 -1.05 2.1 2.1\"") != std::string::npos);
    std::size_t paths = 0;
    for (std::size_t at = svg.find("<path"); at != std::string::npos; at = svg.find("<path", at + 1)) ++paths;
    CHECK(paths == 1);
    CHECK(svg.find(" Z\"") != std::string::npos);

    lab::emit_svg(axi::build_profile(axi::Dumbbell{}, 200), dir / "d.svg");
    CHECK(slurp(dir / "d.svg").find("<path") != std::string::npos);
  }

  TEST_CASE("trajectory round trip") {
    const fs::path dir = scratch("traj");
    FlowConfig cfg;
    cfg.snapshot_count = 10;
    const Trajectory t = flow::run(shapes::circle(64, 1.0), {1.0}, cfg);
    io::write_trajectory(dir, t);
    const auto back = std::get<Trajectory>(io::read_trajectory(dir));
    REQUIRE(back.snapshots.size() == t.snapshots.size());
    CHECK(back.law.exponent == 1.0);
    CHECK(back.steps == t.steps);
    CHECK(back.events.size() == t.events.size());
    for (std::size_t i = 0; i < t.snapshots.size(); ++i) {
      CHECK(back.snapshots[i].time == t.snapshots[i].time);
      CHECK(back.snapshots[i].curve[5] == t.snapshots[i].curve[5]);
    }
  }

  TEST_CASE("scenario run, artifacts and determinism") {
    const auto s = lab::parse_config(small_circle("tiny", "1", "0.005")).at(0);
    const fs::path a = scratch("det-a"), b = scratch("det-b");
    const auto ra = lab::run_scenario(s, a);
    const auto rb = lab::run_scenario(s, b);
    INFO(ra.failure_cause);
    CHECK(ra.passed);
    for (const char* check : {"non-embedded-snapshots", "radius-error", "area-slope", "extinction"})
      CHECK(ra.find(check) != nullptr);
    for (const char* file : {"embeddedness.csv", "radius_law.csv", "area_law.csv", "trajectory/trajectory.csv"}) {
      INFO(file);
      REQUIRE(fs::exists(a / "tiny" / file));
      CHECK(slurp(a / "tiny" / file) == slurp(b / "tiny" / file));
    }
    CHECK(fs::exists(a / "tiny" / "report.json"));
    CHECK(fs::exists(a / "tiny" / "final.svg"));
  }

  TEST_CASE("zero slope band fails the scenario") {
    const auto s = lab::parse_config(small_circle("neg", "1", "0")).at(0);
    const auto r = lab::run_scenario(s, scratch("neg"));
    CHECK_FALSE(r.passed);
    REQUIRE(r.find("area-slope") != nullptr);
    CHECK_FALSE(r.find("area-slope")->passed);
  }

  TEST_CASE("module errors become a failure cause") {
    std::string text = small_circle("err", "1", "0.005");
    text.replace(text.find("flow.stop_time = inf"), 20, "flow.stop_time = 0.01");
    const auto s = lab::parse_config(text).at(0);
    const auto r = lab::run_scenario(s, scratch("err"));
    // stop_time 0.01 leaves too few snapshots for the area law
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.failure_cause.empty());
  }

  TEST_CASE("batch keeps input order and accept writes summaries") {
    auto scenarios = lab::parse_config(small_circle("one", "1", "0.005") + small_circle("two", "1", "0"));
    const fs::path out = scratch("batch");
    const auto result = lab::accept(scenarios, out, 2);
    REQUIRE(result.reports.size() == 2);
    CHECK(result.reports[0].scenario == "one");
    CHECK(result.reports[1].scenario == "two");
    CHECK_FALSE(result.passed);
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary["failed"] == 1);
    CHECK(fs::exists(out / "summary.txt"));
  }

  TEST_CASE("default output root honours CURVEFLOW_OUT") {
    ::setenv("CURVEFLOW_OUT", "/tmp/somewhere", 1);
    CHECK(lab::default_output_root() == fs::path("/tmp/somewhere"));
    ::unsetenv("CURVEFLOW_OUT");
    CHECK(lab::default_output_root().filename() == "curveflow-out");
  }
}
