#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "curveflow/axisym.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/rescale.hpp"

// Scenario catalog, batch runner and artifact emission.
namespace curveflow::lab {

namespace fs = std::filesystem;

enum class ScenarioKind { CurveFlow, AxiFlow, RescaleAnalysis, OracleCheck };

std::string_view to_string(ScenarioKind kind);

struct ShapeSpec {
  std::string name;
  std::size_t samples = 0;
  std::map<std::string, double> params;  // keys without the "shape." prefix
};

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::CurveFlow;
  ShapeSpec shape;
  SpeedLaw law;
  FlowConfig flow;
  std::vector<std::string> analyses;
  // Analysis parameters and tolerances by their full key, e.g. "tolerance.slope".
  std::map<std::string, double> settings;
  std::vector<double> blowup_exponents;
  // Accepted classifications per exponent.
  std::vector<std::vector<LimitClass>> blowup_expected;

  double setting(const std::string& key) const;
};

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string relation;  // how measured compares to tolerance for a pass: "<=", ">=", "<", ">"
  bool passed = false;
};

struct RunReport {
  std::string scenario;
  ScenarioKind kind = ScenarioKind::CurveFlow;
  bool passed = false;
  std::string failure_cause;  // set when a module error aborted the run
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;
  std::vector<fs::path> artifacts;

  const CheckResult* find(std::string_view check) const;
};

// INI text, one section per scenario, every key explicit. Throws
// Error{Config} with the line number on syntax errors and naming the key
// (e.g. "law.p") on semantic errors.
std::vector<Scenario> parse_config(const std::string& text);
std::vector<Scenario> load_config(const fs::path& path);

// Runs the flow and the requested analyses, writing artifacts under
// out_root / scenario.name. Module errors become a failed report with a cause.
RunReport run_scenario(const Scenario& scenario, const fs::path& out_root);

// Runs scenarios on up to `workers` threads; order of the result follows the input.
std::vector<RunReport> run_batch(const std::vector<Scenario>& scenarios, const fs::path& out_root,
                                 std::size_t workers);

// Closed polygon (or the profile mirrored across the axis) in one SVG path,
// viewBox fitted with a 5% margin, square aspect, y pointing up.
void emit_svg(const PlaneCurve& curve, const fs::path& path);
void emit_svg(const AxiProfile& profile, const fs::path& path);
// Several curves in one path, sharing one viewBox.
void emit_svg(std::span<const PlaneCurve> curves, const fs::path& path);

nlohmann::json to_json(const RunReport& report);
nlohmann::json summary_json(const std::vector<RunReport>& reports);
std::string summary_table(const std::vector<RunReport>& reports);

struct AcceptResult {
  std::vector<RunReport> reports;
  bool passed = false;
};
// Runs the catalog, writes summary.json into out_root and returns the reports.
AcceptResult accept(const std::vector<Scenario>& catalog, const fs::path& out_root,
                    std::size_t workers);

// Output root: $CURVEFLOW_OUT when set, otherwise ./curveflow-out.
fs::path default_output_root();

}  // namespace curveflow::lab
