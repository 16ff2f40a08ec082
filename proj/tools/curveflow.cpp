// curveflow: run scenario files, the acceptance catalog, oracles and
// parabolic rescaling of saved trajectories.
//
// Exit status: 0 success, 1 a check failed, 2 usage or configuration error.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "curveflow/error.hpp"
#include "curveflow/lab/io.hpp"
#include "curveflow/lab/lab.hpp"
#include "curveflow/oracle.hpp"
#include "curveflow/rescale.hpp"
#include "reference.hpp"

namespace fs = std::filesystem;
using namespace curveflow;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw Error(ErrorKind::InvalidInput, "not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::InvalidInput, "expected a comma-separated list of numbers");
  return out;
}

double number(const std::vector<std::string>& args, std::size_t i, const char* what) {
  if (i >= args.size()) throw Error(ErrorKind::InvalidInput, std::string("missing ") + what);
  return parse_numbers(args[i]).at(0);
}

void print_reports(const std::vector<lab::RunReport>& reports) {
  std::cout << lab::summary_table(reports);
}

int run_config(const std::string& config, const std::string& out, std::size_t workers) {
  const auto scenarios = lab::load_config(config);
  const fs::path root = out.empty() ? lab::default_output_root() : fs::path(out);
  const auto reports = lab::run_batch(scenarios, root, workers);
  io::write_text(root / "summary.json", lab::summary_json(reports).dump(2) + "\n");
  print_reports(reports);
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
  return ok ? kOk : kCheckFailed;
}

int run_accept(const std::string& catalog, const std::string& out, std::size_t workers) {
  const auto scenarios = lab::load_config(catalog);
  const fs::path root = out.empty() ? lab::default_output_root() : fs::path(out);
  const auto result = lab::accept(scenarios, root, workers);
  print_reports(result.reports);
  std::cout << "summary: " << (root / "summary.json").string() << "\n"
            << (result.passed ? "ACCEPT PASS" : "ACCEPT FAIL") << "\n";
  return result.passed ? kOk : kCheckFailed;
}

int run_oracle(const std::string& kind, const std::vector<std::string>& args) {
  using oracle::Shrinker;
  auto shrinker = [&](Shrinker s) {
    std::printf("%.17g\n", oracle::shrinker_radius({s, number(args, 0, "r0")}, number(args, 1, "t")));
    return kOk;
  };
  if (kind == "circle") return shrinker(Shrinker::Circle);
  if (kind == "sphere") return shrinker(Shrinker::Sphere);
  if (kind == "cylinder") return shrinker(Shrinker::Cylinder);
  if (kind == "power") {
    std::printf("%.17g\n", oracle::power_circle_radius(number(args, 0, "r0"), number(args, 1, "p"),
                                                       number(args, 2, "t")));
    return kOk;
  }
  if (kind == "grim-reaper") {
    const auto pts = oracle::grim_reaper(static_cast<std::size_t>(number(args, 0, "n")),
                                         number(args, 1, "half_width"));
    for (const Vec2& p : pts) std::printf("%s %s\n", io::format_number(p.x).c_str(), io::format_number(p.y).c_str());
    return kOk;
  }
  if (kind == "reaper-translation") {
    const auto tc = oracle::grim_reaper_translation(static_cast<std::size_t>(number(args, 0, "n")),
                                                    number(args, 1, "half_width"),
                                                    number(args, 2, "t"));
    std::printf("time %.17g steps %zu max_deviation %.6g\n", tc.time, tc.steps, tc.max_deviation);
    return kOk;
  }
  if (kind == "bowl") {
    const auto b = oracle::bowl_soliton(number(args, 0, "rho_max"),
                                        args.size() > 1 ? static_cast<std::size_t>(number(args, 1, "n")) : 64);
    for (std::size_t i = 0; i < b.rho.size(); ++i)
      std::printf("%s %s\n", io::format_number(b.rho[i]).c_str(), io::format_number(b.height[i]).c_str());
    return kOk;
  }
  if (kind == "self-check") {
    const auto checks = reference::check_oracles();
    for (const auto& c : checks)
      std::printf("%-36s oracle %.15g reference %.15g error %.3g %s\n", c.name.c_str(), c.oracle,
                  c.reference, c.error(), c.passed() ? "ok" : "FAIL");
    return reference::all_passed(checks) ? kOk : kCheckFailed;
  }
  throw Error(ErrorKind::InvalidInput,
              "unknown oracle '" + kind +
                  "' (circle, sphere, cylinder, power, grim-reaper, reaper-translation, bowl, self-check)");
}

int run_rescale(const std::string& dir, const std::string& center_text, double T,
                const std::string& scales_text, double offset, const std::string& out) {
  const auto traj = io::read_trajectory(dir);
  const auto c = parse_numbers(center_text);
  const Vec2 center{c.at(0), c.size() > 1 ? c[1] : 0.0};
  const fs::path root = out.empty() ? fs::path(dir) / "rescaled" : fs::path(out);

  std::vector<double> scales;
  if (!scales_text.empty()) {
    scales = parse_numbers(scales_text);
  } else {
    auto add = [&](double t) {
      if (t < T) scales.push_back(std::sqrt(offset / (T - t)));
    };
    std::visit([&](const auto& tr) { for (const auto& s : tr.snapshots) add(s.time); }, traj);
  }

  std::vector<std::string> notices;
  std::vector<RescaleFrame> frames;
  if (const auto* curve = std::get_if<Trajectory>(&traj)) {
    frames = rescale::parabolic_rescale(*curve, center, T, scales, offset, &notices);
  } else {
    if (center.y != 0.0)
      throw Error(ErrorKind::InvalidInput, "axisymmetric rescale center must lie on the axis");
    frames = rescale::parabolic_rescale(std::get<AxiTrajectory>(traj), center.x, T, scales, offset,
                                        &notices);
  }
  for (const auto& n : notices) std::cerr << "notice: " << n << "\n";

  io::CsvWriter csv({"frame", "snapshot", "scale", "rescaled_time", "invariant"});
  for (std::size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    const RescaleFrame& f = frames[i];
    double invariant = 0.0;
    if (const auto* curve = std::get_if<PlaneCurve>(&f.geometry)) {
      std::snprintf(name, sizeof name, "frame_%04zu.xy", i);
      io::write_curve(root / "frames" / name, *curve);
      invariant = curves::metrics(*curve).isoperimetric_ratio;
    } else {
      const auto& profile = std::get<AxiProfile>(f.geometry);
      std::snprintf(name, sizeof name, "frame_%04zu.prof", i);
      io::write_profile(root / "frames" / name, profile);
      invariant = axi::metrics(profile).min_radius;
    }
    csv.row({static_cast<double>(i), static_cast<double>(f.snapshot_index), f.scale,
             f.rescaled_time, invariant});
  }
  csv.save(root / "frames.csv");
  std::cout << frames.size() << " frames written to " << root.string() << " (" << notices.size()
            << " skipped)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curve-shortening and mean curvature flow experiments"};
  app.require_subcommand(1);
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());

  std::string config, out, catalog = CURVEFLOW_CATALOG;
  std::size_t workers = hw;
  auto* run = app.add_subcommand("run", "run the scenarios of a configuration file");
  run->add_option("config", config, "scenario file (INI)")->required();
  run->add_option("--out", out, "output root (default $CURVEFLOW_OUT or ./curveflow-out)");
  run->add_option("--workers", workers, "concurrent scenarios")->check(CLI::PositiveNumber);

  auto* acc = app.add_subcommand("accept", "run the acceptance catalog");
  acc->add_option("--catalog", catalog, "catalog file");
  acc->add_option("--out", out, "output root (default $CURVEFLOW_OUT or ./curveflow-out)");
  acc->add_option("--workers", workers, "concurrent scenarios")->check(CLI::PositiveNumber);

  std::string kind;
  std::vector<std::string> params;
  auto* orc = app.add_subcommand("oracle", "evaluate a reference solution");
  orc->add_option("kind", kind,
                  "circle|sphere|cylinder r0 t; power r0 p t; grim-reaper n half_width; "
                  "reaper-translation n half_width t; bowl rho_max [n]; self-check")
      ->required();
  orc->add_option("params", params, "numeric parameters");

  std::string dir, center, scales;
  double T = 0.0, offset = 1.0;
  auto* res = app.add_subcommand("rescale", "parabolic rescaling of a saved trajectory");
  res->add_option("trajectory-dir", dir, "directory written by `run`")->required();
  res->add_option("center", center, "x,y (curves) or x (axisymmetric)")->required();
  res->add_option("T", T, "reference time")->required();
  res->add_option("--scales", scales, "comma-separated increasing factors (default: one per snapshot)");
  res->add_option("--offset", offset, "time offset c: frames use t = T - c / lambda^2");
  res->add_option("--out", out, "output directory (default <trajectory-dir>/rescaled)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return run_config(config, out, workers);
    if (*acc) return run_accept(catalog, out, workers);
    if (*orc) return run_oracle(kind, params);
    if (*res) return run_rescale(dir, center, T, scales, offset, out);
  } catch (const Error& e) {
    std::cerr << "curveflow: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "curveflow: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
