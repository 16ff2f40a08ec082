#include "curveflow/lab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "curveflow/error.hpp"

namespace curveflow::io {
namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string snapshot_name(std::size_t i, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%04zu.%s", i, ext);
  return buf;
}

void trim_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Parses "x y" lines; header lines starting with '#' are passed to on_comment.
template <class OnComment>
std::vector<Vec2> parse_points(const fs::path& path, OnComment&& on_comment) {
  std::istringstream in(read_text(path));
  std::vector<Vec2> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    trim_cr(line);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      on_comment(line.substr(first + 1));
      continue;
    }
    std::istringstream fields(line);
    Vec2 p;
    std::string extra;
    if (!(fields >> p.x >> p.y) || (fields >> extra)) {
      throw Error(ErrorKind::InvalidInput,
                  path.string() + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    pts.push_back(p);
  }
  return pts;
}

std::string points_text(std::span<const Vec2> pts) {
  std::string out;
  for (const Vec2& p : pts) out += format_number(p.x) + " " + format_number(p.y) + "\n";
  return out;
}

Topology parse_topology(const std::string& name, const fs::path& path) {
  for (Topology t : {Topology::TwoPoles, Topology::Periodic, Topology::Tube})
    if (to_string(t) == name) return t;
  throw Error(ErrorKind::InvalidInput, path.string() + ": unknown topology '" + name + "'");
}

Event event_from_json(const nlohmann::json& j) {
  const auto kind = parse_event_kind(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorKind::InvalidInput, "unknown event kind in meta.json");
  Event e{*kind, j.at("time").get<double>(), std::nullopt};
  if (j.contains("location")) e.location = Vec2{j["location"][0], j["location"][1]};
  return e;
}

// Times are the first column of trajectory.csv.
std::vector<double> read_times(const fs::path& csv) {
  std::istringstream in(read_text(csv));
  std::string line;
  std::getline(in, line);
  std::vector<double> times;
  while (std::getline(in, line)) {
    trim_cr(line);
    if (line.empty()) continue;
    times.push_back(std::stod(line.substr(0, line.find(','))));
  }
  return times;
}

nlohmann::json read_meta(const fs::path& dir) {
  try {
    return nlohmann::json::parse(read_text(dir / "meta.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, (dir / "meta.json").string() + ": " + e.what());
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw Error(ErrorKind::InvalidInput, "CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + format_number(values[i]);
  text_ += "\n";
}

void CsvWriter::save(const fs::path& path) const { write_text(path, text_); }

void write_curve(const fs::path& path, const PlaneCurve& curve) {
  write_text(path, points_text(curve.vertices()));
}

PlaneCurve read_curve(const fs::path& path) {
  return PlaneCurve(parse_points(path, [](const std::string&) {}));
}

void write_profile(const fs::path& path, const AxiProfile& profile) {
  std::string head = "# topology=" + std::string(to_string(profile.topology()));
  if (profile.topology() == Topology::Tube) head += " period=" + format_number(profile.period());
  write_text(path, head + "\n" + points_text(profile.samples()));
}

AxiProfile read_profile(const fs::path& path) {
  std::string topology;
  double period = 0.0;
  auto pts = parse_points(path, [&](const std::string& comment) {
    std::istringstream words(comment);
    std::string word;
    while (words >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = word.substr(0, eq), value = word.substr(eq + 1);
      if (key == "topology") topology = value;
      if (key == "period") period = std::stod(value);
    }
  });
  if (topology.empty())
    throw Error(ErrorKind::InvalidInput, path.string() + ": missing '# topology=' header");
  return AxiProfile(std::move(pts), parse_topology(topology, path), period);
}

nlohmann::json to_json(const Event& e) {
  nlohmann::json j{{"kind", std::string(to_string(e.kind))}, {"time", e.time}};
  if (e.location) j["location"] = {e.location->x, e.location->y};
  return j;
}

std::vector<fs::path> write_trajectory(const fs::path& dir, const Trajectory& traj) {
  std::vector<fs::path> files;
  CsvWriter csv({"t", "length", "area", "iso_ratio", "kmin", "kmax", "convex"});
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const Snapshot& s = traj.snapshots[i];
    const CurveMetrics& m = s.metrics;
    csv.row({s.time, m.length, m.enclosed_area, m.isoperimetric_ratio, m.min_curvature,
             m.max_curvature, m.convex ? 1.0 : 0.0});
    files.push_back(dir / "snapshots" / snapshot_name(i, "xy"));
    write_curve(files.back(), s.curve);
  }
  csv.save(dir / "trajectory.csv");
  files.push_back(dir / "trajectory.csv");
  nlohmann::json meta{{"kind", "curve"}, {"exponent", traj.law.exponent}, {"steps", traj.steps}};
  meta["events"] = nlohmann::json::array();
  for (const Event& e : traj.events) meta["events"].push_back(to_json(e));
  write_text(dir / "meta.json", meta.dump(2) + "\n");
  files.push_back(dir / "meta.json");
  return files;
}

std::vector<fs::path> write_trajectory(const fs::path& dir, const AxiTrajectory& traj) {
  std::vector<fs::path> files;
  CsvWriter csv({"t", "area", "volume", "rmin", "rmin_x", "hmin", "hmax", "mean_convex"});
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const AxiSnapshot& s = traj.snapshots[i];
    const AxiMetrics& m = s.metrics;
    csv.row({s.time, m.surface_area, m.enclosed_volume, m.min_radius, m.min_radius_location,
             m.min_mean_curvature, m.max_mean_curvature, m.mean_convex ? 1.0 : 0.0});
    files.push_back(dir / "snapshots" / snapshot_name(i, "prof"));
    write_profile(files.back(), s.profile);
  }
  csv.save(dir / "trajectory.csv");
  files.push_back(dir / "trajectory.csv");
  nlohmann::json meta{{"kind", "axi"},
                      {"steps", traj.steps},
                      {"initial_spacing", traj.initial_spacing}};
  meta["events"] = nlohmann::json::array();
  for (const Event& e : traj.events) meta["events"].push_back(to_json(e));
  write_text(dir / "meta.json", meta.dump(2) + "\n");
  files.push_back(dir / "meta.json");
  return files;
}

AnyTrajectory read_trajectory(const fs::path& dir) {
  const nlohmann::json meta = read_meta(dir);
  const std::vector<double> times = read_times(dir / "trajectory.csv");
  const std::string kind = meta.value("kind", "");
  std::vector<Event> events;
  for (const auto& e : meta.value("events", nlohmann::json::array())) events.push_back(event_from_json(e));

  if (kind == "curve") {
    Trajectory traj;
    traj.law.exponent = meta.value("exponent", 1.0);
    traj.steps = meta.value("steps", std::size_t{0});
    traj.events = std::move(events);
    for (std::size_t i = 0; i < times.size(); ++i) {
      PlaneCurve c = read_curve(dir / "snapshots" / snapshot_name(i, "xy"));
      const CurveMetrics m = curves::metrics(c);
      traj.snapshots.push_back({times[i], std::move(c), m});
    }
    return traj;
  }
  if (kind == "axi") {
    AxiTrajectory traj;
    traj.steps = meta.value("steps", std::size_t{0});
    traj.initial_spacing = meta.value("initial_spacing", 0.0);
    traj.events = std::move(events);
    for (std::size_t i = 0; i < times.size(); ++i) {
      AxiProfile p = read_profile(dir / "snapshots" / snapshot_name(i, "prof"));
      const AxiMetrics m = axi::metrics(p);
      traj.snapshots.push_back({times[i], std::move(p), m});
    }
    return traj;
  }
  throw Error(ErrorKind::InvalidInput, (dir / "meta.json").string() + ": unknown kind '" + kind + "'");
}

nlohmann::json to_json(const BlowupReport& report) {
  auto finite = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json frames = nlohmann::json::array();
  for (const BlowupFrame& b : report.frames) {
    frames.push_back({{"snapshot", b.frame.snapshot_index},
                      {"center", {b.frame.center.x, b.frame.center.y}},
                      {"reference_time", b.frame.reference_time},
                      {"scale", b.frame.scale},
                      {"rescaled_time", b.frame.rescaled_time},
                      {"probe_vertex", b.probe_vertex},
                      {"probe_offset", {b.probe_offset.x, b.probe_offset.y}},
                      {"curvature", b.curvature},
                      {"residuals",
                       {{"plane", finite(b.residuals.plane)},
                        {"round", finite(b.residuals.round)},
                        {"cylinder", finite(b.residuals.cylinder)},
                        {"min_curvature", finite(b.residuals.min_curvature)}}},
                      {"classification", std::string(to_string(b.classification))}});
  }
  nlohmann::json residuals = nlohmann::json::array();
  for (double r : report.fit_residuals) residuals.push_back(finite(r));
  return {{"frames", frames},
          {"fit_residuals", residuals},
          {"limit_classification", std::string(to_string(report.limit_classification))},
          {"late_frames_convex", report.late_frames_convex}};
}

}  // namespace curveflow::io
