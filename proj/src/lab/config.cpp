#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "curveflow/error.hpp"
#include "curveflow/lab/lab.hpp"

namespace curveflow::lab {
namespace {

namespace pt = boost::property_tree;

[[noreturn]] void fail(const std::string& scenario, const std::string& key, const std::string& why) {
  throw Error(ErrorKind::Config, "[" + scenario + "] " + key + ": " + why);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Reads keys of one section and remembers which were consumed.
class SectionReader {
 public:
  SectionReader(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

  const std::string& name() const { return name_; }

  bool has(const std::string& key) const { return raw(key).has_value(); }

  std::string text(const std::string& key) {
    const auto v = raw(key);
    if (!v) fail(name_, key, "missing (all keys must be explicit)");
    used_.insert(key);
    return trim(*v);
  }

  double number(const std::string& key) {
    const std::string v = text(key);
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || errno == ERANGE || std::isnan(d))
      fail(name_, key, "expected a number, got '" + v + "'");
    return d;
  }

  std::size_t count(const std::string& key) {
    const double d = number(key);
    if (!(d >= 0.0) || d != std::floor(d) || d > 1e15)
      fail(name_, key, "expected a non-negative integer");
    return static_cast<std::size_t>(d);
  }

  std::vector<std::string> list(const std::string& key, char sep = ',') {
    return split(text(key), sep);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : tree_) {
      if (!used_.count(key)) fail(name_, key, "unknown key");
    }
  }

 private:
  std::optional<std::string> raw(const std::string& key) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '/'));
    return v ? std::optional<std::string>(*v) : std::nullopt;
  }

  std::string name_;
  const pt::ptree& tree_;
  std::set<std::string> used_;
};

void require(bool ok, SectionReader& r, const std::string& key, const std::string& why) {
  if (!ok) fail(r.name(), key, why);
}

const std::map<std::string, std::vector<std::string>>& analysis_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"embeddedness", {}},
      {"radius-law", {"radius.t_max", "tolerance.radius"}},
      {"area-law", {"tolerance.slope", "tolerance.extinction"}},
      {"roundness", {"tolerance.roundness", "tolerance.isoperimetric"}},
      {"convexification", {"tolerance.lifetime_bound"}},
      {"eccentricity", {"tolerance.eccentricity_drift", "tolerance.ellipse_residual"}},
      {"length-growth", {}},
      {"disjointness", {}},
      {"neck", {"tolerance.neck_location", "tolerance.self_similar"}},
      {"torus", {"tolerance.circle_spacings", "tolerance.core_radius"}},
      {"blowup", {"blowup.probes", "blowup.offset"}},
      {"oracle-self-check", {"tolerance.oracle"}},
      {"grim-reaper", {"reaper.samples", "reaper.half_width", "reaper.time", "tolerance.reaper"}},
  };
  return keys;
}

const std::map<ScenarioKind, std::set<std::string>>& allowed_analyses() {
  static const std::map<ScenarioKind, std::set<std::string>> allowed = {
      {ScenarioKind::CurveFlow,
       {"embeddedness", "radius-law", "area-law", "roundness", "convexification", "eccentricity",
        "length-growth", "disjointness"}},
      {ScenarioKind::AxiFlow, {"radius-law", "neck", "torus"}},
      {ScenarioKind::RescaleAnalysis, {"radius-law", "neck", "torus", "blowup"}},
      {ScenarioKind::OracleCheck, {"oracle-self-check", "grim-reaper"}},
  };
  return allowed;
}

const std::map<std::string, std::vector<std::string>>& shape_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"circle", {"radius"}},
      {"ellipse", {"a", "b"}},
      {"peanut", {"amplitude"}},
      {"square", {"side"}},
      {"spiral", {"inner", "outer", "turns"}},
      {"nested", {"outer_radius", "inner_a", "inner_b"}},
      {"sphere", {"radius"}},
      {"dumbbell", {"lobe_radius", "tube_radius", "tube_length"}},
      {"torus", {"ring_radius", "tube_radius"}},
      {"cylinder", {"radius", "period"}},
  };
  return keys;
}

bool is_axi_shape(const std::string& shape) {
  return shape == "sphere" || shape == "dumbbell" || shape == "torus" || shape == "cylinder";
}

ScenarioKind parse_kind(SectionReader& r) {
  const std::string kind = r.text("kind");
  for (ScenarioKind k : {ScenarioKind::CurveFlow, ScenarioKind::AxiFlow,
                         ScenarioKind::RescaleAnalysis, ScenarioKind::OracleCheck}) {
    if (to_string(k) == kind) return k;
  }
  fail(r.name(), "kind", "unknown kind '" + kind + "'");
}

void parse_shape(SectionReader& r, Scenario& s) {
  s.shape.name = r.text("shape");
  const auto it = shape_keys().find(s.shape.name);
  require(it != shape_keys().end(), r, "shape", "unknown shape '" + s.shape.name + "'");
  const bool axi = s.kind != ScenarioKind::CurveFlow;
  require(is_axi_shape(s.shape.name) == axi, r, "shape",
          "'" + s.shape.name + "' is not available for kind " + std::string(to_string(s.kind)));
  s.shape.samples = r.count("shape.samples");
  require(s.shape.samples >= 8, r, "shape.samples", "must be at least 8");
  for (const std::string& p : it->second) {
    const double v = r.number("shape." + p);
    require(v > 0.0 || (p == "amplitude" && v == 0.0), r, "shape." + p, "must be positive");
    s.shape.params[p] = v;
  }
  const auto& q = s.shape.params;
  const std::string& n = s.shape.name;
  if (n == "peanut") require(q.at("amplitude") < 1.0, r, "shape.amplitude", "must be below 1");
  if (n == "spiral") require(q.at("outer") > q.at("inner"), r, "shape.outer", "must exceed shape.inner");
  if (n == "nested")
    require(std::max(q.at("inner_a"), q.at("inner_b")) < q.at("outer_radius"), r,
            "shape.inner_a", "inner ellipse must fit inside the outer circle");
  if (n == "dumbbell")
    require(q.at("tube_radius") < q.at("lobe_radius"), r, "shape.tube_radius",
            "must be smaller than shape.lobe_radius");
  if (n == "torus")
    require(q.at("tube_radius") < q.at("ring_radius"), r, "shape.tube_radius",
            "must be smaller than shape.ring_radius");
}

void parse_flow(SectionReader& r, Scenario& s) {
  s.law.exponent = r.number("law.p");
  require(s.law.exponent > 0.0 && s.law.exponent <= SpeedLaw::kMaxExponent, r, "law.p",
          "must lie in (0, 8]");
  if (s.kind != ScenarioKind::CurveFlow)
    require(s.law.exponent == 1.0, r, "law.p", "axisymmetric flows support only p = 1");

  FlowConfig& f = s.flow;
  f.cfl_factor = r.number("flow.cfl");
  require(f.cfl_factor > 0.0 && f.cfl_factor <= 1.0, r, "flow.cfl", "must lie in (0, 1]");
  f.resample_every = r.count("flow.resample_every");
  require(f.resample_every >= 1, r, "flow.resample_every", "must be at least 1");
  f.target_vertex_spacing = r.number("flow.target_spacing");
  require(f.target_vertex_spacing >= 0.0, r, "flow.target_spacing", "must be non-negative");
  f.min_vertices = r.count("flow.min_vertices");
  require(f.min_vertices >= 8, r, "flow.min_vertices", "must be at least 8");
  f.max_vertices = r.count("flow.max_vertices");
  require(f.max_vertices >= f.min_vertices, r, "flow.max_vertices",
          "must be at least flow.min_vertices");
  f.stop_area_fraction = r.number("flow.stop_area_fraction");
  require(f.stop_area_fraction > 0.0 && f.stop_area_fraction < 1.0, r,
          "flow.stop_area_fraction", "must lie in (0, 1)");
  f.max_curvature_factor = r.number("flow.max_curvature_factor");
  require(f.max_curvature_factor > 1.0, r, "flow.max_curvature_factor", "must exceed 1");
  f.max_steps = r.count("flow.max_steps");
  require(f.max_steps >= 1, r, "flow.max_steps", "must be at least 1");
  f.snapshot_count = r.count("flow.snapshots");
  require(f.snapshot_count >= 1, r, "flow.snapshots", "must be at least 1");
  f.stop_time = r.number("flow.stop_time");
  require(f.stop_time > 0.0, r, "flow.stop_time", "must be positive");
  f.validate();
}

LimitClass parse_class(SectionReader& r, const std::string& name) {
  for (LimitClass c : {LimitClass::PlaneLike, LimitClass::RoundLike, LimitClass::CylinderLike,
                       LimitClass::ConvexNoncompact, LimitClass::Unclassified}) {
    if (to_string(c) == name) return c;
  }
  fail(r.name(), "blowup.expected", "unknown classification '" + name + "'");
}

void parse_analyses(SectionReader& r, Scenario& s) {
  s.analyses = r.list("analyses");
  std::set<std::string> seen;
  for (const std::string& a : s.analyses) {
    require(seen.insert(a).second, r, "analyses", "'" + a + "' listed twice");
    require(analysis_keys().count(a) > 0, r, "analyses", "unknown analysis '" + a + "'");
    require(allowed_analyses().at(s.kind).count(a) > 0, r, "analyses",
            "'" + a + "' is not available for kind " + std::string(to_string(s.kind)));
    for (const std::string& key : analysis_keys().at(a)) {
      const double v = r.number(key);
      require(v >= 0.0 && std::isfinite(v), r, key, "must be finite and non-negative");
      s.settings[key] = v;
    }
  }
  const std::string& shape = s.shape.name;
  auto needs = [&](const char* analysis, bool ok, const std::string& why) {
    if (seen.count(analysis)) require(ok, r, "analyses", std::string(analysis) + " " + why);
  };
  needs("area-law", s.law.exponent == 1.0, "requires law.p = 1");
  needs("roundness", s.law.exponent == 1.0, "requires law.p = 1");
  needs("convexification", s.law.exponent == 1.0, "requires law.p = 1");
  needs("convexification", seen.count("area-law") > 0, "requires area-law");
  needs("eccentricity", shape == "ellipse", "requires shape = ellipse");
  needs("disjointness", shape == "nested", "requires shape = nested");
  needs("radius-law", shape == "circle" || shape == "sphere" || shape == "cylinder",
        "requires a circle, sphere or cylinder");
  needs("neck", shape == "dumbbell", "requires shape = dumbbell");
  needs("torus", shape == "torus", "requires shape = torus");
  needs("blowup", seen.count("neck") > 0, "requires neck");
  if (s.kind == ScenarioKind::RescaleAnalysis)
    require(seen.count("blowup") > 0, r, "analyses", "rescale-analysis requires blowup");
  if (seen.count("area-law") || seen.count("roundness"))
    require(s.flow.snapshot_count >= 10, r, "flow.snapshots", "area-law needs at least 10");

  if (seen.count("radius-law"))
    require(s.setting("radius.t_max") > 0.0, r, "radius.t_max", "must be positive");
  if (seen.count("grim-reaper")) {
    require(s.setting("reaper.samples") >= 16 &&
                s.setting("reaper.samples") == std::floor(s.setting("reaper.samples")),
            r, "reaper.samples", "must be an integer >= 16");
    require(s.setting("reaper.half_width") > 0.0 &&
                s.setting("reaper.half_width") < std::acos(-1.0) / 2,
            r, "reaper.half_width", "must lie in (0, pi/2)");
  }
  if (seen.count("blowup")) {
    require(s.setting("blowup.probes") >= 3 &&
                s.setting("blowup.probes") == std::floor(s.setting("blowup.probes")),
            r, "blowup.probes", "must be an integer >= 3");
    for (const std::string& e : r.list("blowup.exponents")) {
      char* end = nullptr;
      const double v = std::strtod(e.c_str(), &end);
      require(*end == '\0' && v > 0.0, r, "blowup.exponents", "expected positive numbers");
      s.blowup_exponents.push_back(v);
    }
    for (const std::string& group : r.list("blowup.expected", ';')) {
      std::vector<LimitClass> accepted;
      for (const std::string& c : split(group, '|')) accepted.push_back(parse_class(r, c));
      s.blowup_expected.push_back(std::move(accepted));
    }
    require(!s.blowup_exponents.empty(), r, "blowup.exponents", "must not be empty");
    require(s.blowup_expected.size() == s.blowup_exponents.size(), r, "blowup.expected",
            "needs one entry per exponent");
  }
}

bool valid_name(const std::string& name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::CurveFlow: return "curve-flow";
    case ScenarioKind::AxiFlow: return "axi-flow";
    case ScenarioKind::RescaleAnalysis: return "rescale-analysis";
    case ScenarioKind::OracleCheck: return "oracle-check";
  }
  return "unknown";
}

double Scenario::setting(const std::string& key) const {
  const auto it = settings.find(key);
  if (it == settings.end()) throw Error(ErrorKind::Config, "[" + name + "] " + key + ": not set");
  return it->second;
}

std::vector<Scenario> parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::Config, "line " + std::to_string(e.line()) + ": " + e.message());
  }

  std::vector<Scenario> out;
  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty())
      throw Error(ErrorKind::Config, name + ": key outside a scenario section");
    if (!valid_name(name))
      throw Error(ErrorKind::Config, "[" + name + "]: scenario names use letters, digits, _ and -");
    SectionReader r(name, section);
    Scenario s;
    s.name = name;
    s.kind = parse_kind(r);
    if (s.kind != ScenarioKind::OracleCheck) {
      parse_shape(r, s);
      parse_flow(r, s);
    }
    parse_analyses(r, s);
    r.reject_unknown();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Scenario> load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, "cannot read configuration " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace curveflow::lab
