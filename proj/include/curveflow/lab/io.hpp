#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "curveflow/axisym.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/rescale.hpp"

// Flat-file formats. Curves: one "x y" pair per line. Profiles: the same with
// a "# topology=..." header line. Trajectories: a directory holding
// trajectory.csv, meta.json and snapshots/snap_NNNN.{xy,prof}.
namespace curveflow::io {

namespace fs = std::filesystem;

// Shortest round-tripping decimal form (%.17g).
std::string format_number(double value);

void write_curve(const fs::path& path, const PlaneCurve& curve);
// Blank lines and '#' comments are skipped; CRLF line ends are accepted.
// Throws Error{Io} when unreadable, Error{InvalidInput} with the line number
// on malformed content.
PlaneCurve read_curve(const fs::path& path);

void write_profile(const fs::path& path, const AxiProfile& profile);
AxiProfile read_profile(const fs::path& path);

// Returns the files written.
std::vector<fs::path> write_trajectory(const fs::path& dir, const Trajectory& traj);
std::vector<fs::path> write_trajectory(const fs::path& dir, const AxiTrajectory& traj);

using AnyTrajectory = std::variant<Trajectory, AxiTrajectory>;
AnyTrajectory read_trajectory(const fs::path& dir);

nlohmann::json to_json(const Event& event);
nlohmann::json to_json(const BlowupReport& report);

// Writes text, creating parent directories. Throws Error{Io}.
void write_text(const fs::path& path, const std::string& text);

// Minimal CSV writer: header then rows of numbers in format_number form.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void save(const fs::path& path) const;

 private:
  std::string text_;
  std::size_t columns_;
};

}  // namespace curveflow::io
