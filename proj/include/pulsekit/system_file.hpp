#pragma once

// JSON system files, the preset registry, and CSV/JSON report writers used
// by the command-line tool.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pulsekit/analysis.hpp"
#include "pulsekit/control_system.hpp"
#include "pulsekit/impulse_sim.hpp"
#include "pulsekit/spectral_map.hpp"

namespace pulsekit {

/// {"name": ..., "time_unit": ..., "A": [[...], ...], "D": [...]}
struct SystemFile {
  MatrixXd a;
  VectorXd d;
  std::string time_unit = "time";
  std::optional<std::string> name;

  ControlSystem to_system() const;
};

/// Malformed input. Syntax errors carry a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(ErrorKind::InvalidInput, what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

SystemFile parse_system_file(const std::string& text);
SystemFile load_system_file(const std::string& path);
std::string dump_system_file(const SystemFile& file);

struct Preset {
  std::string id;
  SystemFile system;
  std::string provenance;
};

const std::vector<Preset>& preset_registry();
const Preset* find_preset(const std::string& id);

/// Shortest form that still carries 17 significant digits ("%.17g").
std::string format_number(double value);

/// Header `tau,r,method`, one row per sample, '\n' line endings.
std::string curve_csv(const SpectralCurve& curve);

/// Header `t,tag,x1..xn`.
std::string trajectory_csv(const ImpulseTrajectory& traj);

// JSON reports. Indices are 1-based to match the usual matrix notation.
nlohmann::ordered_json certificate_json(const SymmetrizationCertificate<double>& cert);
nlohmann::ordered_json report_json(const AnalysisReport& report, const std::string& time_unit);

}  // namespace pulsekit
