#include "pulsekit/system_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pulsekit {

using nlohmann::json;
using nlohmann::ordered_json;

ControlSystem SystemFile::to_system() const { return ControlSystem(a, DiagonalControl(d), time_unit); }

namespace {

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

double require_number(const json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + " must be a number");
  return value.get<double>();
}

}  // namespace

SystemFile parse_system_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, column] = line_and_column(text, byte);
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         e.what(),
                     line, column);
  }
  if (!doc.is_object()) throw ParseError("system file must be a JSON object");

  SystemFile out;
  if (!doc.contains("A") || !doc["A"].is_array() || doc["A"].empty())
    throw ParseError("field \"A\" must be a non-empty array of rows");
  const auto& rows = doc["A"];
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.a.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ParseError("A must be square: row " + std::to_string(i + 1) + " does not have " + std::to_string(n) +
                       " entries");
    for (Eigen::Index j = 0; j < n; ++j)
      out.a(i, j) = require_number(row[static_cast<std::size_t>(j)],
                                   "A[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
  }

  if (!doc.contains("D") || !doc["D"].is_array()) throw ParseError("field \"D\" must be an array");
  const auto& diag = doc["D"];
  if (static_cast<Eigen::Index>(diag.size()) != n)
    throw ParseError("D has " + std::to_string(diag.size()) + " entries but A is " + std::to_string(n) + "x" +
                     std::to_string(n));
  out.d.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.d(i) = require_number(diag[static_cast<std::size_t>(i)], "D[" + std::to_string(i + 1) + "]");

  if (doc.contains("time_unit")) {
    if (!doc["time_unit"].is_string()) throw ParseError("field \"time_unit\" must be a string");
    out.time_unit = doc["time_unit"].get<std::string>();
  }
  if (doc.contains("name") && !doc["name"].is_null()) {
    if (!doc["name"].is_string()) throw ParseError("field \"name\" must be a string");
    out.name = doc["name"].get<std::string>();
  }

  // Surface semantic problems (non-positive D etc.) as input errors too.
  try {
    (void)out.to_system();
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return out;
}

SystemFile load_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system_file(buf.str());
}

std::string dump_system_file(const SystemFile& file) {
  ordered_json doc;
  if (file.name) doc["name"] = *file.name;
  doc["time_unit"] = file.time_unit;
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < file.a.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < file.a.cols(); ++j) row.push_back(file.a(i, j));
    rows.push_back(std::move(row));
  }
  doc["A"] = std::move(rows);
  ordered_json diag = ordered_json::array();
  for (Eigen::Index i = 0; i < file.d.size(); ++i) diag.push_back(file.d(i));
  doc["D"] = std::move(diag);
  return doc.dump(2) + "\n";
}

namespace {

SystemFile make_system(std::initializer_list<std::initializer_list<double>> a, std::initializer_list<double> d,
                       std::string unit, std::string name) {
  SystemFile f;
  const auto n = static_cast<Eigen::Index>(a.size());
  f.a.resize(n, n);
  Eigen::Index i = 0;
  for (const auto& row : a) {
    Eigen::Index j = 0;
    for (double v : row) f.a(i, j++) = v;
    ++i;
  }
  f.d.resize(n);
  i = 0;
  for (double v : d) f.d(i++) = v;
  f.time_unit = std::move(unit);
  f.name = std::move(name);
  return f;
}

std::vector<Preset> build_registry() {
  std::vector<Preset> out;
  out.push_back({"sth-roundworm",
                 make_system({{-0.0028, 1.3e-8}, {5000, -0.016}}, {0.62875, 1}, "days", "Ascaris lumbricoides"),
                 "Soil-transmitted helminth model, roundworm (Ascaris lumbricoides): adult worms in host, larvae in "
                 "environment; D from drug efficacy at 75% coverage of school-aged children (50% of hosts)"});
  out.push_back({"sth-whipworm",
                 make_system({{-0.0028, 2.089e-7}, {1000, -0.05}}, {0.8125, 1}, "days", "Trichuris trichiura"),
                 "Soil-transmitted helminth model, whipworm (Trichuris trichiura): same life cycle and coverage "
                 "assumptions, lowest drug efficacy"});
  out.push_back({"sth-hookworm",
                 make_system({{-0.0014, 1.18e-7}, {1500, -0.082}}, {0.64375, 1}, "days", "Ancylostoma duodenale"),
                 "Soil-transmitted helminth model, hookworm (Ancylostoma duodenale): same life cycle and coverage "
                 "assumptions"});
  out.push_back({"rotation-ctrex", make_system({{0, -1}, {1, 0}}, {1, 0.25}, "time", "rotation counterexample"),
                 "Rotation generator with D = diag(1, d), d = 0.25: complex spectrum, r(tau) not convex"});
  out.push_back({"fig1-topleft", make_system({{0.2, 1}, {1, -0.2}}, {0.5, 0.25}, "time", "self-promoting weak class"),
                 "Trichotomy example A = [[0.2, 1], [1, -0.2]], D = diag(0.5, 0.25): r increasing from tau = 0"});
  out.push_back({"fig1-bottomleft", make_system({{-2, 1}, {1, 1}}, {0.5, 0.25}, "time", "interior optimum"),
                 "Trichotomy example A = [[-2, 1], [1, 1]], D = diag(0.5, 0.25): r dips below 1, then crosses it"});
  out.push_back({"fig1-stable", make_system({{-2, 1}, {1, -2}}, {0.5, 0.25}, "time", "stable"),
                 "Trichotomy example A = [[-2, 1], [1, -2]], D = diag(0.5, 0.25): stable A, r strictly decreasing"});
  out.push_back({"scalar-demo", make_system({{0.1}}, {0.5}, "time", "unstructured population"),
                 "Scalar population x' = a x with a = 0.1 and jump factor d = 0.5: r(tau) = d e^{a tau}"});
  return out;
}

}  // namespace

const std::vector<Preset>& preset_registry() {
  static const std::vector<Preset> registry = build_registry();
  return registry;
}

const Preset* find_preset(const std::string& id) {
  for (const auto& p : preset_registry())
    if (p.id == id) return &p;
  return nullptr;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string curve_csv(const SpectralCurve& curve) {
  std::string out = "tau,r,method\n";
  for (std::size_t i = 0; i < curve.taus.size(); ++i) {
    out += format_number(curve.taus[i]);
    out += ',';
    out += format_number(curve.radii[i]);
    out += ',';
    out += to_string(curve.methods[i]);
    out += '\n';
  }
  return out;
}

std::string trajectory_csv(const ImpulseTrajectory& traj) {
  std::string out = "t,tag";
  const Eigen::Index n = traj.samples.empty() ? 0 : traj.samples.front().x.size();
  for (Eigen::Index i = 0; i < n; ++i) out += ",x" + std::to_string(i + 1);
  out += '\n';
  for (const auto& s : traj.samples) {
    out += format_number(s.t);
    out += ',';
    out += to_string(s.tag);
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
      out += ',';
      out += format_number(s.x(i));
    }
    out += '\n';
  }
  return out;
}

ordered_json certificate_json(const SymmetrizationCertificate<double>& cert) {
  ordered_json out;
  out["verdict"] = to_string(cert.verdict);
  if (cert.symmetrizable()) {
    out["T"] = std::vector<double>(cert.t.data(), cert.t.data() + cert.t.size());
  } else {
    out["T"] = nullptr;
  }
  out["residual"] = cert.residual;
  if (cert.pair_witness) {
    out["witness"] = {{"pair", {cert.pair_witness->first + 1, cert.pair_witness->second + 1}}};
  } else if (cert.cycle_witness) {
    std::vector<Eigen::Index> cycle;
    for (auto i : cert.cycle_witness->cycle) cycle.push_back(i + 1);
    out["witness"] = {{"cycle", cycle},
                      {"forward_product", cert.cycle_witness->forward_product},
                      {"reverse_product", cert.cycle_witness->reverse_product}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

ordered_json report_json(const AnalysisReport& report, const std::string& time_unit) {
  auto optional_number = [](const std::optional<double>& v) -> ordered_json {
    if (v) return *v;
    return nullptr;
  };
  ordered_json out;
  out["regime"] = to_string(report.regime);
  out["lambda_max"] = report.lambda_max;
  out["k"] = report.k ? ordered_json(*report.k + 1) : ordered_json(nullptr);
  out["tau_s"] = optional_number(report.tau_s);
  out["tau_m"] = optional_number(report.tau_m);
  out["r_at_tau_m"] = optional_number(report.r_at_tau_m);
  ordered_json diags = ordered_json::array();
  for (const auto& d : report.diagnostics) {
    ordered_json entry;
    entry["check"] = d.check;
    entry["passed"] = d.passed;
    entry["detail"] = d.detail;
    diags.push_back(std::move(entry));
  }
  out["diagnostics"] = std::move(diags);
  out["time_unit"] = time_unit;
  return out;
}

}  // namespace pulsekit
