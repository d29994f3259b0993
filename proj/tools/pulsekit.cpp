// pulsekit: command-line front end for periodic impulsive control analysis.
//
//   pulsekit symmetrize --input sys.json
//   pulsekit curve      --preset sth-roundworm --tau-max 600 --samples 601 --out curve.csv
//   pulsekit analyze    --preset fig1-stable
//   pulsekit simulate   --preset sth-roundworm --tau 40 --periods 100 --x0 1,1 --out traj.csv
//   pulsekit preset     [--preset ID [--out sys.json]]
//
// Exit codes: 0 success, 1 input/IO error, 2 negative symmetrizability verdict.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pulsekit/analysis.hpp"
#include "pulsekit/impulse_sim.hpp"
#include "pulsekit/spectral_map.hpp"
#include "pulsekit/system_file.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNegative = 2;

struct Source {
  std::string input;
  std::string preset;
};

void add_source(CLI::App* cmd, Source& src) {
  auto* in = cmd->add_option("--input", src.input, "System file (JSON)");
  auto* pre = cmd->add_option("--preset", src.preset, "Built-in preset id");
  in->excludes(pre);
  pre->excludes(in);
}

pulsekit::SystemFile resolve(const Source& src) {
  if (!src.preset.empty()) {
    const auto* p = pulsekit::find_preset(src.preset);
    if (!p) throw pulsekit::ParseError("unknown preset '" + src.preset + "' (see `pulsekit preset`)");
    return p->system;
  }
  if (src.input.empty()) throw pulsekit::ParseError("one of --input or --preset is required");
  return pulsekit::load_system_file(src.input);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw pulsekit::Error(pulsekit::ErrorKind::InvalidInput, "cannot write " + path);
  out << content;
  out.flush();
  if (!out) throw pulsekit::Error(pulsekit::ErrorKind::InvalidInput, "failed writing " + path);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size()) throw pulsekit::ParseError("bad number in --x0: '" + item + "'");
    values.push_back(v);
  }
  return values;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string format_matrix(const pulsekit::MatrixXd& a) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out += i ? ",[" : "[";
    for (Eigen::Index j = 0; j < a.cols(); ++j) out += (j ? "," : "") + short_number(a(i, j));
    out += "]";
  }
  return out + "]";
}

std::string format_diag(const pulsekit::VectorXd& d) {
  std::string out = "diag(";
  for (Eigen::Index i = 0; i < d.size(); ++i) out += (i ? "," : "") + short_number(d(i));
  return out + ")";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic impulsive control: symmetrizability, spectral-radius curves, optimal periods"};
  app.require_subcommand(1);

  Source src;
  double tau_max = 0, tau = 0;
  int samples = 0, periods = 0;
  std::string x0_text, out_path;

  auto* sym_cmd = app.add_subcommand("symmetrize", "Certify diagonal symmetrizability of A");
  add_source(sym_cmd, src);

  auto* curve_cmd = app.add_subcommand("curve", "Sample tau -> r(D e^{tau A}) as CSV");
  add_source(curve_cmd, src);
  curve_cmd->add_option("--tau-max", tau_max, "Right end of the tau grid")->required();
  curve_cmd->add_option("--samples", samples, "Number of grid points (>= 2)")->required();
  curve_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

  auto* analyze_cmd = app.add_subcommand("analyze", "Classify the regime and compute tau_s, tau_m");
  add_source(analyze_cmd, src);

  auto* sim_cmd = app.add_subcommand("simulate", "Simulate the pulsed system");
  add_source(sim_cmd, src);
  sim_cmd->add_option("--tau", tau, "Pulse period")->required();
  sim_cmd->add_option("--periods", periods, "Number of periods (>= 1)")->required();
  sim_cmd->add_option("--x0", x0_text, "Initial state, comma separated (default all ones)");
  sim_cmd->add_option("--out", out_path, "Trajectory CSV path");

  auto* preset_cmd = app.add_subcommand("preset", "List presets, or export one as a system file");
  preset_cmd->add_option("--preset", src.preset, "Preset id to export");
  preset_cmd->add_option("--out", out_path, "Export path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*sym_cmd) {
      const auto system = resolve(src).to_system();
      std::cout << pulsekit::certificate_json(system.certificate()).dump(2) << "\n";
      return system.symmetrizable() ? kExitOk : kExitNegative;
    }
    if (*curve_cmd) {
      const auto system = resolve(src).to_system();
      const auto curve = pulsekit::sample_curve(system, tau_max, samples);
      write_output(out_path, pulsekit::curve_csv(curve));
      return kExitOk;
    }
    if (*analyze_cmd) {
      const auto system = resolve(src).to_system();
      const auto report = pulsekit::classify(system);
      std::cout << pulsekit::report_json(report, system.time_unit()).dump(2) << "\n";
      return kExitOk;
    }
    if (*sim_cmd) {
      const auto system = resolve(src).to_system();
      pulsekit::VectorXd x0 = pulsekit::VectorXd::Ones(system.dim());
      if (!x0_text.empty()) {
        const auto values = parse_list(x0_text);
        if (static_cast<Eigen::Index>(values.size()) != system.dim())
          throw pulsekit::ParseError("--x0 has " + std::to_string(values.size()) + " entries, system dimension is " +
                                     std::to_string(system.dim()));
        x0 = Eigen::Map<const pulsekit::VectorXd>(values.data(), system.dim());
      }
      const auto traj = pulsekit::propagate(system, x0, tau, periods);
      if (!out_path.empty()) write_output(out_path, pulsekit::trajectory_csv(traj));

      nlohmann::ordered_json summary;
      summary["tau"] = tau;
      summary["periods"] = periods;
      if (periods >= 10) {
        const auto growth = pulsekit::empirical_growth_factor(traj);
        summary["empirical_growth_factor"] = growth.value;
        summary["exact_death"] = growth.exact_death;
      } else {
        summary["empirical_growth_factor"] = nullptr;
        summary["exact_death"] = false;
      }
      const bool fast = system.symmetrizable();
      summary["r_tau"] = fast ? pulsekit::r_tau(system, tau) : pulsekit::r_tau_general(system, tau);
      summary["method"] = to_string(fast ? pulsekit::EvalMethod::Symmetrized : pulsekit::EvalMethod::General);
      summary["time_unit"] = system.time_unit();
      std::cout << summary.dump(2) << "\n";
      return kExitOk;
    }
    if (*preset_cmd) {
      if (!src.preset.empty()) {
        write_output(out_path, pulsekit::dump_system_file(resolve(src)));
        return kExitOk;
      }
      std::printf("%-16s %-30s %-18s %s\n", "id", "A", "D", "provenance");
      for (const auto& p : pulsekit::preset_registry())
        std::printf("%-16s %-30s %-18s %s\n", p.id.c_str(), format_matrix(p.system.a).c_str(),
                    format_diag(p.system.d).c_str(), p.provenance.c_str());
      return kExitOk;
    }
  } catch (const pulsekit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
