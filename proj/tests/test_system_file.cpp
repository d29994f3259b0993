#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "pulsekit/system_file.hpp"
#include "test_support.hpp"

using namespace pulsekit;
using namespace pulsekit::testing;

TEST_CASE("parse_system_file: well-formed input") {
  const auto file = parse_system_file(R"({"name": "demo", "time_unit": "days",
    "A": [[-2, 1], [1, 1]], "D": [0.5, 0.25]})");
  CHECK(*file.name == "demo");
  CHECK(file.time_unit == "days");
  CHECK(file.a == mat2(-2, 1, 1, 1));
  CHECK(file.d == vec({0.5, 0.25}));
  const auto sys = file.to_system();
  CHECK(sys.time_unit() == "days");
  CHECK(sys.symmetrizable());

  const auto bare = parse_system_file(R"({"A": [[0.1]], "D": [0.5]})");
  CHECK(bare.time_unit == "time");
  CHECK_FALSE(bare.name);
}

TEST_CASE("parse_system_file: syntax errors report line and column") {
  try {
    parse_system_file("{\n  \"A\": [[1, 2],\n  [3, ]]\n}");
    FAIL("expected failure");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(e.line() == 3);
    CHECK(e.column() == 7);
  }
}

TEST_CASE("parse_system_file: semantic errors") {
  const char* bad[] = {
      R"([1, 2])",
      R"({"D": [1]})",
      R"({"A": [], "D": []})",
      R"({"A": [[1, 2], [3]], "D": [1, 1]})",
      R"({"A": [[1, "x"], [3, 4]], "D": [1, 1]})",
      R"({"A": [[1, 2], [3, 4]], "D": [1]})",
      R"({"A": [[1, 2], [3, 4]], "D": [1, 0]})",
      R"({"A": [[1, 2], [3, 4]], "D": [1, -0.5]})",
      R"({"A": [[1, 2], [3, 4]], "D": [1, 1], "time_unit": 3})",
      R"({"A": [[1, 2], [3, 4]], "D": [1, 1], "name": []})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_system_file(text), ParseError);
  }
  CHECK_THROWS_AS(load_system_file("/nonexistent/pulsekit/system.json"), ParseError);
}

TEST_CASE("dump_system_file: round trip preserves every bit") {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = rng.integer(1, 5);
    SystemFile file;
    file.a = rng.matrix(n, n, 1e3);
    file.d = random_control(rng, n, 1e-6, 1);
    file.time_unit = "weeks";
    if (rng.chance(0.5)) file.name = "case " + std::to_string(trial);
    const auto back = parse_system_file(dump_system_file(file));
    CHECK(back.a == file.a);
    CHECK(back.d == file.d);
    CHECK(back.time_unit == file.time_unit);
    CHECK(back.name == file.name);
  }
}

TEST_CASE("presets: registry contents and round trip") {
  const auto& presets = preset_registry();
  CHECK(presets.size() == 8);
  for (const char* id : {"sth-roundworm", "sth-whipworm", "sth-hookworm", "rotation-ctrex", "fig1-topleft",
                         "fig1-bottomleft", "fig1-stable", "scalar-demo"}) {
    const auto* p = find_preset(id);
    REQUIRE(p);
    CHECK_FALSE(p->provenance.empty());
    const auto back = parse_system_file(dump_system_file(p->system));
    CHECK(back.a == p->system.a);
    CHECK(back.d == p->system.d);
    CHECK_NOTHROW(p->system.to_system());
  }
  CHECK(find_preset("nope") == nullptr);
  CHECK(find_preset("sth-roundworm")->system.time_unit == "days");
  CHECK(find_preset("sth-hookworm")->system.a == sth_hookworm().a());
  CHECK_FALSE(find_preset("rotation-ctrex")->system.to_system().symmetrizable());
}

TEST_CASE("format_number: round-trips doubles") {
  Rng rng(52);
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = rng.uniform(-1, 1) * std::pow(10.0, rng.integer(-300, 300));
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(2.0) == "2");
}

TEST_CASE("curve_csv and trajectory_csv: layout and determinism") {
  const auto sys = find_preset("fig1-bottomleft")->system.to_system();
  const auto curve = sample_curve(sys, 3.0, 31);
  const std::string csv = curve_csv(curve);
  CHECK(csv.rfind("tau,r,method\n0,0.5", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 32);
  CHECK(csv.find("Symmetrized") != std::string::npos);
  CHECK(csv == curve_csv(sample_curve(sys, 3.0, 31)));

  const auto traj = propagate(sys, vec({1, 2}), 0.5, 3);
  const std::string tcsv = trajectory_csv(traj);
  CHECK(tcsv.rfind("t,tag,x1,x2\n0,pre,1,2\n0,post,0.5,0.5\n", 0) == 0);
  CHECK(tcsv == trajectory_csv(propagate(sys, vec({1, 2}), 0.5, 3)));
}

TEST_CASE("certificate_json: verdicts and witnesses use 1-based indices") {
  const auto ok = certificate_json(symmetrize(mat2(-2, 1, 4, 1)));
  CHECK(ok["verdict"] == "Symmetrizable");
  CHECK(ok["T"].size() == 2);
  CHECK(ok["witness"].is_null());

  const auto sign = certificate_json(symmetrize(mat2(0, -1, 1, 0)));
  CHECK(sign["verdict"] == "NotSignSymmetric");
  CHECK(sign["T"].is_null());
  CHECK(sign["witness"]["pair"] == nlohmann::json::array({1, 2}));

  MatrixXd a(3, 3);
  a << 0, 1, 1, 1, 0, 2, 1, 1, 0;
  const auto cyc = certificate_json(symmetrize(a));
  CHECK(cyc["verdict"] == "CycleViolation");
  CHECK(cyc["witness"]["cycle"] == nlohmann::json::array({1, 2, 3}));
  CHECK(cyc["witness"]["forward_product"] == 2.0);
}

TEST_CASE("report_json: fields") {
  const auto sys = find_preset("fig1-bottomleft")->system.to_system();
  const auto j = report_json(classify(sys), sys.time_unit());
  CHECK(j["regime"] == "UnstableInteriorOptimum");
  CHECK(j["k"] == 1);
  CHECK(j["tau_s"].is_number());
  CHECK(j["time_unit"] == "time");
  CHECK(j["diagnostics"].is_array());

  const auto stable = find_preset("fig1-stable")->system.to_system();
  const auto s = report_json(classify(stable), "time");
  CHECK(s["tau_s"].is_null());
  CHECK(s["tau_m"].is_null());
}
