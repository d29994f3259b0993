#include <doctest.h>

#include "pulsekit/analysis.hpp"
#include "pulsekit/impulse_sim.hpp"
#include "pulsekit/linalg.hpp"
#include "pulsekit/spectral_map.hpp"
#include "test_support.hpp"

using namespace pulsekit;
using namespace pulsekit::testing;

TEST_CASE("propagate: sample layout and tags") {
  const auto sys = make_system(mat2(-2, 1, 1, 1), vec({0.5, 0.25}));
  const auto traj = propagate(sys, vec({1, 1}), 0.4, 5, 3);
  CHECK(traj.period == 0.4);
  CHECK(traj.n_periods == 5);
  REQUIRE(traj.samples.size() == 5 * (3 + 2) + 1);
  CHECK(traj.samples[0].tag == SampleTag::PreJump);
  CHECK(traj.samples[1].tag == SampleTag::PostJump);
  CHECK(traj.samples[2].tag == SampleTag::Interior);
  CHECK(traj.samples[2].t == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(traj.samples.back().tag == SampleTag::PreJump);
  CHECK(traj.samples.back().t == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(traj.pre_jump_states().size() == 6);
  CHECK(std::string(to_string(SampleTag::Interior)) == "interior");
}

TEST_CASE("propagate: jumps are exact and flows match the exponential") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = rng.integer(1, 5);
    const auto sys = make_system(rng.matrix(n, n, 1), random_control(rng, n));
    const double tau = rng.uniform(0.1, 2);
    VectorXd x0(n);
    for (Eigen::Index i = 0; i < n; ++i) x0(i) = rng.uniform(-1, 1);
    const auto traj = propagate(sys, x0, tau, 8, 1);
    const MatrixXd flow = taylor_exp(sys.a(), tau);
    const MatrixXd half = taylor_exp(sys.a(), tau / 2);
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
      const auto& s = traj.samples[i];
      if (s.tag != SampleTag::PostJump) continue;
      const auto& pre = traj.samples[i - 1];
      CHECK(s.t == pre.t);
      for (Eigen::Index j = 0; j < n; ++j) CHECK(s.x(j) == sys.d()[j] * pre.x(j));
      const VectorXd mid = half * s.x;
      CHECK(max_norm(traj.samples[i + 1].x - mid) <= 1e-12 * (1 + max_norm(mid)));
      const VectorXd next = flow * s.x;
      CHECK(max_norm(traj.samples[i + 2].x - next) <= 1e-12 * (1 + max_norm(next)));
    }
  }
}

TEST_CASE("propagate: scalar system is a geometric sequence") {
  const double a = 0.1, d = 0.5, tau = 3.0;
  const auto traj = propagate(make_system(MatrixXd::Constant(1, 1, a), vec({d})), vec({2.0}), tau, 40);
  const auto states = traj.pre_jump_states();
  const double ratio = d * std::exp(a * tau);
  for (std::size_t n = 0; n < states.size(); ++n)
    CHECK(states[n](0) == doctest::Approx(2.0 * std::pow(ratio, double(n))).epsilon(1e-12));
}

TEST_CASE("propagate: input validation and overflow") {
  const auto sys = make_system(mat2(-2, 1, 1, 1), vec({0.5, 0.25}));
  CHECK_THROWS_AS(propagate(sys, vec({1}), 1.0, 3), Error);
  CHECK_THROWS_AS(propagate(sys, vec({1, 1}), 0.0, 3), Error);
  CHECK_THROWS_AS(propagate(sys, vec({1, 1}), 1.0, 0), Error);
  CHECK_THROWS_AS(propagate(sys, vec({1, 1}), 1.0, 3, -1), Error);
  CHECK_THROWS_AS(propagate(sys, vec({1, std::nan("")}), 1.0, 3), Error);

  const auto blowup = make_system(MatrixXd::Constant(1, 1, 50.0), vec({1.0}));
  try {
    propagate(blowup, vec({1.0}), 10.0, 10);
    FAIL("expected overflow");
  } catch (const OverflowError& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
    CHECK(std::isfinite(e.last_finite().x(0)));
    CHECK(e.last_finite().t > 0);
  }
}

TEST_CASE("monodromy: one period map and characteristic multipliers") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = rng.integer(1, 5);
    const auto sys = make_system(random_symmetrizable(rng, n), random_control(rng, n));
    const double tau = rng.uniform(0.1, 3);
    const MatrixXd m = monodromy(sys, tau);
    CHECK(max_norm(m - taylor_exp(sys.a(), tau) * sys.d().matrix()) <= 1e-12 * (1 + max_norm(m)));
    // e^{tau A} D and D e^{tau A} share their spectrum.
    CHECK(spectral_radius_general(m) == doctest::Approx(r_tau(sys, tau)).epsilon(1e-9));

    VectorXd x0 = VectorXd::Ones(n);
    const auto traj = propagate(sys, x0, tau, 3);
    const auto states = traj.pre_jump_states();
    const VectorXd expected = m * m * m * x0;
    CHECK(max_norm(states.back() - expected) <= 1e-11 * (1 + max_norm(expected)));
  }
  CHECK_THROWS_AS(monodromy(make_system(mat2(-2, 1, 1, 1), vec({0.5, 0.25})), -1.0), Error);
}

TEST_CASE("verify_floquet_equivalence: fourth-order convergence") {
  const auto sys = make_system(mat2(-2, 1, 1, 1), vec({0.5, 0.25}));
  const auto coarse = verify_floquet_equivalence(sys, 1.0, 2e-3);
  const auto fine = verify_floquet_equivalence(sys, 1.0, 1e-3);
  CHECK(coarse.passed());
  CHECK(fine.passed());
  CHECK_FALSE(fine.stiffness_refined);
  CHECK(fine.step <= 2e-3);
  const double ratio = coarse.residual / fine.residual;
  CHECK(ratio >= 8);
  CHECK(ratio <= 32);

  const auto stiff = verify_floquet_equivalence(make_system(mat2(-1, 0.5, 0.5, -1), vec({1e-30, 0.5})), 0.5);
  CHECK(stiff.stiffness_refined);
  CHECK(stiff.passed());

  CHECK_THROWS_AS(verify_floquet_equivalence(sys, 0.0), Error);
  CHECK_THROWS_AS(verify_floquet_equivalence(sys, 1.0, 0.0), Error);
}

TEST_CASE("empirical_growth_factor: tracks r and separates stable from unstable") {
  const auto sys = make_system(mat2(-2, 1, 1, 1), vec({0.5, 0.25}));
  const double tau_s = find_tau_s(sys);
  for (double tau : {tau_s / 2, 2 * tau_s}) {
    const auto growth = empirical_growth_factor(propagate(sys, vec({1, 1}), tau, 100));
    const double r = r_tau(sys, tau);
    CHECK(growth.value == doctest::Approx(r).epsilon(1e-6));
    CHECK((growth.value < 1) == (r < 1));
    CHECK_FALSE(growth.exact_death);
  }

  CHECK_THROWS_AS(empirical_growth_factor(propagate(sys, vec({1, 1}), 1.0, 9)), Error);
  CHECK_THROWS_AS(empirical_growth_factor(propagate(sys, vec({0, 0}), 1.0, 20)), Error);

  // Entries drain to exact zero after enough halvings of a subnormal state.
  const auto dead = propagate(make_system(MatrixXd::Constant(1, 1, -5.0), vec({0.5})), vec({1e-300}), 10.0, 20);
  const auto g = empirical_growth_factor(dead);
  CHECK(g.exact_death);
  CHECK(g.value == 0.0);
}
