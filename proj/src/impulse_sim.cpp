#include "pulsekit/impulse_sim.hpp"

#include <cmath>
#include <string>

#include "pulsekit/linalg.hpp"

namespace pulsekit {

const char* to_string(SampleTag t) noexcept {
  switch (t) {
    case SampleTag::PreJump: return "pre";
    case SampleTag::PostJump: return "post";
    case SampleTag::Interior: return "interior";
  }
  return "unknown";
}

std::vector<VectorXd> ImpulseTrajectory::pre_jump_states() const {
  std::vector<VectorXd> out;
  out.reserve(static_cast<std::size_t>(n_periods) + 1);
  for (const auto& s : samples)
    if (s.tag == SampleTag::PreJump) out.push_back(s.x);
  return out;
}

ImpulseTrajectory propagate(const ControlSystem& sys, const VectorXd& x0, double tau, int n_periods,
                            int interior_samples_per_period) {
  if (x0.size() != sys.dim())
    throw Error(ErrorKind::InvalidInput, "initial state has dimension " + std::to_string(x0.size()) +
                                             ", system has " + std::to_string(sys.dim()));
  require_finite(x0, "initial state");
  if (!std::isfinite(tau) || !(tau > 0)) throw Error(ErrorKind::InvalidInput, "tau must be positive");
  if (n_periods < 1) throw Error(ErrorKind::InvalidInput, "n_periods must be at least 1");
  if (interior_samples_per_period < 0) throw Error(ErrorKind::InvalidInput, "interior sample count is negative");

  const VectorXd& d = sys.d().diagonal();
  const MatrixXd flow = mat_exp(sys.a(), tau);
  std::vector<MatrixXd> partial;
  const int m = interior_samples_per_period;
  for (int j = 1; j <= m; ++j) partial.push_back(mat_exp(sys.a(), tau * j / (m + 1)));

  ImpulseTrajectory traj;
  traj.period = tau;
  traj.n_periods = n_periods;
  traj.samples.reserve(static_cast<std::size_t>(n_periods) * static_cast<std::size_t>(m + 2) + 1);

  auto push = [&](double t, VectorXd x, SampleTag tag) {
    if (!all_finite(x)) {
      throw OverflowError("state overflowed at t = " + std::to_string(t), traj.samples.back());
    }
    traj.samples.push_back({t, std::move(x), tag});
  };

  VectorXd pre = x0;
  for (int n = 0; n < n_periods; ++n) {
    const double start = n * tau;
    push(start, pre, SampleTag::PreJump);
    VectorXd post = d.cwiseProduct(pre);
    push(start, post, SampleTag::PostJump);
    for (int j = 1; j <= m; ++j) push(start + tau * j / (m + 1), partial[j - 1] * post, SampleTag::Interior);
    pre = flow * post;
  }
  push(n_periods * tau, pre, SampleTag::PreJump);
  return traj;
}

MatrixXd monodromy(const ControlSystem& sys, double tau) {
  if (!std::isfinite(tau) || !(tau > 0)) throw Error(ErrorKind::InvalidInput, "tau must be positive");
  return mat_exp(sys.a(), tau) * sys.d().diagonal().asDiagonal();
}

namespace {

void rk4(const MatrixXd& b, MatrixXd& y, double length, long steps) {
  const double h = length / double(steps);
  for (long s = 0; s < steps; ++s) {
    const MatrixXd k1 = b * y;
    const MatrixXd k2 = b * (y + 0.5 * h * k1);
    const MatrixXd k3 = b * (y + 0.5 * h * k2);
    const MatrixXd k4 = b * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

}  // namespace

FloquetCheck verify_floquet_equivalence(const ControlSystem& sys, double tau, double step_fraction) {
  if (!std::isfinite(tau) || !(tau > 0)) throw Error(ErrorKind::InvalidInput, "tau must be positive");
  if (!(step_fraction > 0)) throw Error(ErrorKind::InvalidInput, "step fraction must be positive");

  const VectorXd log_d = sys.d().diagonal().array().log();
  double max_step = step_fraction * (tau + 1.0);
  const bool stiff = log_d.cwiseAbs().maxCoeff() > 50.0;
  if (stiff) max_step /= 10.0;

  const long control_steps = static_cast<long>(std::ceil(1.0 / max_step));
  const long flow_steps = static_cast<long>(std::ceil(tau / max_step));

  MatrixXd y = MatrixXd::Identity(sys.dim(), sys.dim());
  rk4(log_d.asDiagonal(), y, 1.0, control_steps);
  rk4(sys.a(), y, tau, flow_steps);

  const MatrixXd exact = monodromy(sys, tau);
  FloquetCheck check{};
  check.residual = max_norm(y - exact);
  check.tolerance = 1e-6 * (1.0 + max_norm(exact));
  check.step = std::max(1.0 / double(control_steps), tau / double(flow_steps));
  check.stiffness_refined = stiff;
  return check;
}

GrowthFactor empirical_growth_factor(const ImpulseTrajectory& traj) {
  const auto states = traj.pre_jump_states();
  const std::size_t periods = states.empty() ? 0 : states.size() - 1;
  if (periods < 10) throw Error(ErrorKind::InvalidInput, "growth factor needs at least 10 periods");
  if (states.front().stableNorm() == 0) throw Error(ErrorKind::InvalidInput, "initial state is zero");

  const std::size_t first = periods / 2;
  for (std::size_t n = first; n <= periods; ++n)
    if (states[n].stableNorm() == 0) return {0.0, true};

  const double log_ratio = std::log(states[periods].stableNorm()) - std::log(states[first].stableNorm());
  return {std::exp(log_ratio / double(periods - first)), false};
}

}  // namespace pulsekit
