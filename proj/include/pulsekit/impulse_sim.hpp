#pragma once

// Closed-form simulation of the pulsed system and a numerical check of its
// Floquet monodromy.

#include <optional>
#include <vector>

#include "pulsekit/control_system.hpp"

namespace pulsekit {

enum class SampleTag { PreJump, PostJump, Interior };

const char* to_string(SampleTag t) noexcept;

struct TrajectorySample {
  double t;
  VectorXd x;
  SampleTag tag;
};

/// Jumps happen at t = 0, tau, ..., (n_periods - 1) tau; the trajectory ends
/// with the pre-jump state at n_periods * tau.
struct ImpulseTrajectory {
  std::vector<TrajectorySample> samples;
  double period = 0;
  int n_periods = 0;

  /// Pre-jump states x(n tau-) for n = 0..n_periods.
  std::vector<VectorXd> pre_jump_states() const;
};

/// Thrown when the state leaves the finite range; carries the last finite sample.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, TrajectorySample last)
      : Error(ErrorKind::Overflow, what), last_(std::move(last)) {}

  const TrajectorySample& last_finite() const noexcept { return last_; }

 private:
  TrajectorySample last_;
};

ImpulseTrajectory propagate(const ControlSystem& sys, const VectorXd& x0, double tau, int n_periods,
                            int interior_samples_per_period = 0);

/// e^{tau A} D, the state map over one period starting just before a jump.
MatrixXd monodromy(const ControlSystem& sys, double tau);

struct FloquetCheck {
  double residual;          // ||numerical - e^{tau A} D||_max
  double tolerance;         // 1e-6 (1 + ||e^{tau A} D||_max)
  double step;              // largest integrator step actually used
  bool stiffness_refined;   // some |ln d_i| > 50 forced a 10x smaller step

  bool passed() const noexcept { return residual <= tolerance; }
};

/// Integrates y' = B(t) y over one period [0, tau + 1] with classical RK4,
/// where B = ln D on [0, 1) and B = A on [1, tau + 1), starting from the
/// identity. The step never exceeds step_fraction (tau + 1).
FloquetCheck verify_floquet_equivalence(const ControlSystem& sys, double tau, double step_fraction = 1e-3);

struct GrowthFactor {
  double value;      // geometric mean of ||x((n+1)tau-)|| / ||x(n tau-)||
  bool exact_death;  // state underflowed to exactly zero
};

/// Geometric-mean per-period growth over the last half of the pre-jump states.
GrowthFactor empirical_growth_factor(const ImpulseTrajectory& traj);

}  // namespace pulsekit
