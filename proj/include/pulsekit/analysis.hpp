#pragma once

// Regime classification, stability threshold tau_s and optimal period tau_m.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pulsekit/control_system.hpp"

namespace pulsekit {

enum class Regime {
  StableNeverControl,              // lambda_max(A) < 0: r decreases to 0, never pulse
  UnstableSelfPromotingWeakClass,  // A_kk > 0: r increases, pulse as often as possible
  UnstableInteriorOptimum,         // A_kk < 0: unique tau_m in (0, tau_s)
  OutOfTheoryScope,
};

const char* to_string(Regime r) noexcept;

struct Diagnostic {
  std::string check;
  bool passed;
  std::string detail;
};

struct AnalysisReport {
  Regime regime = Regime::OutOfTheoryScope;
  double lambda_max = 0;  // largest real part of the spectrum of A
  std::optional<Eigen::Index> k;
  std::optional<double> tau_s;
  std::optional<double> tau_m;
  std::optional<double> r_at_tau_m;
  std::vector<Diagnostic> diagnostics;
};

AnalysisReport classify(const ControlSystem& sys);

/// Unique tau > 0 with r(tau) = 1: doubling bracket from 0.1 / lambda_max,
/// then bisection to relative width 1e-12.
double find_tau_s(const ControlSystem& sys);

struct Minimum {
  double tau;
  double radius;
};

/// Minimizer of r over [0, inf). Golden-section search on [0, tau_s] in the
/// interior-optimum regime; (0, D_kk) in the self-promoting regime.
Minimum find_tau_m(const ControlSystem& sys);
Minimum find_tau_m(const ControlSystem& sys, double tau_s);

enum class Limit { DivergesToInfinity, DecaysToZero };

const char* to_string(Limit l) noexcept;

Limit limit_at_infinity(const ControlSystem& sys);

/// If A is stable then every A_ii < 0. Returns whether that conclusion
/// holds (vacuously true for unstable A).
bool stable_diagonal_check(const ControlSystem& sys);

/// Largest eigenvalue of A via its symmetrization.
double lambda_max(const ControlSystem& sys);

}  // namespace pulsekit
