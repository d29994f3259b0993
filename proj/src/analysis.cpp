#include "pulsekit/analysis.hpp"

#include <cmath>
#include <string>

#include "pulsekit/linalg.hpp"
#include "pulsekit/spectral_map.hpp"

namespace pulsekit {

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::StableNeverControl: return "StableNeverControl";
    case Regime::UnstableSelfPromotingWeakClass: return "UnstableSelfPromotingWeakClass";
    case Regime::UnstableInteriorOptimum: return "UnstableInteriorOptimum";
    case Regime::OutOfTheoryScope: return "OutOfTheoryScope";
  }
  return "Unknown";
}

const char* to_string(Limit l) noexcept {
  return l == Limit::DivergesToInfinity ? "DivergesToInfinity" : "DecaysToZero";
}

namespace {

VectorXd spectrum_of_symmetrized(const ControlSystem& sys) {
  const MatrixXd& s = sys.certificate().symmetrized;
  return sym_eig(MatrixXd((s + s.transpose()) / 2.0)).values;
}

void require_symmetrizable(const ControlSystem& sys, const char* what) {
  if (!sys.symmetrizable())
    throw Error(ErrorKind::NotApplicable, std::string(what) + " requires a diagonally symmetrizable A");
}

std::string sign_label(double value, double threshold) {
  if (value > threshold) return "positive";
  if (value < -threshold) return "negative";
  return "zero";
}

}  // namespace

double lambda_max(const ControlSystem& sys) {
  if (sys.symmetrizable()) return spectrum_of_symmetrized(sys).maxCoeff();
  return general_eigenvalues(sys.a()).real().maxCoeff();
}

double find_tau_s(const ControlSystem& sys) {
  require_symmetrizable(sys, "find_tau_s");
  const double lmax = lambda_max(sys);
  if (!(lmax > singularity_threshold(sys.a())))
    throw Error(ErrorKind::NotApplicable, "find_tau_s requires an unstable A (lambda_max > 0)");

  const double r0 = sys.d().diagonal().maxCoeff();
  if (r0 > 1) throw Error(ErrorKind::NoCrossing, "r(0) = max D > 1; no unique unit crossing");
  if (r0 == 1) {
    const auto k = sys.d().weakest_class();
    if (!k || sys.a()(*k, *k) >= 0)
      throw Error(ErrorKind::NoCrossing, "r(0) = 1 and r is not initially decreasing; r >= 1 for all tau");
  }

  const auto above = [&](double tau) { return r_tau(sys, tau) > 1.0; };

  const double tau0 = 0.1 / lmax;
  const double limit = std::ldexp(tau0, 60);
  double lo = 0;
  double hi = tau0;
  while (!above(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > limit) throw Error(ErrorKind::NoCrossing, "r(tau) never exceeded 1 during bracket expansion");
  }

  for (int it = 0; it < 400 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (above(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

Minimum find_tau_m(const ControlSystem& sys, double tau_s) {
  if (!std::isfinite(tau_s) || !(tau_s > 0)) throw Error(ErrorKind::InvalidInput, "tau_s must be positive");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto r = [&](double tau) { return r_tau(sys, tau); };

  double a = 0, b = tau_s;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = r(c), fd = r(d);
  while (b - a > 1e-9 * tau_s) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = r(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = r(d);
    }
  }
  const double mid = 0.5 * (a + b);
  return {mid, r(mid)};
}

Minimum find_tau_m(const ControlSystem& sys) {
  require_symmetrizable(sys, "find_tau_m");
  const auto k = sys.d().weakest_class();
  if (!k) throw Error(ErrorKind::NotApplicable, "find_tau_m requires a unique largest entry of D");
  const double threshold = singularity_threshold(sys.a());
  const double lmax = lambda_max(sys);
  const double akk = sys.a()(*k, *k);

  if (lmax < -threshold)
    throw Error(ErrorKind::NoMinimizer, "A is stable: r decreases on [0, inf) and the infimum is only approached as tau -> inf");
  if (lmax > threshold && akk > threshold) return {0.0, sys.d()[*k]};
  if (lmax > threshold && akk < -threshold) return find_tau_m(sys, find_tau_s(sys));
  throw Error(ErrorKind::NotApplicable, "find_tau_m: system is outside the classified regimes");
}

Limit limit_at_infinity(const ControlSystem& sys) {
  require_symmetrizable(sys, "limit_at_infinity");
  const double lmax = lambda_max(sys);
  if (std::abs(lmax) <= singularity_threshold(sys.a()))
    throw Error(ErrorKind::Indeterminate, "lambda_max(A) is zero within threshold");
  return lmax > 0 ? Limit::DivergesToInfinity : Limit::DecaysToZero;
}

bool stable_diagonal_check(const ControlSystem& sys) {
  require_symmetrizable(sys, "stable_diagonal_check");
  if (!(lambda_max(sys) < 0)) return true;
  return (sys.a().diagonal().array() < 0).all();
}

AnalysisReport classify(const ControlSystem& sys) {
  AnalysisReport report;
  auto& diag = report.diagnostics;
  const double threshold = singularity_threshold(sys.a());

  report.lambda_max = lambda_max(sys);
  report.k = sys.d().weakest_class();

  const bool symmetrizable = sys.symmetrizable();
  diag.push_back({"symmetrizable", symmetrizable, to_string(sys.certificate().verdict)});
  diag.push_back({"unique_k", report.k.has_value(),
                  report.k ? "k = " + std::to_string(*report.k + 1) : "largest entry of D is tied"});
  const bool constrained = sys.d().control_constrained();
  diag.push_back({"control_constrained", constrained, constrained ? "all D_ii in (0, 1]" : "some D_ii > 1"});

  bool nonsingular = false;
  if (symmetrizable) {
    nonsingular = spectrum_of_symmetrized(sys).cwiseAbs().minCoeff() > threshold;
    diag.push_back({"nonsingular", nonsingular, nonsingular ? "min |lambda_i| above threshold" : "A is singular within threshold"});
    diag.push_back({"stable_diagonal", stable_diagonal_check(sys), "stable A implies every A_ii < 0"});
  }
  if (report.k) {
    const double akk = sys.a()(*report.k, *report.k);
    diag.push_back({"sign_A_kk", std::abs(akk) > threshold, sign_label(akk, threshold)});
  }

  if (!symmetrizable || !report.k || !constrained) return report;

  const Eigen::Index k = *report.k;
  const double akk = sys.a()(k, k);
  const double dkk = sys.d()[k];
  const double lmax = report.lambda_max;

  if (std::abs(lmax) <= threshold) {
    diag.push_back({"lambda_max_nonzero", false, "lambda_max(A) is zero within threshold"});
    return report;
  }
  if (lmax < 0) {
    report.regime = Regime::StableNeverControl;
    return report;
  }

  try {
    if (akk > threshold) {
      report.regime = Regime::UnstableSelfPromotingWeakClass;
      report.tau_m = 0.0;
      report.r_at_tau_m = dkk;
      if (dkk < 1) {
        report.tau_s = find_tau_s(sys);
      } else {
        diag.push_back({"tau_s_exists", false, "D_kk = 1 with A_kk > 0: r(tau) >= 1 for all tau"});
      }
      return report;
    }
    if (akk < -threshold && nonsingular) {
      const double tau_s = find_tau_s(sys);
      const Minimum best = find_tau_m(sys, tau_s);
      report.regime = Regime::UnstableInteriorOptimum;
      report.tau_s = tau_s;
      report.tau_m = best.tau;
      report.r_at_tau_m = best.radius;
      return report;
    }
  } catch (const Error& e) {
    report.regime = Regime::OutOfTheoryScope;
    report.tau_s.reset();
    report.tau_m.reset();
    report.r_at_tau_m.reset();
    diag.push_back({"solver", false, e.what()});
  }
  return report;
}

}  // namespace pulsekit
