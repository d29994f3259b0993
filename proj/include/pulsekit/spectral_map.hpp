#pragma once

// The map tau -> r(D e^{tau A}) and quantities derived from it.

#include <vector>

#include "pulsekit/control_system.hpp"

namespace pulsekit {

enum class EvalMethod { Symmetrized, General };

const char* to_string(EvalMethod m) noexcept;

struct SpectralCurve {
  std::vector<double> taus;
  std::vector<double> radii;
  std::vector<EvalMethod> methods;
};

/// r(D e^{tau A}) as lambda_max of the symmetric positive definite matrix
/// D^{1/2} e^{tau A~} D^{1/2}, where A~ = T^{-1} A T from the certificate.
/// Throws WrongPath when A is not diagonally symmetrizable.
double r_tau(const ControlSystem& sys, double tau);

/// r(D e^{tau A}) from the general eigensolver; valid for any A.
double r_tau_general(const ControlSystem& sys, double tau);

/// Uniform grid on [0, tau_max], both ends included.
SpectralCurve sample_curve(const ControlSystem& sys, double tau_max, int n_samples);

/// d/dtau r(D e^{tau A}) at tau = 0, which is D_kk A_kk for the unique
/// largest D_kk. Throws NotApplicable on a tie.
double derivative_at_zero(const ControlSystem& sys);

/// Lower bound m_p on the second derivative of r over [0, p]: the smallest
/// value of sum_i b_i^2 y_i^2 over the ellipsoid <y, Q^T D^{-1} Q y> = 1, with
/// b_i^2 = lambda_i^2 e^{lambda_i p} for negative lambda_i and lambda_i^2
/// otherwise. Requires a symmetrizable, nonsingular A.
double strong_convexity_parameter(const ControlSystem& sys, double p);

/// Reuses one eigendecomposition A~ = Q Lambda Q^T across many tau. Also
/// exposes the variational form r(tau) = max_y <y, e^{tau Lambda} y> over the
/// ellipsoid <y, Q^T D^{-1} Q y> = 1.
class SymmetrizedSpectrum {
 public:
  explicit SymmetrizedSpectrum(const ControlSystem& sys);

  double radius(double tau) const;

  const VectorXd& eigenvalues() const noexcept { return lambda_; }
  const MatrixXd& eigenvectors() const noexcept { return q_; }

  /// Q^T D^{-1} Q, the ellipsoid's quadratic form.
  MatrixXd constraint_matrix() const;

  /// sum_i e^{lambda_i tau} y_i^2.
  double exponential_form(const VectorXd& y, double tau) const;

  /// Point of the ellipsoid attaining r(tau).
  VectorXd maximizer(double tau) const;

 private:
  MatrixXd inner(double tau) const;

  VectorXd lambda_;
  MatrixXd q_;
  VectorXd sqrt_d_;
  VectorXd d_;
};

}  // namespace pulsekit
