#include "pulsekit/spectral_map.hpp"

#include <cmath>

#include "pulsekit/linalg.hpp"

namespace pulsekit {

const char* to_string(EvalMethod m) noexcept {
  return m == EvalMethod::Symmetrized ? "Symmetrized" : "General";
}

namespace {

void require_tau(double tau) {
  if (!std::isfinite(tau) || tau < 0) throw Error(ErrorKind::InvalidInput, "tau must be finite and nonnegative");
}

MatrixXd symmetric_generator(const ControlSystem& sys) {
  if (!sys.symmetrizable())
    throw Error(ErrorKind::WrongPath,
                std::string("A is not diagonally symmetrizable (") + to_string(sys.certificate().verdict) +
                    "); use r_tau_general");
  const MatrixXd& s = sys.certificate().symmetrized;
  return (s + s.transpose()) / 2.0;
}

double top_eigenvalue(const MatrixXd& m) {
  const MatrixXd sym = (m + m.transpose()) / 2.0;
  return sym_eig(sym).values(sym.rows() - 1);
}

}  // namespace

double r_tau(const ControlSystem& sys, double tau) {
  require_tau(tau);
  const MatrixXd generator = symmetric_generator(sys);
  const VectorXd sqrt_d = sys.d().diagonal().cwiseSqrt();
  const MatrixXd m = sqrt_d.asDiagonal() * mat_exp(generator, tau) * sqrt_d.asDiagonal();
  return top_eigenvalue(m);
}

double r_tau_general(const ControlSystem& sys, double tau) {
  require_tau(tau);
  return spectral_radius_general(sys.d().diagonal().asDiagonal() * mat_exp(sys.a(), tau));
}

SpectralCurve sample_curve(const ControlSystem& sys, double tau_max, int n_samples) {
  if (!std::isfinite(tau_max) || !(tau_max > 0)) throw Error(ErrorKind::InvalidInput, "tau_max must be positive");
  if (n_samples < 2) throw Error(ErrorKind::InvalidInput, "sample_curve needs at least 2 samples");

  const auto count = static_cast<std::size_t>(n_samples);
  SpectralCurve curve;
  curve.taus.resize(count);
  curve.radii.resize(count);
  curve.methods.assign(count, sys.symmetrizable() ? EvalMethod::Symmetrized : EvalMethod::General);
  for (std::size_t i = 0; i < count; ++i) {
    const double tau = i + 1 == count ? tau_max : tau_max * double(i) / double(count - 1);
    curve.taus[i] = tau;
    curve.radii[i] = sys.symmetrizable() ? r_tau(sys, tau) : r_tau_general(sys, tau);
  }
  return curve;
}

double derivative_at_zero(const ControlSystem& sys) {
  const auto k = sys.d().weakest_class();
  if (!k) throw Error(ErrorKind::NotApplicable, "largest entry of D is not unique");
  return sys.d()[*k] * sys.a()(*k, *k);
}

double strong_convexity_parameter(const ControlSystem& sys, double p) {
  if (!std::isfinite(p) || !(p > 0)) throw Error(ErrorKind::InvalidInput, "p must be positive");
  if (!sys.symmetrizable()) throw Error(ErrorKind::NotApplicable, "strong convexity needs a symmetrizable A");

  const auto eig = sym_eig(symmetric_generator(sys));
  const double threshold = singularity_threshold(sys.a());
  const Eigen::Index n = sys.dim();
  VectorXd b2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = eig.values(i);
    if (std::abs(lambda) <= threshold)
      throw Error(ErrorKind::NotApplicable, "A is singular within threshold; strong convexity does not apply");
    b2(i) = lambda < 0 ? lambda * lambda * std::exp(lambda * p) : lambda * lambda;
  }

  const MatrixXd& q = eig.vectors;
  const MatrixXd constraint = q.transpose() * sys.d().diagonal().cwiseInverse().asDiagonal() * q;
  const MatrixXd l = cholesky(MatrixXd((constraint + constraint.transpose()) / 2.0));
  const auto lower = l.triangularView<Eigen::Lower>();
  const MatrixXd half = lower.solve(MatrixXd(b2.asDiagonal()));
  const MatrixXd pencil = lower.solve(MatrixXd(half.transpose()));
  return sym_eig(MatrixXd((pencil + pencil.transpose()) / 2.0)).values(0);
}

SymmetrizedSpectrum::SymmetrizedSpectrum(const ControlSystem& sys)
    : sqrt_d_(sys.d().diagonal().cwiseSqrt()), d_(sys.d().diagonal()) {
  auto eig = sym_eig(symmetric_generator(sys));
  lambda_ = std::move(eig.values);
  q_ = std::move(eig.vectors);
}

MatrixXd SymmetrizedSpectrum::inner(double tau) const {
  const VectorXd growth = (lambda_ * tau).array().exp();
  const MatrixXd sq = sqrt_d_.asDiagonal() * q_;
  return sq * growth.asDiagonal() * sq.transpose();
}

double SymmetrizedSpectrum::radius(double tau) const {
  require_tau(tau);
  return top_eigenvalue(inner(tau));
}

MatrixXd SymmetrizedSpectrum::constraint_matrix() const {
  return q_.transpose() * d_.cwiseInverse().asDiagonal() * q_;
}

double SymmetrizedSpectrum::exponential_form(const VectorXd& y, double tau) const {
  return ((lambda_ * tau).array().exp() * y.array().square()).sum();
}

VectorXd SymmetrizedSpectrum::maximizer(double tau) const {
  require_tau(tau);
  const MatrixXd m = inner(tau);
  const auto eig = sym_eig(MatrixXd((m + m.transpose()) / 2.0));
  const VectorXd x = eig.vectors.col(eig.vectors.cols() - 1);
  return q_.transpose() * (sqrt_d_.asDiagonal() * x);
}

}  // namespace pulsekit
