#include "pulsekit/control_system.hpp"

#include <algorithm>

namespace pulsekit {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::WrongPath: return "wrong-path";
    case ErrorKind::NoCrossing: return "no-crossing";
    case ErrorKind::NoMinimizer: return "no-minimizer";
    case ErrorKind::Indeterminate: return "indeterminate";
    case ErrorKind::Overflow: return "overflow";
  }
  return "unknown";
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Symmetrizable: return "Symmetrizable";
    case Verdict::NotSignSymmetric: return "NotSignSymmetric";
    case Verdict::CycleViolation: return "CycleViolation";
    case Verdict::ZeroPatternAsymmetric: return "ZeroPatternAsymmetric";
  }
  return "Unknown";
}

DiagonalControl::DiagonalControl(VectorXd d) : d_(std::move(d)) {
  if (d_.size() < 1) throw Error(ErrorKind::InvalidInput, "control diagonal is empty");
  for (Eigen::Index i = 0; i < d_.size(); ++i) {
    if (!std::isfinite(d_(i)) || !(d_(i) > 0))
      throw Error(ErrorKind::InvalidInput, "control diagonal entries must be finite and positive");
    if (d_(i) > 1) constrained_ = false;
  }
}

std::optional<Eigen::Index> DiagonalControl::weakest_class() const {
  Eigen::Index k = 0;
  for (Eigen::Index i = 1; i < d_.size(); ++i)
    if (d_(i) > d_(k)) k = i;
  for (Eigen::Index i = 0; i < d_.size(); ++i)
    if (i != k && !(d_(k) > d_(i))) return std::nullopt;
  return k;
}

ControlSystem::ControlSystem(MatrixXd a, DiagonalControl d, std::string time_unit)
    : a_(std::move(a)), d_(std::move(d)), time_unit_(std::move(time_unit)) {
  require_square(a_, "system matrix A");
  require_finite(a_, "system matrix A");
  if (a_.rows() != d_.size())
    throw Error(ErrorKind::InvalidInput, "dimension of A (" + std::to_string(a_.rows()) +
                                             ") does not match D (" + std::to_string(d_.size()) + ")");
  cert_ = symmetrize(a_);
}

double singularity_threshold(const MatrixXd& a) { return 1e-10 * std::max(1.0, a.norm()); }

}  // namespace pulsekit
