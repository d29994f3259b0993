#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pulsekit {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Broad category of a failure, mirrored by the CLI exit-code mapping.
enum class ErrorKind {
  InvalidInput,
  Precondition,
  NumericalFailure,
  NotPositiveDefinite,
  NotApplicable,
  WrongPath,
  NoCrossing,
  NoMinimizer,
  Indeterminate,
  Overflow,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an iterative eigensolver runs out of sweeps. Carries the
/// partially reduced matrix so callers can inspect where it stalled.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, MatrixXd partial)
      : Error(ErrorKind::NumericalFailure, what), partial_(std::move(partial)) {}

  const MatrixXd& partial_reduction() const noexcept { return partial_; }

 private:
  MatrixXd partial_;
};

// Absolute floor applied under every norm-relative tolerance.
inline constexpr double kAbsoluteFloor = 1e-14;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.array().isFinite().all();
}

/// Largest absolute entry.
template <typename Derived>
typename Derived::RealScalar max_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().maxCoeff();
}

/// Maximum absolute row sum.
template <typename Derived>
typename Derived::RealScalar inf_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!all_finite(m)) throw Error(ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw Error(ErrorKind::InvalidInput, std::string(what) + " must be a non-empty square matrix");
}

}  // namespace pulsekit
