#pragma once

#include <optional>
#include <string>

#include "pulsekit/core.hpp"
#include "pulsekit/symmetrize.hpp"

namespace pulsekit {

/// Positive diagonal of the jump matrix D. `control_constrained()` reports
/// whether every entry lies in (0, 1], i.e. each jump only removes mass.
class DiagonalControl {
 public:
  explicit DiagonalControl(VectorXd d);

  const VectorXd& diagonal() const noexcept { return d_; }
  Eigen::Index size() const noexcept { return d_.size(); }
  double operator[](Eigen::Index i) const { return d_(i); }
  bool control_constrained() const noexcept { return constrained_; }

  /// Index of the unique strictly largest entry, if there is one.
  std::optional<Eigen::Index> weakest_class() const;

  MatrixXd matrix() const { return d_.asDiagonal(); }

 private:
  VectorXd d_;
  bool constrained_ = true;
};

/// x' = A x between jumps, x(n tau+) = D x(n tau-) at each jump.
class ControlSystem {
 public:
  ControlSystem(MatrixXd a, DiagonalControl d, std::string time_unit = "time");

  const MatrixXd& a() const noexcept { return a_; }
  const DiagonalControl& d() const noexcept { return d_; }
  const std::string& time_unit() const noexcept { return time_unit_; }
  const SymmetrizationCertificate<double>& certificate() const noexcept { return cert_; }
  Eigen::Index dim() const noexcept { return a_.rows(); }
  bool symmetrizable() const noexcept { return cert_.symmetrizable(); }

 private:
  MatrixXd a_;
  DiagonalControl d_;
  std::string time_unit_;
  SymmetrizationCertificate<double> cert_;
};

/// Threshold below which an eigenvalue or diagonal rate of A counts as zero:
/// 1e-10 max(1, ||A||_F).
double singularity_threshold(const MatrixXd& a);

}  // namespace pulsekit
