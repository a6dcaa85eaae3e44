#pragma once

#include <Eigen/Dense>

namespace fermibag::detail {

/// exp(-i * scale * H) for Hermitian H via eigendecomposition. The result is
/// unitary to rounding, independent of ||H|| * scale.
class HermitianExponential {
 public:
  explicit HermitianExponential(const Eigen::MatrixXcd& hermitian);

  Eigen::MatrixXcd unitary(double scale) const;
  Eigen::VectorXcd apply(double scale, const Eigen::VectorXcd& v) const;

  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
};

}  // namespace fermibag::detail
