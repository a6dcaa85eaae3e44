#include "unitary_exp.hpp"

#include <complex>

#include "fermibag/errors.hpp"

namespace fermibag::detail {

HermitianExponential::HermitianExponential(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw EigensolverFailure("self-adjoint eigensolver did not converge");
  }
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Eigen::MatrixXcd HermitianExponential::unitary(double scale) const {
  Eigen::VectorXcd phases(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    phases(i) = std::polar(1.0, -scale * values_(i));
  }
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Eigen::VectorXcd HermitianExponential::apply(double scale,
                                             const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd w = vectors_.adjoint() * v;
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    w(i) *= std::polar(1.0, -scale * values_(i));
  }
  return vectors_ * w;
}

}  // namespace fermibag::detail
