#pragma once

#include <Eigen/Dense>

namespace stochlab {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

// Partial-pivot LU determinant; exactly singular input gives 0.
double determinant(const RealMatrix& a);
std::complex<double> determinant(const ComplexMatrix& a);

// Throws SingularError when a pivot is negligible relative to the largest one.
RealMatrix solve(const RealMatrix& a, const RealMatrix& rhs);
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& rhs);

// Ascending eigenvalues of a Hermitian (or real symmetric) matrix.
RealVector hermitian_eigenvalues(const ComplexMatrix& h);
RealVector hermitian_eigenvalues(const RealMatrix& h);

}  // namespace stochlab
