#include "stochlab/linalg.hpp"

#include "stochlab/errors.hpp"

namespace stochlab {

namespace {

template <class M>
void require_square(const M& a, const char* who) {
    if (a.rows() != a.cols()) throw ArgumentError(std::string(who) + ": matrix is not square");
}

template <class Lu>
void require_regular(const Lu& lu) {
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    const double big = diag.maxCoeff();
    if (!(diag.minCoeff() > 1e-14 * big) || big == 0.0)
        throw SingularError("solve: matrix is singular to working precision");
}

}  // namespace

double determinant(const RealMatrix& a) {
    require_square(a, "determinant");
    if (a.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<RealMatrix>(a).determinant();
}

std::complex<double> determinant(const ComplexMatrix& a) {
    require_square(a, "determinant");
    if (a.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<ComplexMatrix>(a).determinant();
}

RealMatrix solve(const RealMatrix& a, const RealMatrix& rhs) {
    require_square(a, "solve");
    Eigen::PartialPivLU<RealMatrix> lu(a);
    require_regular(lu);
    return lu.solve(rhs);
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& rhs) {
    require_square(a, "solve");
    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    require_regular(lu);
    return lu.solve(rhs);
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
    require_square(h, "hermitian_eigenvalues");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("hermitian_eigenvalues: solver failed", 0.0);
    return es.eigenvalues();
}

RealVector hermitian_eigenvalues(const RealMatrix& h) {
    require_square(h, "hermitian_eigenvalues");
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("hermitian_eigenvalues: solver failed", 0.0);
    return es.eigenvalues();
}

}  // namespace stochlab
