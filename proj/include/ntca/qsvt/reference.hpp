// Eigendecomposition reference for polynomial matrix functions: V p(L) V^dag.
// Kept independent of the circuit path so it can serve as its oracle.

#pragma once

#include <Eigen/Eigenvalues>

#include "ntca/poly/polynomial.hpp"

namespace ntca {

inline Eigen::MatrixXcd reference_matrix_function(const Eigen::MatrixXcd& a, const PolynomialSpec& p,
                                                  double herm_tol = 1e-9) {
    require(a.rows() == a.cols(), "matrix must be square");
    require((a - a.adjoint().eval()).norm() <= herm_tol, "matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
    require(eig.info() == Eigen::Success, "eigendecomposition failed");
    Eigen::VectorXcd transformed(eig.eigenvalues().size());
    for (Eigen::Index i = 0; i < transformed.size(); ++i) {
        transformed(i) = p.eval(eig.eigenvalues()(i));
    }
    return eig.eigenvectors() * transformed.asDiagonal() * eig.eigenvectors().adjoint();
}

} // namespace ntca
