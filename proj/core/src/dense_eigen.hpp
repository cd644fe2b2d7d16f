#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace ptwell::detail {

struct ComplexEigenDecomposition {
    Eigen::VectorXcd values;
    /// Columns are right eigenvectors.
    Eigen::MatrixXcd right;
    /// Columns u_n with u_n^H H = lambda_n u_n^H (empty unless requested).
    Eigen::MatrixXcd left;
};

/// zgeev on a copy of `matrix`.
ComplexEigenDecomposition complex_eigen(const Eigen::MatrixXcd& matrix, bool want_left);

/// dgeev eigenvalues only.
Eigen::VectorXcd real_eigenvalues(Eigen::MatrixXd matrix);

}  // namespace ptwell::detail
