#include "dense_eigen.hpp"

#include <string>

#include <lapacke.h>

#include "ptwell/error.hpp"

namespace ptwell::detail {

ComplexEigenDecomposition complex_eigen(const Eigen::MatrixXcd& matrix, bool want_left) {
    const lapack_int n = static_cast<lapack_int>(matrix.rows());
    Eigen::MatrixXcd work = matrix;
    ComplexEigenDecomposition out;
    out.values.resize(n);
    out.right.resize(n, n);
    if (want_left) {
        out.left.resize(n, n);
    }
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, want_left ? 'V' : 'N', 'V', n,
        reinterpret_cast<lapack_complex_double*>(work.data()), n,
        reinterpret_cast<lapack_complex_double*>(out.values.data()),
        want_left ? reinterpret_cast<lapack_complex_double*>(out.left.data()) : nullptr, n,
        reinterpret_cast<lapack_complex_double*>(out.right.data()), n);
    if (info != 0) {
        throw NumericalFailure("zgeev failed with info = " + std::to_string(info));
    }
    return out;
}

Eigen::VectorXcd real_eigenvalues(Eigen::MatrixXd matrix) {
    const lapack_int n = static_cast<lapack_int>(matrix.rows());
    Eigen::VectorXd re(n), im(n);
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, matrix.data(), n,
                                          re.data(), im.data(), nullptr, n, nullptr, n);
    if (info != 0) {
        throw NumericalFailure("dgeev failed with info = " + std::to_string(info));
    }
    Eigen::VectorXcd out(n);
    for (lapack_int i = 0; i < n; ++i) {
        out(i) = {re(i), im(i)};
    }
    return out;
}

}  // namespace ptwell::detail
