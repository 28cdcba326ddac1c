#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "errors.hpp"

namespace sfent {

/// Eigenvalues (ascending) of a Hermitian matrix; only the lower triangle is read.
inline std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    if (a.cols() != a.rows()) throw std::invalid_argument("hermitian_eigenvalues: matrix is not square");
    std::vector<double> w(static_cast<std::size_t>(n));
    if (n == 0) return w;
    Eigen::MatrixXcd work = a;
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
    if (info != 0) throw NumericalError("eigensolver failure (zheevd info " + std::to_string(info) + ")");
    return w;
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
inline std::vector<double> hermitian_eigensystem(const Eigen::MatrixXcd& a, Eigen::MatrixXcd& vectors) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    std::vector<double> w(static_cast<std::size_t>(n));
    vectors = a;
    if (n == 0) return w;
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, vectors.data(), n, w.data());
    if (info != 0) throw NumericalError("eigensolver failure (zheevd info " + std::to_string(info) + ")");
    return w;
}

}  // namespace sfent
