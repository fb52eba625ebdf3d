// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace onebit {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Copy of a square matrix with the diagonal zeroed, off-diagonal preserved.
template <typename Derived>
typename Derived::PlainObject nondiag(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("nondiag: matrix must be square");
    }
    typename Derived::PlainObject out = a;
    out.diagonal().setZero();
    return out;
}

/// Largest entrywise deviation from Hermitian symmetry, |A - A^H|_max.
inline double hermitian_asymmetry(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("hermitian_asymmetry: matrix must be square");
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12) {
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return hermitian_asymmetry(a) <= tol * scale;
}

}  // namespace onebit
