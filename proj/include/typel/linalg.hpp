#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace typel {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Largest entry modulus, |A| = max |a_jk|.
double max_abs(const CMatrix& a);
double max_abs(const CVector& v);

/// Index of the entry used as the normalization pivot: the first entry (in
/// storage order of a row-major scan) whose modulus is within a relative
/// 1e-12 of the maximum. The slack makes the choice stable under rounding
/// when several entries tie, e.g. for scalar multiples of the identity.
std::size_t pivot_index(const CMatrix& a);
std::size_t pivot_index(const CVector& v);

/// Scales so the pivot entry is real positive with modulus 1. Returns the
/// factor s that was divided out (result = input / s). Zero input is
/// returned unchanged with s = 1.
CMatrix normalize_projective(const CMatrix& a, Complex* divided_by = nullptr);
CVector normalize_projective(const CVector& v, Complex* divided_by = nullptr);

/// Operator 2-norm (largest singular value).
double operator_norm(const CMatrix& a);

/// Singular values in decreasing order.
RVector singular_values(const CMatrix& a);

/// log |det a| computed from a pivoted LU, finite for tiny or huge
/// determinants that would under/overflow. Returns -inf for exact zero.
double log_abs_det(const CMatrix& a);

/// Orthonormal basis of the column span of b (thin QR, first b.cols()
/// columns).
CMatrix orthonormal_columns(const CMatrix& b);

/// Block-diagonal matrix diag(a, b).
CMatrix block_diag(const CMatrix& a, const CMatrix& b);

/// 2x2 block matrix [[a, b], [c, d]] with equal square blocks.
CMatrix block_matrix(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                     const CMatrix& d);

}  // namespace typel
