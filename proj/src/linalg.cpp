#include "typel/linalg.hpp"

#include <cmath>
#include <limits>

namespace typel {

namespace {

constexpr double kPivotSlack = 1e-12;

template <typename Get>
std::size_t pivot_scan(std::size_t rows, std::size_t cols, Get get) {
  double best = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) best = std::max(best, std::abs(get(i, j)));
  if (best == 0.0) return 0;
  const double threshold = best * (1.0 - kPivotSlack);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (std::abs(get(i, j)) >= threshold) return i * cols + j;
  return 0;
}

}  // namespace

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double max_abs(const CVector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

std::size_t pivot_index(const CMatrix& a) {
  return pivot_scan(a.rows(), a.cols(), [&](std::size_t i, std::size_t j) {
    return a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

std::size_t pivot_index(const CVector& v) {
  return pivot_scan(1, v.size(), [&](std::size_t, std::size_t j) {
    return v(static_cast<Eigen::Index>(j));
  });
}

CMatrix normalize_projective(const CMatrix& a, Complex* divided_by) {
  if (divided_by) *divided_by = 1.0;
  if (a.size() == 0) return a;
  const std::size_t p = pivot_index(a);
  const Complex s = a(static_cast<Eigen::Index>(p / a.cols()),
                      static_cast<Eigen::Index>(p % a.cols()));
  if (s == Complex(0.0)) return a;
  if (divided_by) *divided_by = s;
  CMatrix out = a / s;
  // The pivot is exactly 1 after division up to rounding; pin it.
  out(static_cast<Eigen::Index>(p / a.cols()), static_cast<Eigen::Index>(p % a.cols())) = 1.0;
  return out;
}

CVector normalize_projective(const CVector& v, Complex* divided_by) {
  if (divided_by) *divided_by = 1.0;
  if (v.size() == 0) return v;
  const auto p = static_cast<Eigen::Index>(pivot_index(v));
  const Complex s = v(p);
  if (s == Complex(0.0)) return v;
  if (divided_by) *divided_by = s;
  CVector out = v / s;
  out(p) = 1.0;
  return out;
}

RVector singular_values(const CMatrix& a) {
  if (a.size() == 0) return RVector();
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

double log_abs_det(const CMatrix& a) {
  Eigen::PartialPivLU<CMatrix> lu(a);
  const CMatrix& packed = lu.matrixLU();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double d = std::abs(packed(i, i));
    if (d == 0.0) return -std::numeric_limits<double>::infinity();
    acc += std::log(d);
  }
  return acc;
}

CMatrix orthonormal_columns(const CMatrix& b) {
  Eigen::HouseholderQR<CMatrix> qr(b);
  CMatrix q = qr.householderQ() * CMatrix::Identity(b.rows(), b.cols());
  return q;
}

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

CMatrix block_matrix(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                     const CMatrix& d) {
  const auto k = a.rows();
  CMatrix out(2 * k, 2 * k);
  out.topLeftCorner(k, k) = a;
  out.topRightCorner(k, k) = b;
  out.bottomLeftCorner(k, k) = c;
  out.bottomRightCorner(k, k) = d;
  return out;
}

}  // namespace typel
