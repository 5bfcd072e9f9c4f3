#include "typel/random.hpp"

#include <cmath>
#include <numbers>

namespace typel {

double Rng::uniform() {
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re, im};
}

CVector Rng::complex_gaussian_vector(Eigen::Index size) {
  CVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = complex_gaussian();
  return v;
}

CMatrix Rng::complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  CMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = complex_gaussian();
  return a;
}

CVector Rng::unit_sphere(Eigen::Index size) {
  CVector v = complex_gaussian_vector(size);
  return v / v.norm();
}

CMatrix Rng::unitary(Eigen::Index size) {
  const CMatrix g = complex_gaussian_matrix(size, size);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < size; ++i) {
    const double mod = std::abs(r(i, i));
    if (mod > 0.0) q.col(i) *= r(i, i) / mod;
  }
  return q;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace typel
