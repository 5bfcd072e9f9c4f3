#include "typel/planes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "typel/errors.hpp"
#include "typel/random.hpp"

namespace typel {

namespace {

// Matrix of v -> v ^ p from C^{2m} to Lambda^{m+1} C^{2m}; its kernel is the
// subspace represented by a decomposable m-vector p.
CMatrix wedge_map(const CVector& p, int m) {
  const auto indices = enumerate_multiindices(m);
  std::map<std::vector<int>, Eigen::Index> target;
  CMatrix w;
  std::vector<std::pair<std::vector<int>, std::pair<Eigen::Index, Complex>>> entries;
  for (int i = 1; i <= 2 * m; ++i) {
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const auto& idx = indices[k].entries;
      if (std::find(idx.begin(), idx.end(), i) != idx.end()) continue;
      const auto below = std::count_if(idx.begin(), idx.end(), [i](int x) { return x < i; });
      std::vector<int> merged = idx;
      merged.insert(std::upper_bound(merged.begin(), merged.end(), i), i);
      target.emplace(merged, 0);
      const double sign = below % 2 == 0 ? 1.0 : -1.0;
      entries.push_back({merged, {i - 1, sign * p(static_cast<Eigen::Index>(k))}});
    }
  }
  Eigen::Index row = 0;
  for (auto& [key, r] : target) r = row++;
  w = CMatrix::Zero(row, 2 * m);
  for (const auto& [key, col_val] : entries) w(target.at(key), col_val.first) += col_val.second;
  return w;
}

}  // namespace

NPlane NPlane::from_basis(const CMatrix& basis, const Tolerances& tol) {
  CVector p = plucker_of_subspace(basis, tol);
  return NPlane(normalize_projective(CVector(p / p.norm())), orthonormal_columns(basis),
                std::nullopt);
}

NPlane NPlane::from_plucker(const CVector& plucker, const Tolerances& tol) {
  const int m = half_dimension_for_plucker_size(static_cast<std::size_t>(plucker.size()));
  const double norm = plucker.norm();
  if (!(norm > 0.0)) throw UsageError("zero Plucker vector");
  const CVector unit = plucker / norm;
  const CMatrix w = wedge_map(unit, m);
  Eigen::JacobiSVD<CMatrix> svd(w, Eigen::ComputeFullV);
  const CMatrix basis = svd.matrixV().rightCols(m);
  const CVector recovered = plucker_of_subspace(basis, tol);
  if (projective_distance(recovered, unit) > tol.quadric)
    throw UsageError("Plucker vector is not decomposable");
  return NPlane(normalize_projective(unit), orthonormal_columns(basis), std::nullopt);
}

NPlane NPlane::from_graph(const CMatrix& x) {
  if (x.rows() != x.cols()) throw UsageError("graph matrix must be square");
  const auto k = x.rows();
  CMatrix basis(2 * k, k);
  basis.topRows(k) = x;
  basis.bottomRows(k) = CMatrix::Identity(k, k);
  NPlane plane = from_basis(basis);
  plane.graph_ = x;
  return plane;
}

double NPlane::quadric_residual() const {
  const CVector unit = plucker_ / plucker_.norm();
  return std::abs(quadric_form(m())(unit, unit));
}

double NPlane::point_distance(const CVector& z) const {
  const double norm = z.norm();
  if (!(norm > 0.0)) throw UsageError("zero vector is not a projective point");
  const CVector unit = z / norm;
  return (unit - basis_ * (basis_.adjoint() * unit)).norm();
}

double projective_distance(const CVector& p, const CVector& q) {
  if (p.size() != q.size()) throw UsageError("projective_distance on vectors of different length");
  const double np = p.norm();
  const double nq = q.norm();
  if (!(np > 0.0) || !(nq > 0.0)) throw UsageError("zero vector is not a projective point");
  const CVector a = p / np;
  const CVector b = q / nq;
  const Complex inner = b.dot(a);  // conj(b) . a
  const double mod = std::abs(inner);
  const Complex phase = mod > 0.0 ? inner / mod : Complex(1.0);
  return (a - phase * b).norm() / std::numbers::sqrt2;
}

PlaneDistance plane_distance(const NPlane& a, const NPlane& b) {
  if (a.m() != b.m()) throw UsageError("plane_distance on planes of different dimension");
  return PlaneDistance{projective_distance(a.plucker(), b.plucker())};
}

bool planes_intersect(const NPlane& a, const NPlane& b, const Tolerances& tol) {
  if (a.m() != b.m()) throw UsageError("planes_intersect on planes of different dimension");
  const Complex q = quadric_form(a.m())(a.plucker(), b.plucker());
  return std::abs(q) <= tol.rank * a.plucker().norm() * b.plucker().norm();
}

NPlane graph_to_plucker(const CMatrix& x) { return NPlane::from_graph(x); }

std::optional<CMatrix> plucker_to_graph(const NPlane& plane, const Tolerances& tol) {
  if (plane.graph()) return plane.graph();
  const auto k = plane.basis().cols();
  const CMatrix upper = plane.basis().topRows(k);
  const CMatrix lower = plane.basis().bottomRows(k);
  const RVector sv = singular_values(lower);
  if (sv(sv.size() - 1) <= tol.rank) return std::nullopt;
  return CMatrix(upper * lower.inverse());
}

std::vector<CVector> sample_points(const NPlane& plane, int count, std::uint64_t seed) {
  if (count < 1) throw UsageError("sample_points needs count >= 1");
  Rng rng(seed);
  std::vector<CVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const CVector u = rng.unit_sphere(plane.basis().cols());
    out.push_back(normalize_projective(CVector(plane.basis() * u)));
  }
  return out;
}

NPlane map_plane(const CMatrix& g, const NPlane& plane, const Tolerances& tol) {
  if (g.cols() != plane.basis().rows()) throw UsageError("map_plane dimension mismatch");
  return NPlane::from_basis(g * plane.basis(), tol);
}

NPlane coordinate_plane(int n, const std::vector<int>& zero_based_indices) {
  if (static_cast<int>(zero_based_indices.size()) != n + 1)
    throw UsageError("coordinate_plane needs n+1 indices");
  CMatrix basis = CMatrix::Zero(2 * n + 2, n + 1);
  for (std::size_t c = 0; c < zero_based_indices.size(); ++c)
    basis(zero_based_indices[c], static_cast<Eigen::Index>(c)) = 1.0;
  return NPlane::from_basis(basis);
}

}  // namespace typel
