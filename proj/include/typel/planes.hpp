#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "typel/exterior_algebra.hpp"
#include "typel/linalg.hpp"
#include "typel/tolerances.hpp"

namespace typel {

/// An n-plane in P^{2n+1}, i.e. an (n+1)-dimensional subspace of C^{2n+2}.
///
/// Holds the normalized Plucker vector (largest entry real positive, modulus
/// one), an orthonormal spanning basis, and, when the plane was built from
/// one, the graph matrix X of {z' = X z''}. Coordinates are split as
/// z = (z', z'') with z' the first n+1 entries.
class NPlane {
 public:
  /// Span of the columns of a (2n+2) x (n+1) matrix.
  static NPlane from_basis(const CMatrix& basis, const Tolerances& tol = {});

  /// Plane with the given Plucker coordinates. Throws UsageError when the
  /// vector is not decomposable (not on the Grassmannian) within tol.quadric.
  static NPlane from_plucker(const CVector& plucker, const Tolerances& tol = {});

  /// {z' = X z''}.
  static NPlane from_graph(const CMatrix& x);

  int m() const { return static_cast<int>(basis_.cols()); }
  int n() const { return m() - 1; }
  const CVector& plucker() const { return plucker_; }
  const CMatrix& basis() const { return basis_; }
  const std::optional<CMatrix>& graph() const { return graph_; }

  /// |Q(p, p)| for the unit-norm Plucker vector.
  double quadric_residual() const;

  /// Euclidean distance of the unit vector z / |z| to the subspace.
  double point_distance(const CVector& z) const;

 private:
  NPlane(CVector plucker, CMatrix basis, std::optional<CMatrix> graph)
      : plucker_(std::move(plucker)), basis_(std::move(basis)), graph_(std::move(graph)) {}

  CVector plucker_;
  CMatrix basis_;
  std::optional<CMatrix> graph_;
};

/// Chordal distance on P^N between normalized Plucker vectors:
/// d(p, q) = min_phi |p - e^{i phi} q| / sqrt(2) for unit p, q.
struct PlaneDistance {
  double value = 0.0;
};

PlaneDistance plane_distance(const NPlane& a, const NPlane& b);

/// Same metric on raw projective vectors of equal length.
double projective_distance(const CVector& p, const CVector& q);

/// True iff |Q(p1, p2)| <= tol.rank * |p1| |p2|, i.e. the planes meet.
bool planes_intersect(const NPlane& a, const NPlane& b, const Tolerances& tol = {});

/// Plane {z' = X z''} for an (n+1) x (n+1) matrix X.
NPlane graph_to_plucker(const CMatrix& x);

/// Graph matrix X with plane = {z' = X z''}, or nullopt when the plane is
/// not transverse to {z'' = 0} (the lower block of its basis is singular).
std::optional<CMatrix> plucker_to_graph(const NPlane& plane, const Tolerances& tol = {});

/// count points basis * u with u uniform on the unit sphere of C^{n+1},
/// each projectively normalized. Deterministic in seed.
std::vector<CVector> sample_points(const NPlane& plane, int count, std::uint64_t seed);

/// Image g(l) of a plane under the linear map g.
NPlane map_plane(const CMatrix& g, const NPlane& plane, const Tolerances& tol = {});

/// The coordinate plane spanned by e_i, i in zero_based_indices.
NPlane coordinate_plane(int n, const std::vector<int>& zero_based_indices);

}  // namespace typel
