#include <doctest.h>

#include "oracles.hpp"
#include "typel/exterior_algebra.hpp"
#include "typel/planes.hpp"
#include "typel/random.hpp"

using namespace typel;

namespace {

CMatrix columns(int dim, std::initializer_list<int> idx) {
  CMatrix b = CMatrix::Zero(dim, static_cast<Eigen::Index>(idx.size()));
  int c = 0;
  for (int i : idx) b(i, c++) = 1.0;
  return b;
}

}  // namespace

TEST_CASE("NPlane invariants on every construction path") {
  Rng rng(21);
  for (int n = 1; n <= 3; ++n) {
    const int d = 2 * n + 2;
    std::vector<NPlane> planes;
    for (int t = 0; t < 5; ++t) {
      planes.push_back(NPlane::from_basis(rng.complex_gaussian_matrix(d, n + 1)));
      planes.push_back(NPlane::from_graph(rng.complex_gaussian_matrix(n + 1, n + 1)));
      planes.push_back(NPlane::from_plucker(oracle::plucker(rng.complex_gaussian_matrix(d, n + 1))));
      planes.push_back(map_plane(rng.complex_gaussian_matrix(d, d), planes.back()));
    }
    for (const auto& p : planes) {
      CHECK(p.quadric_residual() <= 1e-9);
      CHECK(oracle::chordal(p.plucker(), oracle::plucker(p.basis())) <= 1e-9);
      CHECK(max_abs(CMatrix(p.basis().adjoint() * p.basis() - CMatrix::Identity(n + 1, n + 1))) <= 1e-10);
      // normalization: largest entry real positive of modulus one
      const auto k = pivot_index(p.plucker());
      CHECK(std::abs(p.plucker()(static_cast<Eigen::Index>(k)) - Complex(1.0)) <= 1e-15);
      if (p.graph()) {
        const CMatrix& X = *p.graph();
        CMatrix b(d, n + 1);
        b << X, CMatrix::Identity(n + 1, n + 1);
        CHECK(oracle::chordal(p.plucker(), oracle::plucker(b)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("planes_intersect examples") {
  const NPlane a = NPlane::from_basis(columns(4, {0, 1}));
  const NPlane b = NPlane::from_basis(columns(4, {2, 3}));
  const NPlane c = NPlane::from_basis(columns(4, {1, 2}));
  CHECK_FALSE(planes_intersect(a, b));
  CHECK(std::abs(q_form(a.plucker(), b.plucker())) == doctest::Approx(1.0));
  CHECK(planes_intersect(a, c));
  CHECK(planes_intersect(c, a));
}

TEST_CASE("planes_intersect agrees with the rank oracle") {
  Rng rng(22);
  const Tolerances tol;
  int hard = 0, soft = 0;
  for (int t = 0; t < 1000; ++t) {
    CMatrix b1 = rng.complex_gaussian_matrix(4, 2), b2 = rng.complex_gaussian_matrix(4, 2);
    if (t % 2 == 0) b2.col(0) = b1 * rng.complex_gaussian_vector(2);  // share a vector
    if (t % 10 == 1) b2.col(0) = b1 * rng.complex_gaussian_vector(2) + 1e-8 * rng.complex_gaussian_vector(4);
    const NPlane p1 = NPlane::from_basis(b1), p2 = NPlane::from_basis(b2);
    const bool q_test = planes_intersect(p1, p2);
    CHECK(q_test == planes_intersect(p2, p1));
    const bool rank_test = oracle::intersection_sigma_min(b1, b2) <= tol.rank;
    if (q_test == rank_test) continue;
    const double q = std::abs(q_form(p1.plucker(), p2.plucker())) / (p1.plucker().norm() * p2.plucker().norm());
    if (q >= 0.1 * tol.rank && q <= 10 * tol.rank) ++soft;
    else ++hard;
  }
  CHECK(hard == 0);
  CHECK(soft <= 1);
}

TEST_CASE("graph_to_plucker") {
  const NPlane zero = graph_to_plucker(CMatrix::Zero(2, 2));
  CVector e23 = CVector::Zero(6);
  e23(5) = 1.0;
  CHECK(oracle::chordal(zero.plucker(), e23) < 1e-15);

  CMatrix L1(2, 2);
  L1 << 3, -2, 2, -1;
  CVector expected(6);
  expected << 1, 2, 3, 1, 2, 1;
  CHECK(oracle::chordal(graph_to_plucker(L1).plucker(), expected) < 1e-12);

  const Complex mu{0.3, -1.2};
  CMatrix ll(4, 2);
  ll << mu, 0, 0, mu, 1, 0, 0, 1;
  CHECK(oracle::chordal(graph_to_plucker(mu * CMatrix::Identity(2, 2)).plucker(), oracle::plucker(ll)) < 1e-12);
}

TEST_CASE("plucker_to_graph round trip and non-transverse marker") {
  Rng rng(23);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 10; ++t) {
      const CMatrix X = rng.complex_gaussian_matrix(n + 1, n + 1);
      const NPlane p = NPlane::from_plucker(graph_to_plucker(X).plucker());
      const auto back = plucker_to_graph(p);
      REQUIRE(back.has_value());
      CHECK(max_abs(CMatrix(*back - X)) <= 1e-9 * std::max(1.0, max_abs(X)));
    }
  // {z'' = 0} is not a graph over z''
  CHECK_FALSE(plucker_to_graph(coordinate_plane(1, {0, 1})).has_value());
}

TEST_CASE("sample_points") {
  const NPlane t0 = graph_to_plucker(CMatrix::Zero(2, 2));  // tangent line at 0: z0 = z1 = 0
  const auto pts = sample_points(t0, 25, 7);
  CHECK(pts.size() == 25);
  for (const auto& p : pts) {
    CHECK(std::abs(p(0)) < 1e-15);
    CHECK(std::abs(p(1)) < 1e-15);
  }
  CHECK(sample_points(t0, 1, 99).size() == 1);
  Rng rng(24);
  const NPlane g = NPlane::from_basis(rng.complex_gaussian_matrix(6, 3));
  const auto a = sample_points(g, 10, 5), b = sample_points(g, 10, 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(g.point_distance(a[i]) < 1e-12);
  }
}

TEST_CASE("plane_distance") {
  Rng rng(25);
  const NPlane a = NPlane::from_basis(columns(4, {0, 1}));
  const NPlane b = NPlane::from_basis(columns(4, {2, 3}));
  CHECK(plane_distance(a, a).value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(plane_distance(a, b).value == doctest::Approx(1.0));
  for (int t = 0; t < 100; ++t) {
    const NPlane x = NPlane::from_basis(rng.complex_gaussian_matrix(4, 2));
    const NPlane y = NPlane::from_basis(rng.complex_gaussian_matrix(4, 2));
    const NPlane z = NPlane::from_basis(rng.complex_gaussian_matrix(4, 2));
    CHECK(plane_distance(x, z).value <= plane_distance(x, y).value + plane_distance(y, z).value + 1e-12);
    CHECK(plane_distance(x, y).value == doctest::Approx(oracle::chordal(x.plucker(), y.plucker())).epsilon(1e-9));
  }
}
