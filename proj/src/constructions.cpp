#include "typel/constructions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "typel/errors.hpp"
#include "typel/ford.hpp"
#include "typel/random.hpp"

namespace typel {

Complex P1Point::value() const {
  if (v == Complex(0.0)) throw UsageError("point at infinity has no finite value");
  return u / v;
}

double p1_distance(const P1Point& a, const P1Point& b) {
  CVector p(2), q(2);
  p << a.u, a.v;
  q << b.u, b.v;
  return projective_distance(p, q);
}

Mobius::Mobius(Complex a, Complex b, Complex c, Complex d) {
  const Complex det = a * d - b * c;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (!(std::abs(det) > 1e-14 * scale * scale))
    throw NotGroupElementError("Mobius transformation with vanishing determinant");
  const Complex s = std::sqrt(det);
  a_ = a / s;
  b_ = b / s;
  c_ = c / s;
  d_ = d / s;
}

Mobius Mobius::operator*(const Mobius& o) const {
  return Mobius(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
                c_ * o.b_ + d_ * o.d_);
}

Mobius Mobius::inverse() const { return Mobius(d_, -b_, -c_, a_); }

P1Point Mobius::apply(const P1Point& p) const {
  P1Point out{a_ * p.u + b_ * p.v, c_ * p.u + d_ * p.v};
  const double s = std::max(std::abs(out.u), std::abs(out.v));
  out.u /= s;
  out.v /= s;
  return out;
}

Mobius loxodromic(Complex attracting, Complex repelling, Complex k) {
  if (!(std::abs(k) > 1.0)) throw UsageError("loxodromic multiplier needs |k| > 1");
  if (attracting == repelling) throw UsageError("loxodromic fixed points must differ");
  // M(z) = (u z + v) / (z + 1) sends 0 to the repelling and infinity to the
  // attracting point; conjugate z -> k z by it.
  const Mobius m(attracting, repelling, 1.0, 1.0);
  const Complex s = std::sqrt(k);
  return m * Mobius(s, 0.0, 0.0, 1.0 / s) * m.inverse();
}

Mobius mobius_word(const std::vector<Mobius>& generators, const Word& word) {
  Mobius out;
  for (int x : word) {
    const auto g = static_cast<std::size_t>(std::abs(x) - 1);
    if (x == 0 || g >= generators.size()) throw UsageError("word letter out of range");
    out = out * (x > 0 ? generators[g] : generators[g].inverse());
  }
  return out;
}

std::string to_string(MobiusClass c) {
  switch (c) {
    case MobiusClass::Loxodromic: return "loxodromic";
    case MobiusClass::Parabolic: return "parabolic";
    case MobiusClass::Elliptic: return "elliptic";
  }
  return "loxodromic";
}

FixedPoints mobius_fixed_points(const Mobius& g, double tol) {
  const Complex a = g.a(), b = g.b(), c = g.c(), d = g.d();
  if (std::abs(b) <= tol && std::abs(c) <= tol && std::abs(a - d) <= tol)
    throw UsageError("identity has no isolated fixed points");
  const Complex tr2 = g.trace() * g.trace();
  FixedPoints out;
  if (std::abs(tr2 - 4.0) <= 1e3 * tol) {
    out.kind = MobiusClass::Parabolic;
  } else if (std::abs(tr2.imag()) <= tol && tr2.real() >= 0.0 && tr2.real() < 4.0) {
    out.kind = MobiusClass::Elliptic;
  }

  // multiplier at a fixed point [u : v] is (c u / v + d)^{-2}; at infinity d^2.
  const auto multiplier = [&](const P1Point& p) {
    const Complex den = c * p.u + d * p.v;
    return std::norm(p.v) / std::norm(den);
  };
  std::array<P1Point, 2> pts;
  if (std::abs(c) <= tol) {
    pts[0] = P1Point::infinity();
    pts[1] = std::abs(d - a) <= tol ? P1Point::infinity() : P1Point{b, d - a};
  } else {
    const Complex root = std::sqrt((a + d) * (a + d) - 4.0);
    pts[0] = P1Point{a - d + root, 2.0 * c};
    pts[1] = P1Point{a - d - root, 2.0 * c};
  }
  const auto modulus = [&](const P1Point& p) {
    if (p.is_infinite()) return std::norm(d);
    return multiplier(p);
  };
  if (modulus(pts[0]) <= modulus(pts[1])) {
    out.attracting = pts[0];
    out.repelling = pts[1];
  } else {
    out.attracting = pts[1];
    out.repelling = pts[0];
  }
  return out;
}

CVector twisted_cubic_point(const P1Point& p) {
  CVector z(4);
  z << p.u * p.u * p.u, p.u * p.u * p.v, p.u * p.v * p.v, p.v * p.v * p.v;
  return z;
}

CMatrix twisted_cubic_matrix(const Mobius& g) {
  const Complex a = g.a(), b = g.b(), c = g.c(), d = g.d();
  CMatrix m(4, 4);
  m << a * a * a, 3.0 * a * a * b, 3.0 * a * b * b, b * b * b,
      a * a * c, a * a * d + 2.0 * a * b * c, 2.0 * a * b * d + b * b * c, b * b * d,
      a * c * c, 2.0 * a * c * d + b * c * c, a * d * d + 2.0 * b * c * d, b * d * d,
      c * c * c, 3.0 * c * c * d, 3.0 * c * d * d, d * d * d;
  return m;
}

ProjectiveMap twisted_cubic_rep(const Mobius& g) { return ProjectiveMap::from_matrix(twisted_cubic_matrix(g)); }

CMatrix twisted_cubic_compound_formula(const Mobius& g) {
  const Complex a = g.a(), b = g.b(), c = g.c(), d = g.d();
  const Complex s = a * d + b * c;
  const Complex abcd = a * b * c * d;
  const Complex mid = a * a * d * d + abcd + b * b * c * c;
  CMatrix m(6, 6);
  m << std::pow(a, 4), 2.0 * std::pow(a, 3) * b, a * a * b * b, 3.0 * a * a * b * b, 2.0 * a * std::pow(b, 3), std::pow(b, 4),
      2.0 * std::pow(a, 3) * c, a * a * (a * d + 3.0 * b * c), a * b * s, 3.0 * a * b * s, b * b * (3.0 * a * d + b * c), 2.0 * std::pow(b, 3) * d,
      3.0 * a * a * c * c, 3.0 * a * c * s, mid, 9.0 * abcd, 3.0 * b * d * s, 3.0 * b * b * d * d,
      a * a * c * c, a * c * s, abcd, mid, b * d * s, b * b * d * d,
      2.0 * a * std::pow(c, 3), c * c * (3.0 * a * d + b * c), c * d * s, 3.0 * c * d * s, d * d * (a * d + 3.0 * b * c), 2.0 * b * std::pow(d, 3),
      std::pow(c, 4), 2.0 * std::pow(c, 3) * d, c * c * d * d, 3.0 * c * c * d * d, 2.0 * c * std::pow(d, 3), std::pow(d, 4);
  return m;
}

CMatrix tangent_graph(Complex l) {
  CMatrix x(2, 2);
  x << 3.0 * l * l, -2.0 * l * l * l, 2.0 * l, -l * l;
  return x;
}

NPlane tangent_line(Complex lambda) { return NPlane::from_graph(tangent_graph(lambda)); }

NPlane tangent_line(const P1Point& p) {
  if (!p.is_infinite()) return tangent_line(p.value());
  // Span of the partial derivatives of (u^3, u^2 v, u v^2, v^3).
  const Complex u = p.u, v = p.v;
  CMatrix basis(4, 2);
  basis << 3.0 * u * u, 0.0,
      2.0 * u * v, u * u,
      v * v, 2.0 * u * v,
      0.0, 3.0 * v * v;
  return NPlane::from_basis(basis);
}

CMatrix segre_matrix(const Mobius& g) {
  const CMatrix i2 = CMatrix::Identity(2, 2);
  return block_matrix(g.a() * i2, g.b() * i2, g.c() * i2, g.d() * i2);
}

ProjectiveMap segre_rep(const Mobius& g) { return ProjectiveMap::from_matrix(segre_matrix(g)); }

NPlane segre_line(const P1Point& mu) {
  CMatrix basis = CMatrix::Zero(4, 2);
  basis(0, 0) = mu.u;
  basis(2, 0) = mu.v;
  basis(1, 1) = mu.u;
  basis(3, 1) = mu.v;
  return NPlane::from_basis(basis);
}

namespace {

GroupSpec mobius_group(const std::vector<Mobius>& generators, std::vector<std::string> names,
                       CMatrix (*rep)(const Mobius&)) {
  std::vector<CMatrix> mats;
  for (const auto& g : generators) mats.push_back(rep(g));
  const auto structure = generators.size() == 1 ? GroupStructure::Cyclic : GroupStructure::Free;
  return make_group_spec(1, mats, structure, {}, std::move(names));
}

}  // namespace

GroupSpec twisted_cubic_group(const std::vector<Mobius>& generators, std::vector<std::string> names) {
  return mobius_group(generators, std::move(names), twisted_cubic_matrix);
}

GroupSpec segre_group(const std::vector<Mobius>& generators, std::vector<std::string> names) {
  return mobius_group(generators, std::move(names), segre_matrix);
}

std::vector<Mobius> classical_schottky_pair(double k) {
  const Complex i(0.0, 1.0);
  return {loxodromic(1.0, -1.0, k), loxodromic(i, -i, k)};
}

CMatrix shear_frame(int n) {
  const CMatrix id = CMatrix::Identity(n + 1, n + 1);
  return block_matrix(id, id, -id, id);
}

CMatrix swap_matrix(int n) {
  const CMatrix id = CMatrix::Identity(n + 1, n + 1);
  const CMatrix zero = CMatrix::Zero(n + 1, n + 1);
  return block_matrix(zero, id, id, zero);
}

CMatrix scaling_matrix(int n, double a) {
  const CMatrix id = CMatrix::Identity(n + 1, n + 1);
  return block_diag(a * id, id / a);
}

GroupSpec schottky_group(const CMatrix& A, const CMatrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows() || A.rows() < 2)
    throw UsageError("Schottky blocks must be square of equal size n+1 >= 2");
  const auto ea = Eigen::ComplexEigenSolver<CMatrix>(A).eigenvalues();
  const auto eb = Eigen::ComplexEigenSolver<CMatrix>(B).eigenvalues();
  double max_a = 0.0, min_b = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ea.size(); ++i) max_a = std::max(max_a, std::abs(ea(i)));
  for (Eigen::Index i = 0; i < eb.size(); ++i) min_b = std::min(min_b, std::abs(eb(i)));
  if (!(max_a < min_b - 1e-9))
    throw InvalidSchottkyError("eigenvalues of A must be smaller in modulus than those of B (max |alpha| = " +
                               std::to_string(max_a) + ", min |beta| = " + std::to_string(min_b) + ")");
  const int n = static_cast<int>(A.rows()) - 1;
  GroupSpec spec = make_group_spec(n, {block_diag(A, B)}, GroupStructure::Cyclic, {}, {"g"});
  spec.frame = shear_frame(n);
  spec.frame_label = "shear";
  return spec;
}

double k_r_closed_form(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw UsageError("K_r needs 0 <= r < 1");
  return (1.0 + r) / (2.0 * (1.0 - r));
}

namespace {

double k_r_objective(const CMatrix& x, const CMatrix& y) {
  const auto k = x.rows();
  const CMatrix id = CMatrix::Identity(k, k);
  const CMatrix p = (id + x) * (id - x).partialPivLu().inverse();
  const CMatrix q = (id + y) * (id - y).partialPivLu().inverse();
  const RVector sv = singular_values(CMatrix(p + q));
  const double smin = sv(sv.size() - 1);
  return smin > 0.0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
}

CMatrix clamp_norm(CMatrix x, double r) {
  const double norm = operator_norm(x);
  if (norm > r) x *= r / norm;
  return x;
}

}  // namespace

KrEstimate estimate_k_r(double r, int n, int samples, int refinements, std::uint64_t seed) {
  if (!(r > 0.0 && r < 1.0)) throw UsageError("K_r estimate needs 0 < r < 1");
  if (n < 1) throw UsageError("K_r estimate needs n >= 1");
  const auto k = static_cast<Eigen::Index>(n + 1);
  const CMatrix id = CMatrix::Identity(k, k);
  Rng rng(seed);
  KrEstimate best;
  best.value = -1.0;
  const auto consider = [&](const CMatrix& x, const CMatrix& y) {
    const double v = k_r_objective(x, y);
    if (v > best.value) {
      best.value = v;
      best.x = x;
      best.y = y;
    }
  };
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0}) consider(sx * r * id, sy * r * id);
  const auto random_ball_point = [&] {
    CMatrix g = rng.complex_gaussian_matrix(k, k);
    return CMatrix(g * (r / operator_norm(g)));
  };
  for (int s = 0; s < samples; ++s) consider(random_ball_point(), random_ball_point());
  best.samples = samples + 4;

  double step = 0.25 * r;
  int failures = 0;
  for (int it = 0; it < refinements; ++it) {
    const CMatrix x = clamp_norm(best.x + step * rng.complex_gaussian_matrix(k, k) / std::sqrt(2.0 * k), r);
    const CMatrix y = clamp_norm(best.y + step * rng.complex_gaussian_matrix(k, k) / std::sqrt(2.0 * k), r);
    const double before = best.value;
    consider(x, y);
    if (best.value <= before && ++failures >= 10) {
      step *= 0.5;
      failures = 0;
    }
  }
  best.refinements = refinements;
  return best;
}

KleinCombination klein_combine(const GroupSpec& spec1, const GroupSpec& spec2, double r,
                               const KleinOptions& options) {
  if (!(r > 0.0 && r < 1.0)) throw CombinationInfeasibleError("r must lie in (0, 1)");
  if (spec1.n != spec2.n) throw UsageError("Klein combination factors must have the same n");
  for (const auto* s : {&spec1, &spec2})
    if (s->structure == GroupStructure::FreeProduct)
      throw UsageError("Klein combination factors must be free or cyclic groups");
  const int n = spec1.n;

  KleinCombinationConfig cfg;
  cfg.r = r;
  VREstimate e1, e2;
  try {
    e1 = v_r_estimate(spec1, options.estimate_length);
    e2 = v_r_estimate(spec2, options.estimate_length);
  } catch (const UnboundedBlockError& e) {
    throw CombinationInfeasibleError(std::string("factor estimate is unbounded: ") + e.what());
  }
  cfg.rho1 = e1.rho;
  cfg.rho2 = e2.rho;
  cfg.r1 = std::max(e1.R, e2.R);
  const auto inv = [](double v) { return v > 0.0 ? 1.0 / v : std::numeric_limits<double>::infinity(); };
  const double a2_max = std::min({cfg.r1 > 0.0 ? r / cfg.r1 : std::numeric_limits<double>::infinity(),
                                  inv(cfg.rho1), inv(cfg.rho2)});
  if (!std::isfinite(a2_max) && !options.a)
    throw CombinationInfeasibleError("no bound on the scaling: both factors are trivial");
  if (options.a) {
    if (!(*options.a > 0.0)) throw CombinationInfeasibleError("scaling a must be positive");
    if (*options.a * *options.a > a2_max * (1.0 + 1e-12))
      throw CombinationInfeasibleError("scaling a^2 = " + std::to_string(*options.a * *options.a) +
                                       " exceeds the admissible bound " + std::to_string(a2_max));
    cfg.a = *options.a;
  } else {
    cfg.a = std::sqrt(a2_max);
  }

  const KrEstimate kr = estimate_k_r(r, n, options.k_r_samples, options.k_r_refinements, options.seed);
  cfg.K_r = kr.value;
  cfg.k_r_samples = kr.samples;
  cfg.k_r_refinements = kr.refinements;
  if (!(cfg.K_r < 1.0))
    throw CombinationInfeasibleError("K_r = " + std::to_string(cfg.K_r) + " is not below 1; choose a smaller r");

  const CMatrix tau = shear_frame(n);
  const CMatrix alpha = scaling_matrix(n, cfg.a);
  const CMatrix c1 = tau * alpha;
  const CMatrix c2 = tau * swap_matrix(n) * alpha;
  const CMatrix c1_inv = c1.partialPivLu().inverse();
  const CMatrix c2_inv = c2.partialPivLu().inverse();

  std::vector<CMatrix> mats;
  std::vector<std::string> names;
  const auto add = [&](const GroupSpec& s, const CMatrix& c, const CMatrix& c_inv, const std::string& suffix,
                       const std::vector<std::string>& other) {
    for (const auto& g : s.framed().generators) {
      mats.push_back(c * g.map.rep() * c_inv);
      const bool clash = std::find(other.begin(), other.end(), g.name) != other.end();
      names.push_back(clash ? g.name + suffix : g.name);
    }
  };
  add(spec1, c1, c1_inv, "1", spec2.names());
  add(spec2, c2, c2_inv, "2", spec1.names());

  GroupSpec spec = make_group_spec(
      n, mats, GroupStructure::FreeProduct,
      {static_cast<int>(spec1.generators.size()), static_cast<int>(spec2.generators.size())}, names);
  spec.frame_label = "klein";
  spec.max_word_length = std::max(spec1.max_word_length, spec2.max_word_length);
  return {std::move(spec), cfg};
}

CMatrix cone_generator(Complex alpha, Complex p, Complex q, Complex r) {
  CMatrix g = CMatrix::Zero(4, 4);
  g(0, 0) = alpha * alpha;
  g(1, 1) = 1.0;
  g(2, 2) = 1.0 / (alpha * alpha);
  g(3, 0) = p;
  g(3, 1) = q;
  g(3, 2) = r;
  g(3, 3) = 1.0;
  return g;
}

CMatrix cone_frame() {
  CMatrix w(4, 4);
  w << 1, 1, -1, -1,
      -1, 1, 1, -1,
      1, -1, 1, 1,
      0, 0, 0, 1;
  return w;
}

ConeExample cone_example(Complex alpha, Complex p, Complex q, Complex r) {
  if (!(std::abs(alpha) > 1.0)) throw UsageError("cone example needs |alpha| > 1");
  ConeExample out{make_group_spec(1, {cone_generator(alpha, p, q, r)}, GroupStructure::Cyclic, {}, {"g"}),
                  cone_generator(alpha, p, q, r), std::nullopt, std::nullopt};
  out.spec.frame = cone_frame();
  out.spec.frame_label = "cone";
  if (q != Complex(0.0)) {
    out.forward_limit = coordinate_plane(1, {0, 3});
    out.backward_limit = coordinate_plane(1, {2, 3});
  }
  return out;
}

CMatrix cone_compound_formula_alt_basis(Complex alpha, Complex p, Complex q, Complex r, int n) {
  if (n < 0) throw UsageError("cone closed form needs n >= 0");
  const Complex a2 = alpha * alpha;
  const Complex up = std::pow(a2, n);
  const Complex down = 1.0 / up;
  const double nn = n;
  CMatrix m = CMatrix::Zero(6, 6);
  m(0, 0) = up;
  m(1, 1) = 1.0;
  m(2, 2) = down;
  m(3, 0) = nn * up * q;
  m(3, 1) = (1.0 - up) / (1.0 / a2 - 1.0) * r;
  m(3, 3) = up;
  m(4, 0) = -(up - 1.0) / (a2 - 1.0) * p;
  m(4, 2) = (down - 1.0) / (1.0 / a2 - 1.0) * r;
  m(4, 4) = 1.0;
  m(5, 1) = -(1.0 - down) / (a2 - 1.0) * p;
  m(5, 2) = -nn * down * q;
  m(5, 5) = down;
  return m;
}

CMatrix cone_compound_formula(Complex alpha, Complex p, Complex q, Complex r, int n) {
  // basis e01, e02, e12, e03, e13, e23 -> lexicographic position
  constexpr std::array<int, 6> lex = {0, 1, 3, 2, 4, 5};
  const CMatrix alt = cone_compound_formula_alt_basis(alpha, p, q, r, n);
  CMatrix m(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) m(lex[static_cast<std::size_t>(i)], lex[static_cast<std::size_t>(j)]) = alt(i, j);
  return m;
}

}  // namespace typel
