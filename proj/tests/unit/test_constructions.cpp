#include <doctest.h>

#include "oracles.hpp"
#include "typel/constructions.hpp"
#include "typel/errors.hpp"
#include "typel/exterior_algebra.hpp"
#include "typel/limit_dynamics.hpp"
#include "typel/random.hpp"

using namespace typel;

namespace {

Mobius random_mobius(Rng& rng) {
  while (true) {
    const Complex a = rng.complex_gaussian(), b = rng.complex_gaussian(), c = rng.complex_gaussian(),
                  d = rng.complex_gaussian();
    if (std::abs(a * d - b * c) > 0.1) return Mobius(a, b, c, d);
  }
}

Mobius random_loxodromic(Rng& rng) {
  return loxodromic(rng.complex_gaussian(), rng.complex_gaussian(), std::polar(rng.uniform(1.5, 4.0), rng.uniform(0, 6.28)));
}

CVector cubic(Complex s) {
  CVector v(4);
  v << s * s * s, s * s, s, 1.0;
  return v;
}

double projective_matrix_gap(const CMatrix& a, const CMatrix& b) {
  return oracle::chordal(Eigen::Map<const CVector>(a.data(), a.size()), Eigen::Map<const CVector>(b.data(), b.size()));
}

}  // namespace

TEST_CASE("twisted cubic representation") {
  CHECK(projective_matrix_gap(twisted_cubic_rep(Mobius()).rep(), CMatrix::Identity(4, 4)) < 1e-15);
  CMatrix t(4, 4);
  t << 1, 3, 3, 1, 0, 1, 2, 1, 0, 0, 1, 1, 0, 0, 0, 1;
  CHECK(projective_matrix_gap(twisted_cubic_matrix(Mobius(1, 1, 0, 1)), t) < 1e-15);

  Rng rng(61);
  for (int k = 0; k < 100; ++k) {
    const Mobius g = random_mobius(rng), h = random_mobius(rng);
    const Complex s = rng.complex_gaussian();
    const Complex gs = (g.a() * s + g.b()) / (g.c() * s + g.d());
    CHECK(oracle::chordal(cubic(gs), twisted_cubic_matrix(g) * cubic(s)) <= 1e-10);
    CHECK(projective_matrix_gap(twisted_cubic_matrix(g * h), twisted_cubic_matrix(g) * twisted_cubic_matrix(h)) <=
          1e-9);
    CHECK(projective_matrix_gap(segre_matrix(g * h), segre_matrix(g) * segre_matrix(h)) <= 1e-9);
    const CMatrix minors = oracle::compound(twisted_cubic_matrix(g));
    const CMatrix closed = twisted_cubic_compound_formula(g);
    CHECK(max_abs(CMatrix(minors - closed)) <= 1e-9 * max_abs(minors));
  }
}

TEST_CASE("tangent lines") {
  CVector e23 = CVector::Zero(6);
  e23(5) = 1.0;
  CHECK(oracle::chordal(tangent_line(0.0).plucker(), e23) < 1e-15);
  CVector expected(6);
  expected << 1, 2, 3, 1, 2, 1;
  CHECK(oracle::chordal(tangent_line(1.0).plucker(), expected) < 1e-12);
  CVector e01 = CVector::Zero(6);
  e01(0) = 1.0;
  CHECK(oracle::chordal(tangent_line(P1Point::infinity()).plucker(), e01) < 1e-15);

  Rng rng(62);
  for (int k = 0; k < 100; ++k) {
    const Complex l = rng.complex_gaussian();
    CMatrix b(4, 2);
    b.col(0) = cubic(l);
    b.col(1) << 3.0 * l * l, 2.0 * l, 1.0, 0.0;
    CHECK(oracle::chordal(tangent_line(l).plucker(), oracle::plucker(b)) <= 1e-10);
    CHECK(plane_distance(tangent_line(l), tangent_line(P1Point{2.0 * l, 2.0})).value <= 1e-10);
  }
}

TEST_CASE("Segre representation") {
  CHECK(projective_matrix_gap(segre_rep(Mobius()).rep(), CMatrix::Identity(4, 4)) < 1e-15);
  const Mobius d(4.0, 0.0, 0.0, 0.25);
  const LimitPlaneResult inf = limit_nplane(power_sequence(segre_rep(d), 60));
  CHECK(plane_distance(inf.plane, segre_line(P1Point::infinity())).value <= 1e-8);
  CHECK(plane_distance(inf.plane, coordinate_plane(1, {0, 1})).value <= 1e-8);

  Rng rng(63);
  for (int k = 0; k < 5; ++k) {
    const Mobius g = random_loxodromic(rng);
    const auto [attr, rep] = oracle::mobius_fixed_points(g.a(), g.b(), g.c(), g.d());
    CMatrix b(4, 2);
    b << attr, 0, 0, attr, 1, 0, 0, 1;
    const LimitPlaneResult lim = limit_nplane(power_sequence(segre_rep(g), 200));
    CHECK(oracle::chordal(lim.plane.plucker(), oracle::plucker(b)) <= 1e-6);
  }

  // cloud planes of the Segre image sit on {z' = mu z''} for limit points mu
  const auto mob = classical_schottky_pair();
  const LimitCloud cloud = limit_set_cloud(segre_group(mob), 8, 1, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < cloud.words.size(); ++i) {
    const Mobius w = mobius_word(mob, cloud.words[i]);
    const auto [attr, rep] = oracle::mobius_fixed_points(w.a(), w.b(), w.c(), w.d());
    worst = std::max(worst, plane_distance(cloud.planes[i], segre_line(P1Point::finite(attr))).value);
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("mobius_fixed_points") {
  const FixedPoints d = mobius_fixed_points(Mobius(3.0, 0.0, 0.0, 1.0 / 3));
  CHECK(d.kind == MobiusClass::Loxodromic);
  CHECK(d.attracting.is_infinite());
  CHECK(std::abs(d.repelling.value()) < 1e-15);
  const FixedPoints p = mobius_fixed_points(Mobius(1, 1, 0, 1));
  CHECK(p.kind == MobiusClass::Parabolic);
  CHECK(p.attracting.is_infinite());
  CHECK_THROWS_AS(mobius_fixed_points(Mobius()), UsageError);
  CHECK(mobius_fixed_points(Mobius(std::polar(1.0, 0.3), 0, 0, std::polar(1.0, -0.3))).kind == MobiusClass::Elliptic);

  Rng rng(64);
  for (int k = 0; k < 20; ++k) {
    const Mobius g = random_loxodromic(rng);
    const auto [attr, rep] = oracle::mobius_fixed_points(g.a(), g.b(), g.c(), g.d());
    const FixedPoints f = mobius_fixed_points(g);
    CHECK(p1_distance(f.attracting, P1Point::finite(attr)) <= 1e-9);
    CHECK(p1_distance(f.repelling, P1Point::finite(rep)) <= 1e-9);
  }
  // the requested fixed points and multiplier
  const Mobius l = loxodromic(Complex(1, 2), Complex(-1, 0.5), 3.0);
  const FixedPoints lf = mobius_fixed_points(l);
  CHECK(std::abs(lf.attracting.value() - Complex(1, 2)) < 1e-12);
  CHECK(std::abs(lf.repelling.value() - Complex(-1, 0.5)) < 1e-12);
}

TEST_CASE("Schottky groups") {
  const GroupSpec s = schottky_group(Eigen::Vector2cd(0.5, 1.0 / 3).asDiagonal(), Eigen::Vector2cd(2, 3).asDiagonal());
  CHECK(s.structure == GroupStructure::Cyclic);
  CHECK(s.frame_label == "shear");
  CHECK_THROWS_AS(schottky_group(Eigen::Vector2cd(0.5, 2.0).asDiagonal(), Eigen::Vector2cd(2, 3).asDiagonal()),
                  InvalidSchottkyError);
  const auto pair = classical_schottky_pair();
  REQUIRE(pair.size() == 2);
  for (const auto& g : pair) CHECK(mobius_fixed_points(g).kind == MobiusClass::Loxodromic);
}

TEST_CASE("K_r estimator against the closed form") {
  const KrEstimate small = estimate_k_r(0.01, 1);
  CHECK(std::abs(small.value - 0.5) <= 0.05);
  for (double r : {0.05, 0.2, 0.5}) {
    const KrEstimate e = estimate_k_r(r, 1, 200, 100);
    // the sup is attained at X = Y = -rI: |(2 (1-r)/(1+r))^{-1}|
    const double direct = 1.0 / (2.0 * (1.0 - r) / (1.0 + r));
    CHECK(k_r_closed_form(r) == doctest::Approx(direct));
    CHECK(e.value <= direct * (1.0 + 1e-9));
    CHECK(e.value >= direct * 0.999);
  }
}

TEST_CASE("Klein combination of cyclic Schottky factors") {
  const GroupSpec s1 = schottky_group(Eigen::Vector2cd(0.5, 1.0 / 3).asDiagonal(), Eigen::Vector2cd(2, 3).asDiagonal());
  const GroupSpec s2 = schottky_group(Eigen::Vector2cd(0.25, 0.5).asDiagonal(), Eigen::Vector2cd(3, 4).asDiagonal());
  KleinOptions opt;
  opt.k_r_samples = 100;
  opt.k_r_refinements = 50;
  const KleinCombination kc = klein_combine(s1, s2, 0.1, opt);
  CHECK(kc.spec.structure == GroupStructure::FreeProduct);
  CHECK(kc.spec.generators.size() == 2);
  CHECK(kc.spec.names() == std::vector<std::string>{"g1", "g2"});
  CHECK(kc.config.K_r < 1.0);
  CHECK(kc.config.a * kc.config.a <= 0.1 / kc.config.r1 * (1 + 1e-12));

  const GroupSpec framed = kc.spec.framed();
  for (const auto& g : enumerate_words(framed, 4).elements) {
    if (g.word().empty()) continue;
    const auto syl = syllables(framed, g.word());
    double bound = std::pow(kc.config.K_r, static_cast<double>(syl.size()) - 1);
    for (const auto& s : syl) bound *= c_inverse_norm(evaluate_word(framed, s));
    CHECK(c_inverse_norm(g) <= bound * (1 + 1e-6));
  }

  KleinOptions too_big = opt;
  too_big.a = 10.0;
  CHECK_THROWS_AS(klein_combine(s1, s2, 0.1, too_big), CombinationInfeasibleError);
  CHECK_THROWS_AS(klein_combine(s1, s2, 1.5, opt), CombinationInfeasibleError);
}

TEST_CASE("cone example") {
  CHECK_THROWS_AS(cone_example(0.5, 1.0, 1.0, 1.0), UsageError);
  const Complex alpha = 2.0, p = 1.0, r = 1.0;
  const CMatrix g = cone_generator(alpha, p, 1.0, r);
  CMatrix power = CMatrix::Identity(4, 4);
  for (int n = 1; n <= 10; ++n) {
    power = power * g;
    const CMatrix minors = oracle::compound(power);
    CHECK(max_abs(CMatrix(minors - cone_compound_formula(alpha, p, 1.0, r, n))) <= 1e-8 * max_abs(minors));
    // basis order 01 02 12 03 13 23 against lex order
    const CMatrix alt = cone_compound_formula_alt_basis(alpha, p, 1.0, r, n);
    const int perm[6] = {0, 1, 3, 2, 4, 5};
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) CHECK(std::abs(alt(i, j) - minors(perm[i], perm[j])) <= 1e-8 * max_abs(minors));
  }
  const ConeExample q1 = cone_example(alpha, p, 1.0, r);
  REQUIRE(q1.forward_limit.has_value());
  const auto fwd = limit_nplane(doubling_sequence(q1.spec.generators[0].map, 60)).plane;
  const auto bwd = limit_nplane(doubling_sequence(q1.spec.generators[0].map.inverse(), 60)).plane;
  CHECK(plane_distance(fwd, coordinate_plane(1, {0, 3})).value <= 1e-6);
  CHECK(plane_distance(bwd, coordinate_plane(1, {2, 3})).value <= 1e-6);
  CHECK(plane_distance(fwd, *q1.forward_limit).value <= 1e-6);
  CHECK_THROWS_AS(limit_nplane(doubling_sequence(cone_example(alpha, p, 0.0, r).spec.generators[0].map, 60)),
                  NotLimitPlaneError);
}
