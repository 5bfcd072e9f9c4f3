#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "typel/group.hpp"
#include "typel/linalg.hpp"
#include "typel/planes.hpp"

namespace typel {

/// Point [u : v] of P^1; [lambda : 1] is the finite point lambda, [1 : 0] is infinity.
struct P1Point {
  Complex u{1.0};
  Complex v{0.0};

  static P1Point finite(Complex lambda) { return {lambda, 1.0}; }
  static P1Point infinity() { return {1.0, 0.0}; }
  bool is_infinite(double tol = 1e-14) const { return std::abs(v) <= tol * std::abs(u); }
  /// u / v; throws UsageError at infinity.
  Complex value() const;
};

/// Chordal distance on P^1, same convention as projective_distance.
double p1_distance(const P1Point& a, const P1Point& b);

/// Element of PSL_2(C) with ad - bc = 1.
class Mobius {
 public:
  Mobius() = default;
  /// Rescales so that ad - bc = 1. Throws NotGroupElementError if the
  /// determinant vanishes.
  Mobius(Complex a, Complex b, Complex c, Complex d);

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  Complex c() const { return c_; }
  Complex d() const { return d_; }

  Mobius operator*(const Mobius& other) const;
  Mobius inverse() const;
  P1Point apply(const P1Point& p) const;
  Complex trace() const { return a_ + d_; }

 private:
  Complex a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
};

/// Loxodromic element with the given attracting and repelling fixed points
/// (finite, distinct) and multiplier k, |k| > 1: the derivative at the
/// repelling point is k.
Mobius loxodromic(Complex attracting, Complex repelling, Complex k);

/// Product of Mobius generators along a word (same letter convention as Word).
Mobius mobius_word(const std::vector<Mobius>& generators, const Word& word);

enum class MobiusClass { Loxodromic, Parabolic, Elliptic };
std::string to_string(MobiusClass c);

struct FixedPoints {
  P1Point attracting;
  P1Point repelling;
  MobiusClass kind = MobiusClass::Loxodromic;
};

/// Roots of c z^2 + (d - a) z - b = 0, ordered by multiplier modulus. For
/// parabolic and elliptic elements both entries hold a fixed point (equal
/// for parabolic). Throws UsageError for the identity.
FixedPoints mobius_fixed_points(const Mobius& g, double tol = 1e-12);

/// tau([s : 1]) = [s^3 : s^2 : s : 1], homogeneous version on [u : v].
CVector twisted_cubic_point(const P1Point& p);

/// The 4x4 matrix with tau o g = tau_*(g) o tau.
CMatrix twisted_cubic_matrix(const Mobius& g);
ProjectiveMap twisted_cubic_rep(const Mobius& g);

/// Closed-form polynomial entries of the compound of twisted_cubic_matrix,
/// basis e01, e02, e03, e12, e13, e23.
CMatrix twisted_cubic_compound_formula(const Mobius& g);

/// L_lambda = [[3 l^2, -2 l^3], [2 l, -l^2]].
CMatrix tangent_graph(Complex lambda);

/// Tangent line to the twisted cubic at tau([lambda : 1]) (graph L_lambda).
NPlane tangent_line(Complex lambda);
/// Same at a homogeneous point; infinity gives the plane e0 ^ e1.
NPlane tangent_line(const P1Point& p);

/// [[aI, bI], [cI, dI]] with 2x2 identity blocks.
CMatrix segre_matrix(const Mobius& g);
ProjectiveMap segre_rep(const Mobius& g);
/// {z' = mu z''}; mu = infinity gives e0 ^ e1.
NPlane segre_line(const P1Point& mu);

/// Group specs of the two representations; names default to a, b, ...
GroupSpec twisted_cubic_group(const std::vector<Mobius>& generators, std::vector<std::string> names = {});
GroupSpec segre_group(const std::vector<Mobius>& generators, std::vector<std::string> names = {});

/// Two loxodromic generators with fixed points +-1 and +-i and real
/// multiplier k. Infinity lies in the set of discontinuity for k >= 4.
std::vector<Mobius> classical_schottky_pair(double k = 16.0);

/// Shear frame [[I, I], [-I, I]]: w' = z' + z'', w'' = -z' + z''.
CMatrix shear_frame(int n);
/// Swap [[0, I], [I, 0]].
CMatrix swap_matrix(int n);
/// diag(a I, a^-1 I).
CMatrix scaling_matrix(int n, double a);

/// Cyclic group generated by diag(A, B), |alpha_j| < |beta_k| for all
/// eigenvalues, in the shear frame. Throws InvalidSchottkyError.
GroupSpec schottky_group(const CMatrix& A, const CMatrix& B);

struct KleinCombinationConfig {
  double r = 0.0;
  double a = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  /// Tube radius {|z'| >= r1 |z''|} contained in both F-regions.
  double r1 = 0.0;
  double K_r = 0.0;
  /// Estimator settings used for K_r.
  int k_r_samples = 0;
  int k_r_refinements = 0;
};

struct KrEstimate {
  double value = 0.0;
  int samples = 0;
  int refinements = 0;
  CMatrix x;
  CMatrix y;
};

/// sup over |X|, |Y| <= r of |((I+X)(I-X)^-1 + (I+Y)(I-Y)^-1)^-1| for
/// (n+1) x (n+1) matrices, by random sampling of the norm-r sphere plus
/// structured seeds and local refinement of the best candidates.
KrEstimate estimate_k_r(double r, int n, int samples = 400, int refinements = 200, std::uint64_t seed = 1);

/// (1 + r) / (2 (1 - r)), the exact value of the supremum above.
double k_r_closed_form(double r);

struct KleinOptions {
  /// Fixed scaling parameter; chosen as large as allowed when absent.
  std::optional<double> a;
  /// Word length for the factor estimates of r1 and rho.
  int estimate_length = 6;
  int k_r_samples = 400;
  int k_r_refinements = 200;
  std::uint64_t seed = 1;
};

struct KleinCombination {
  GroupSpec spec;
  KleinCombinationConfig config;
};

/// Free product of the two factors in the combined w-frame: factor 1 is
/// conjugated by tau alpha, factor 2 by tau sigma alpha, after each factor
/// is expressed in its own frame. Factors must be free or cyclic. Throws
/// CombinationInfeasibleError when no admissible scaling exists.
KleinCombination klein_combine(const GroupSpec& spec1, const GroupSpec& spec2, double r,
                               const KleinOptions& options = {});

struct ConeExample {
  GroupSpec spec;
  CMatrix generator;
  /// Limit lines e0 ^ e3 and e2 ^ e3 (forward and backward) when q != 0.
  std::optional<NPlane> forward_limit;
  std::optional<NPlane> backward_limit;
};

/// The cyclic example acting on the cone z0 z2 = z1^2, with the frame
/// w0 = z0+z1-z2-z3, w1 = -z0+z1+z2-z3, w2 = z0-z1+z2+z3, w3 = z3.
/// Throws UsageError unless |alpha| > 1.
ConeExample cone_example(Complex alpha, Complex p, Complex q, Complex r);
CMatrix cone_generator(Complex alpha, Complex p, Complex q, Complex r);
CMatrix cone_frame();

/// Closed form of the compound of g^n for the cone generator, in the basis
/// e01, e02, e12, e03, e13, e23.
CMatrix cone_compound_formula_alt_basis(Complex alpha, Complex p, Complex q, Complex r, int n);
/// Same matrix in the lexicographic basis used by compound().
CMatrix cone_compound_formula(Complex alpha, Complex p, Complex q, Complex r, int n);

}  // namespace typel
