#pragma once

#include <optional>
#include <string>
#include <vector>

#include "typel/group.hpp"
#include "typel/linalg.hpp"
#include "typel/tolerances.hpp"

namespace typel {

// Everything here works in the frame coordinates w = T z of the spec (the
// working coordinates when the spec has no frame): points are given as w,
// and words act through GroupSpec::framed().

/// mu_g(z) = |z''| / |C z' + D z''| with the determinant-one representative.
/// 1 for the identity, 0 when z'' = 0, +infinity when the denominator is
/// below tol.mu_denominator times its natural scale. Throws CSingularError
/// when C_g is numerically singular.
double mu(const ProjectiveMap& g, const CVector& z, const Tolerances& tol = {});

/// Same quantity without the check on C_g; defined for any g.
double mu_unchecked(const ProjectiveMap& g, const CVector& z, const Tolerances& tol = {});

enum class FordStatus { Interior, Boundary, Exterior, Undecided };
std::string to_string(FordStatus status);

struct FordVerdict {
  CVector point;
  FordStatus status = FordStatus::Undecided;
  std::optional<Word> witness;
  double witness_mu = 0.0;
  /// Largest word length examined.
  int depth = 0;
  double max_mu = 0.0;
  /// max mu per word length 1..depth.
  std::vector<double> shell_max_mu;
  /// A generator of finite order was detected; the F-region results assume
  /// a torsion-free group.
  bool torsion_caveat = false;
};

/// Classifies z against all non-identity words of length <= L:
/// exterior if some mu > 1 + tol.boundary (witness: the largest), boundary
/// if some |mu - 1| <= tol.boundary, interior if every mu < 1 - tol.boundary
/// and the largest mu is not attained in the last shell, undecided otherwise.
FordVerdict ford_membership(const CVector& z, const GroupSpec& spec, int L, const Tolerances& tol = {});

/// Precomputed framed words (e.g. from enumerate_words on spec.framed()),
/// reused across many points.
struct FordContext {
  std::vector<ProjectiveMap> words;
  int depth = 0;
  bool torsion_caveat = false;
};
FordContext make_ford_context(const GroupSpec& spec, int L);
FordVerdict ford_membership(const CVector& z, const FordContext& context, const Tolerances& tol = {});

struct VREstimate {
  double R = 0.0;
  double R0 = 0.0;
  double rho = 0.0;
  Word r0_word;
  Word rho_word;
  int depth = 0;
  /// max over words of each length of max(|C^-1|, |A C^-1|, |C^-1 D|).
  std::vector<double> shell_max;
  /// The last shell raised the running maximum: the estimate may not have
  /// stabilized at this depth.
  bool growing = false;
};

/// R = R0 + rho over words of length 1..L, where R0 bounds |A_g C_g^-1| and
/// |C_g^-1 D_g| and rho bounds |C_g^-1|. An L-truncated estimate. Throws
/// UnboundedBlockError naming the first word with singular C_g.
VREstimate v_r_estimate(const GroupSpec& spec, int L, const Tolerances& tol = {});

struct ShellStats {
  int length = 0;
  std::size_t count = 0;
  double max = 0.0;
  double min = 0.0;
  std::size_t unbounded = 0;
};

struct DeltaSeries {
  double delta = 0.0;
  /// Sum over words of length <= k, k = 1..L.
  std::vector<double> partial_sums;
  /// Contribution of shell k.
  std::vector<double> increments;
};

struct HistogramBin {
  /// Values in [10^lower_exponent, 10^(lower_exponent+1)).
  int lower_exponent = 0;
  std::size_t count = 0;
};

struct ClubSpadeReport {
  std::string frame_label;
  std::vector<ShellStats> shells;
  double rho = 0.0;
  /// First shell from which the shell maxima decrease strictly up to the
  /// end, if any.
  std::optional<int> monotone_from;
  std::string trend;
  std::vector<DeltaSeries> series;
  std::vector<HistogramBin> histogram;
};

/// Shell statistics of |C_g^-1| and partial sums of |C_g^-1|^delta.
ClubSpadeReport club_spade_diagnostics(const GroupSpec& spec, int L, const std::vector<double>& deltas,
                                       const Tolerances& tol = {});

/// Point of the affine chart U_alpha = {z_{n+alpha} != 0}, 1 <= alpha <= n+1:
/// zeta_j = z_j / z_{n+alpha}, and x lists the remaining z'' entries in order.
struct VolumeChart {
  int alpha = 1;
  CVector zeta;
  CVector x;
};

CVector chart_to_point(const VolumeChart& c);
/// Throws ChartEscapeError when z_{n+alpha} vanishes.
VolumeChart point_to_chart(const CVector& z, int alpha);

struct VolumeCheck {
  /// Density ratio of g^*dV to dV from a central-difference Jacobian.
  double lhs = 0.0;
  /// mu_g(z)^{4(n+1)}.
  double rhs = 0.0;
  double rel_err = 0.0;
  /// Density ratio from the closed-form Jacobian determinant of a
  /// projective map in an affine chart.
  double analytic_lhs = 0.0;
};

/// Throws ChartEscapeError when g(z) leaves the chart.
VolumeCheck volume_pullback_check(const ProjectiveMap& g, const VolumeChart& z, double h,
                                  const Tolerances& tol = {});

struct SeparationRow {
  Word word;
  int length = 0;
  double value = 0.0;
};

/// |C_g L + D_g| for every word of length <= L, identity included, sorted by
/// length.
std::vector<SeparationRow> limit_line_separation(const GroupSpec& spec, const CMatrix& l_lambda, int L);

/// Minimum per word length of a separation table.
std::vector<double> separation_shell_minima(const std::vector<SeparationRow>& rows);

/// Point of Sigma_g = {|z''| = |C z' + D z''|}: z'' = eta,
/// z' = C^-1 (U - D) eta for a unitary U. Throws CSingularError.
CVector sigma_point(const ProjectiveMap& g, const CMatrix& unitary, const CVector& eta,
                    const Tolerances& tol = {});

}  // namespace typel
