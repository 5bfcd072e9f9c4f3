#pragma once

#include <string>

namespace typel {

/// Numerical thresholds shared by all modules. All are relative to the
/// natural scale of the quantity they compare.
struct Tolerances {
  /// Residual of algebraic identities (compound multiplicativity, Q laws).
  double algebraic = 1e-9;
  /// Rank and intersection decisions (singular value / Q thresholds).
  double rank = 1e-8;
  /// Cauchy step below which a normalized sequence counts as converged.
  double cauchy = 1e-8;
  /// sigma_2 / sigma_1 bound for accepting a rank-one compound limit.
  double rank1_gap = 1e-6;
  /// |mu - 1| band that counts as the Ford boundary.
  double boundary = 1e-7;
  /// Invertibility threshold on normalized generators (|det|) and on
  /// sigma_min / sigma_max of the C block.
  double singular = 1e-12;
  /// Denominator threshold in mu_g, relative to the point and block scale.
  double mu_denominator = 1e-14;
  /// Klein-quadric residual |Q(p,p)| / |p|^2 accepted for a limit plane.
  double quadric = 1e-8;

  /// Applies "key=value,key=value" overrides; throws UsageError on an
  /// unknown key or unparsable value.
  void apply_overrides(const std::string& spec);
};

}  // namespace typel
