#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "typel/group.hpp"
#include "typel/linalg.hpp"
#include "typel/planes.hpp"
#include "typel/tolerances.hpp"

namespace typel {

/// Limit of a sequence of normalized matrices.
struct SequenceLimit {
  CMatrix limit_matrix;
  int numerical_rank = 0;
  /// Orthonormal bases of the limit image and limit kernel.
  CMatrix image_basis;
  CMatrix kernel_basis;
  bool converged = false;
  /// sigma_{r+1} / sigma_r for r = numerical_rank; 0 at full rank.
  double gap = 0.0;
  RVector singular_values;
  /// max-entry differences |M_k - M_{k-1}|, k = 1, ..., len - 1.
  std::vector<double> cauchy_differences;
  std::string diagnostics;
};

/// The last element is taken as the limit once the tail is Cauchy: the final
/// max(2, len/4) consecutive differences must all be <= tol.cauchy. A
/// non-Cauchy tail gives converged = false, never an exception. Throws
/// UsageError for fewer than two matrices or mismatched shapes.
SequenceLimit sequence_limit(const std::vector<CMatrix>& mats, const Tolerances& tol = {});

struct LimitPlaneResult {
  NPlane plane;
  double residual_on_quadric = 0.0;
  /// sigma_2 / sigma_1 of the compound limit.
  double rank1_gap = 0.0;
  SequenceLimit compound_limit;
};

/// Limit n-plane of a sequence of distinct group elements (at least 8).
/// Uses the carried compound of each element when present, otherwise the
/// compound of its normalized representative. Throws UndecidedError when the
/// compounds are not Cauchy and NotLimitPlaneError when the limit has rank
/// above one (or sigma_2 / sigma_1 >= tol.rank1_gap).
LimitPlaneResult limit_nplane(const std::vector<ProjectiveMap>& seq, const Tolerances& tol = {});

/// Same, starting from normalized compound matrices.
LimitPlaneResult limit_nplane_from_compounds(const std::vector<CMatrix>& compounds,
                                             const Tolerances& tol = {});

/// g^start, g^(start+1), ..., count terms, with compounds carried along.
/// Words are dropped (set empty) since they would only repeat g.
std::vector<ProjectiveMap> power_sequence(const ProjectiveMap& g, int count, int start = 1);

/// g, g^2, g^4, ..., g^(2^(count-1)) by repeated squaring. Useful when the
/// compounds of g^k converge only polynomially in k.
std::vector<ProjectiveMap> doubling_sequence(const ProjectiveMap& g, int count);

struct CloudPoint {
  CVector point;
  int word_length = 0;
  Word word;
};

struct LimitCloud {
  std::vector<CloudPoint> points;
  /// Planes g(seed) for the words used, in the same order.
  std::vector<NPlane> planes;
  std::vector<Word> words;
  NPlane seed_plane;
  bool partial = false;
};

struct CloudOptions {
  /// Seed plane in working coordinates. Defaults to the preimage under the
  /// frame of {w'' = 0}.
  std::optional<NPlane> seed_plane;
  std::size_t budget = 0;
  bool allow_partial = false;
  int threads = 1;
};

/// Plane {w'' = 0} of the frame, expressed in working coordinates.
NPlane default_seed_plane(const GroupSpec& spec);

/// Images of the seed plane under every reduced word of length L-2 .. L
/// (identity excluded), each sampled at samples_per_plane points. Output
/// order follows the enumeration; point seeds derive from (seed, word index)
/// so the result is independent of the thread count. When the budget cuts
/// the enumeration (allow_partial), the three longest lengths reached are used.
LimitCloud limit_set_cloud(const GroupSpec& spec, int L, int samples_per_plane, std::uint64_t seed,
                           const CloudOptions& options = {});

struct OrbitReport {
  /// distances[p][k] = distance from g^k(probe p) to the target, k = 0..iterations.
  std::vector<std::vector<double>> distances;
  /// Indices of the probes kept, parallel to distances.
  std::vector<std::size_t> kept;
  std::vector<std::size_t> excluded;
  std::vector<std::string> notes;
};

/// Tracks g^k(probe) against the target plane. Probes within 1e-3 of the
/// repelling plane are excluded with a note. When repelling is not given it
/// is taken from the inverse powers of g if that limit exists.
OrbitReport orbit_convergence_report(const ProjectiveMap& g, const NPlane& target,
                                     const std::vector<CVector>& probes, int iterations,
                                     std::optional<NPlane> repelling = std::nullopt);

}  // namespace typel
