#include "typel/limit_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "typel/errors.hpp"
#include "typel/exterior_algebra.hpp"
#include "typel/parallel.hpp"
#include "typel/random.hpp"

namespace typel {

SequenceLimit sequence_limit(const std::vector<CMatrix>& mats, const Tolerances& tol) {
  if (mats.size() < 2) throw UsageError("sequence_limit needs at least two matrices");
  for (const auto& m : mats)
    if (m.rows() != mats.front().rows() || m.cols() != mats.front().cols())
      throw UsageError("sequence_limit on matrices of different shape");

  SequenceLimit out;
  out.cauchy_differences.reserve(mats.size() - 1);
  for (std::size_t k = 1; k < mats.size(); ++k)
    out.cauchy_differences.push_back(max_abs(CMatrix(mats[k] - mats[k - 1])));

  const std::size_t tail =
      std::min(out.cauchy_differences.size(), std::max<std::size_t>(2, mats.size() / 4));
  const auto first = out.cauchy_differences.end() - static_cast<std::ptrdiff_t>(tail);
  const double worst = *std::max_element(first, out.cauchy_differences.end());
  out.converged = worst <= tol.cauchy;

  out.limit_matrix = mats.back();
  Eigen::JacobiSVD<CMatrix> svd(out.limit_matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
    if (out.singular_values(i) > tol.rank * smax) ++rank;
  out.numerical_rank = rank;
  out.image_basis = svd.matrixU().leftCols(rank);
  out.kernel_basis = svd.matrixV().rightCols(out.limit_matrix.cols() - rank);
  out.gap = rank > 0 && rank < out.singular_values.size()
                ? out.singular_values(rank) / out.singular_values(rank - 1)
                : 0.0;

  std::ostringstream diag;
  diag << "terms=" << mats.size() << " tail=" << tail << " worst_tail_difference=" << worst
       << " rank=" << rank;
  if (!out.converged) diag << " (not Cauchy within " << tol.cauchy << ")";
  out.diagnostics = diag.str();
  return out;
}

LimitPlaneResult limit_nplane_from_compounds(const std::vector<CMatrix>& compounds,
                                             const Tolerances& tol) {
  SequenceLimit lim = sequence_limit(compounds, tol);
  if (!lim.converged) throw UndecidedError("compound sequence is not Cauchy: " + lim.diagnostics);
  const RVector& sv = lim.singular_values;
  const double gap = sv.size() > 1 && sv(0) > 0.0 ? sv(1) / sv(0) : 0.0;
  if (lim.numerical_rank != 1 || !(gap < tol.rank1_gap)) {
    std::ostringstream msg;
    msg << "sigma2/sigma1 = " << gap;
    throw NotLimitPlaneError(lim.numerical_rank, msg.str());
  }
  const CVector direction = lim.image_basis.col(0);
  NPlane plane = NPlane::from_plucker(direction, tol);
  const double residual = plane.quadric_residual();
  return LimitPlaneResult{std::move(plane), residual, gap, std::move(lim)};
}

LimitPlaneResult limit_nplane(const std::vector<ProjectiveMap>& seq, const Tolerances& tol) {
  if (seq.size() < 8) throw UsageError("limit_nplane needs at least 8 terms");
  std::set<Word> seen;
  for (const auto& g : seq) {
    if (g.word().empty()) continue;
    if (!seen.insert(g.word()).second)
      throw UsageError("limit_nplane needs distinct group elements; repeated word");
  }
  std::vector<CMatrix> compounds;
  compounds.reserve(seq.size());
  for (const auto& g : seq)
    compounds.push_back(g.compound() ? *g.compound() : normalize_projective(compound_entries(g.rep())));
  return limit_nplane_from_compounds(compounds, tol);
}

std::vector<ProjectiveMap> power_sequence(const ProjectiveMap& g, int count, int start) {
  if (count < 0 || start < 0) throw UsageError("power_sequence needs non-negative arguments");
  const ProjectiveMap base = g.relabeled({}).with_compound();
  ProjectiveMap current = ProjectiveMap::identity(g.n()).with_compound();
  for (int k = 0; k < start; ++k) current = current * base;
  std::vector<ProjectiveMap> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    out.push_back(current);
    current = current * base;
  }
  return out;
}

std::vector<ProjectiveMap> doubling_sequence(const ProjectiveMap& g, int count) {
  if (count < 0) throw UsageError("doubling_sequence needs a non-negative count");
  std::vector<ProjectiveMap> out;
  out.reserve(static_cast<std::size_t>(count));
  ProjectiveMap current = g.relabeled({}).with_compound();
  for (int k = 0; k < count; ++k) {
    out.push_back(current);
    current = current * current;
  }
  return out;
}

NPlane default_seed_plane(const GroupSpec& spec) {
  const int k = spec.n + 1;
  if (!spec.frame) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    return coordinate_plane(spec.n, idx);
  }
  const CMatrix inv = spec.frame->partialPivLu().inverse();
  return NPlane::from_basis(inv.leftCols(k));
}

LimitCloud limit_set_cloud(const GroupSpec& spec, int L, int samples_per_plane, std::uint64_t seed,
                           const CloudOptions& options) {
  if (samples_per_plane < 1) throw UsageError("samples_per_plane must be >= 1");
  if (L < 0) throw UsageError("word length must be non-negative");
  LimitCloud cloud{{}, {}, {}, options.seed_plane ? *options.seed_plane : default_seed_plane(spec), false};

  EnumerationOptions eo;
  eo.budget = options.budget;
  eo.allow_partial = options.allow_partial;
  // A budget cut keeps the three longest lengths actually reached.
  const int shortest = std::max(1, L - 2);
  int longest = 0;
  const bool complete = for_each_word(spec, L, eo, [&](const ProjectiveMap& g) {
    const auto len = static_cast<int>(g.word().size());
    longest = std::max(longest, len);
    if (len >= shortest || (options.allow_partial && len >= 1)) cloud.words.push_back(g.word());
  });
  cloud.partial = !complete;
  const int keep_from = std::max(1, std::min(shortest, longest - 2));
  std::erase_if(cloud.words, [&](const Word& w) { return static_cast<int>(w.size()) < keep_from; });

  const std::size_t count = cloud.words.size();
  std::vector<std::optional<NPlane>> planes(count);
  std::vector<std::vector<CVector>> samples(count);
  parallel_for(count, options.threads, [&](std::size_t i) {
    planes[i] = apply_word_to_plane(spec, cloud.words[i], cloud.seed_plane);
    samples[i] = sample_points(*planes[i], samples_per_plane, mix_seed(seed, i));
  });
  cloud.planes.reserve(count);
  cloud.points.reserve(count * static_cast<std::size_t>(samples_per_plane));
  for (std::size_t i = 0; i < count; ++i) {
    cloud.planes.push_back(std::move(*planes[i]));
    for (auto& p : samples[i])
      cloud.points.push_back({std::move(p), static_cast<int>(cloud.words[i].size()), cloud.words[i]});
  }
  return cloud;
}

OrbitReport orbit_convergence_report(const ProjectiveMap& g, const NPlane& target,
                                     const std::vector<CVector>& probes, int iterations,
                                     std::optional<NPlane> repelling) {
  if (iterations < 0) throw UsageError("iterations must be non-negative");
  OrbitReport report;
  if (!repelling) {
    try {
      repelling = limit_nplane(doubling_sequence(g.inverse(), 48)).plane;
    } catch (const Error& e) {
      report.notes.push_back(std::string("no repelling plane check: ") + e.what());
    }
  }
  for (std::size_t p = 0; p < probes.size(); ++p) {
    if (probes[p].size() != g.dim()) throw UsageError("probe has the wrong dimension");
    if (repelling && repelling->point_distance(probes[p]) <= 1e-3) {
      report.excluded.push_back(p);
      report.notes.push_back("probe " + std::to_string(p) + " excluded: within 1e-3 of the repelling plane");
      continue;
    }
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(iterations) + 1);
    CVector z = probes[p] / probes[p].norm();
    row.push_back(target.point_distance(z));
    for (int k = 1; k <= iterations; ++k) {
      z = g.rep() * z;
      z /= z.norm();
      row.push_back(target.point_distance(z));
    }
    report.kept.push_back(p);
    report.distances.push_back(std::move(row));
  }
  return report;
}

}  // namespace typel
