#include "typel/ford.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "typel/errors.hpp"

namespace typel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_point(const ProjectiveMap& g, const CVector& z) {
  if (z.size() != g.dim()) throw UsageError("point has the wrong dimension");
  if (!z.allFinite()) throw UsageError("point has non-finite coordinates");
}

bool c_singular(const ProjectiveMap& g, const Tolerances& tol) {
  const RVector sv = singular_values(g.block_c());
  return !(sv(0) > 0.0) || sv(sv.size() - 1) <= tol.singular * sv(0);
}

// Framed non-identity words up to length L, in enumeration order.
std::vector<ProjectiveMap> framed_words(const GroupSpec& spec, int L) {
  std::vector<ProjectiveMap> out;
  for_each_word(spec.framed(), L, {}, [&](const ProjectiveMap& g) {
    if (!g.word().empty()) out.push_back(g);
  });
  return out;
}

}  // namespace

double mu_unchecked(const ProjectiveMap& g, const CVector& z, const Tolerances& tol) {
  check_point(g, z);
  if (g.is_identity()) return 1.0;
  const auto k = static_cast<Eigen::Index>(g.n() + 1);
  const double num = z.tail(k).norm();
  if (num == 0.0) return 0.0;
  const CMatrix& r = g.rep();
  const CVector image = r.bottomRows(k) * z;
  const double den = image.norm();
  const double scale = operator_norm(r.bottomRows(k)) * z.norm();
  if (den <= tol.mu_denominator * scale) return kInf;
  return std::exp(std::log(num) - g.log_sl_scale() - std::log(den));
}

double mu(const ProjectiveMap& g, const CVector& z, const Tolerances& tol) {
  check_point(g, z);
  if (g.is_identity()) return 1.0;
  if (c_singular(g, tol)) throw CSingularError("C_g is singular for " + word_to_string(g.word()));
  return mu_unchecked(g, z, tol);
}

std::string to_string(FordStatus status) {
  switch (status) {
    case FordStatus::Interior: return "interior";
    case FordStatus::Boundary: return "boundary";
    case FordStatus::Exterior: return "exterior";
    case FordStatus::Undecided: return "undecided";
  }
  return "undecided";
}

FordContext make_ford_context(const GroupSpec& spec, int L) {
  if (L < 0) throw UsageError("word length must be non-negative");
  return FordContext{framed_words(spec, L), L, !torsion_generators(spec).empty()};
}

FordVerdict ford_membership(const CVector& z, const FordContext& context, const Tolerances& tol) {
  FordVerdict v;
  v.point = z;
  v.depth = context.depth;
  v.torsion_caveat = context.torsion_caveat;
  v.shell_max_mu.assign(static_cast<std::size_t>(std::max(0, context.depth)), 0.0);

  const ProjectiveMap* argmax = nullptr;
  const ProjectiveMap* nearest_one = nullptr;
  double nearest_gap = kInf;
  double nearest_mu = 0.0;
  for (const auto& g : context.words) {
    const double m = mu_unchecked(g, z, tol);
    auto& shell = v.shell_max_mu[g.word().size() - 1];
    shell = std::max(shell, m);
    if (!argmax || m > v.max_mu) {
      argmax = &g;
      v.max_mu = m;
    }
    if (std::abs(m - 1.0) < nearest_gap) {
      nearest_gap = std::abs(m - 1.0);
      nearest_one = &g;
      nearest_mu = m;
    }
  }
  if (!argmax) {
    // Only the identity: every point lies in the F-region.
    v.status = FordStatus::Interior;
    return v;
  }
  if (v.max_mu > 1.0 + tol.boundary) {
    v.status = FordStatus::Exterior;
    v.witness = argmax->word();
    v.witness_mu = v.max_mu;
  } else if (nearest_gap <= tol.boundary) {
    v.status = FordStatus::Boundary;
    v.witness = nearest_one->word();
    v.witness_mu = nearest_mu;
  } else if (v.max_mu < 1.0 - tol.boundary &&
             static_cast<int>(argmax->word().size()) < context.depth) {
    v.status = FordStatus::Interior;
  } else {
    v.status = FordStatus::Undecided;
  }
  return v;
}

FordVerdict ford_membership(const CVector& z, const GroupSpec& spec, int L, const Tolerances& tol) {
  return ford_membership(z, make_ford_context(spec, L), tol);
}

VREstimate v_r_estimate(const GroupSpec& spec, int L, const Tolerances& tol) {
  if (L < 1) throw UsageError("v_r_estimate needs L >= 1");
  VREstimate est;
  est.depth = L;
  est.shell_max.assign(static_cast<std::size_t>(L), 0.0);
  for (const auto& g : framed_words(spec, L)) {
    const double cinv = c_inverse_norm(g, tol);
    if (!std::isfinite(cinv)) throw UnboundedBlockError("C_g is singular for word " + word_to_string(g.word(), spec.names()), g.word());
    const double r0 = std::max(a_c_inverse_norm(g, tol), c_inverse_d_norm(g, tol));
    if (r0 > est.R0) {
      est.R0 = r0;
      est.r0_word = g.word();
    }
    if (cinv > est.rho) {
      est.rho = cinv;
      est.rho_word = g.word();
    }
    auto& shell = est.shell_max[g.word().size() - 1];
    shell = std::max({shell, cinv, r0});
  }
  est.R = est.R0 + est.rho;
  if (L >= 2) {
    const double before = *std::max_element(est.shell_max.begin(), est.shell_max.end() - 1);
    est.growing = est.shell_max.back() > before;
  }
  return est;
}

ClubSpadeReport club_spade_diagnostics(const GroupSpec& spec, int L, const std::vector<double>& deltas,
                                       const Tolerances& tol) {
  ClubSpadeReport report;
  report.frame_label = spec.frame_label;
  std::map<int, std::vector<double>> values;
  for (const auto& g : framed_words(spec, std::max(0, L))) {
    const int len = static_cast<int>(g.word().size());
    const double v = c_inverse_norm(g, tol);
    values[len].push_back(v);
  }
  std::map<int, std::size_t> hist;
  for (auto& [len, vals] : values) {
    ShellStats s;
    s.length = len;
    s.count = vals.size();
    s.max = 0.0;
    s.min = kInf;
    for (double v : vals) {
      if (!std::isfinite(v)) {
        ++s.unbounded;
        s.max = kInf;
        continue;
      }
      s.max = std::max(s.max, v);
      s.min = std::min(s.min, v);
      if (v > 0.0) ++hist[static_cast<int>(std::floor(std::log10(v)))];
    }
    if (s.unbounded == s.count) s.min = kInf;
    report.shells.push_back(s);
    if (std::isfinite(s.max)) report.rho = std::max(report.rho, s.max);
  }
  for (const auto& [e, c] : hist) report.histogram.push_back({e, c});

  const auto& sh = report.shells;
  if (sh.size() >= 2) {
    std::size_t start = sh.size() - 1;
    while (start > 0 && sh[start - 1].max > sh[start].max) --start;
    if (start < sh.size() - 1) report.monotone_from = sh[start].length;
  }
  std::ostringstream trend;
  if (sh.empty()) {
    trend << "no non-identity words";
  } else if (report.monotone_from) {
    trend << "shell maxima decrease strictly from length " << *report.monotone_from << " to "
          << sh.back().length;
  } else {
    trend << "shell maxima do not decrease at the last shell";
  }
  report.trend = trend.str();

  for (double delta : deltas) {
    DeltaSeries series;
    series.delta = delta;
    double total = 0.0;
    for (const auto& [len, vals] : values) {
      double inc = 0.0;
      for (double v : vals) inc += std::pow(v, delta);
      total += inc;
      series.increments.push_back(inc);
      series.partial_sums.push_back(total);
    }
    report.series.push_back(std::move(series));
  }
  return report;
}

CVector chart_to_point(const VolumeChart& c) {
  const auto k = c.zeta.size();
  if (k < 2 || c.x.size() != k - 1) throw UsageError("chart point needs zeta in C^{n+1} and x in C^n");
  const int n = static_cast<int>(k) - 1;
  if (c.alpha < 1 || c.alpha > n + 1) throw UsageError("chart index alpha must lie in 1..n+1");
  CVector z(2 * k);
  z.head(k) = c.zeta;
  Eigen::Index xi = 0;
  for (int j = 1; j <= n + 1; ++j) z(n + j) = j == c.alpha ? Complex(1.0) : c.x(xi++);
  return z;
}

VolumeChart point_to_chart(const CVector& z, int alpha) {
  const auto k = z.size() / 2;
  const int n = static_cast<int>(k) - 1;
  if (z.size() % 2 != 0 || n < 1) throw UsageError("point must have even length >= 4");
  if (alpha < 1 || alpha > n + 1) throw UsageError("chart index alpha must lie in 1..n+1");
  const Complex den = z(n + alpha);
  if (!(std::abs(den) > 1e-14 * z.norm()))
    throw ChartEscapeError("point leaves chart U_" + std::to_string(alpha));
  VolumeChart c{alpha, z.head(k) / den, CVector(k - 1)};
  Eigen::Index xi = 0;
  for (int j = 1; j <= n + 1; ++j)
    if (j != alpha) c.x(xi++) = z(n + j) / den;
  return c;
}

VolumeCheck volume_pullback_check(const ProjectiveMap& g, const VolumeChart& z, double h,
                                  const Tolerances& tol) {
  if (!(h > 0.0)) throw UsageError("step h must be positive");
  const CVector point = chart_to_point(z);
  if (point.size() != g.dim()) throw UsageError("chart point has the wrong dimension");
  const int n = g.n();
  const auto dim = static_cast<Eigen::Index>(2 * n + 1);
  const double weight = 2.0 * (n + 1);

  const auto flatten = [](const VolumeChart& c) {
    CVector v(c.zeta.size() + c.x.size());
    v << c.zeta, c.x;
    return v;
  };
  const auto unflatten = [&](const CVector& v) {
    return VolumeChart{z.alpha, v.head(n + 1), v.tail(n)};
  };
  const auto chart_map = [&](const CVector& v) {
    return flatten(point_to_chart(g.rep() * chart_to_point(unflatten(v)), z.alpha));
  };

  const CVector v0 = flatten(z);
  const VolumeChart image = point_to_chart(g.rep() * point, z.alpha);
  CMatrix jac(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    CVector plus = v0, minus = v0;
    plus(j) += h;
    minus(j) -= h;
    jac.col(j) = (chart_map(plus) - chart_map(minus)) / (2.0 * h);
  }
  const double x2 = z.x.squaredNorm();
  const double xi2 = image.x.squaredNorm();
  const double log_density = -weight * (std::log1p(xi2) - std::log1p(x2));

  VolumeCheck out;
  out.lhs = std::exp(2.0 * log_abs_det(jac) + log_density);
  // For a determinant-one matrix the chart Jacobian has |det| = |den|^{-(2n+2)},
  // den being the image coordinate used as the chart denominator.
  const double log_den = g.log_sl_scale() + std::log(std::abs((g.rep() * point)(n + z.alpha)));
  out.analytic_lhs = std::exp(-2.0 * weight * log_den + log_density);
  out.rhs = std::pow(mu_unchecked(g, point, tol), 2.0 * weight);
  out.rel_err = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-300);
  return out;
}

std::vector<SeparationRow> limit_line_separation(const GroupSpec& spec, const CMatrix& l_lambda, int L) {
  if (l_lambda.rows() != spec.n + 1 || l_lambda.cols() != spec.n + 1)
    throw UsageError("L_lambda must be (n+1) x (n+1)");
  if (!l_lambda.allFinite()) throw UsageError("L_lambda must be finite");
  std::vector<SeparationRow> rows;
  for_each_word(spec.framed(), std::max(0, L), {}, [&](const ProjectiveMap& g) {
    const double norm = operator_norm(CMatrix(g.block_c() * l_lambda + g.block_d()));
    const double value = norm > 0.0 ? std::exp(std::log(norm) + g.log_sl_scale()) : 0.0;
    rows.push_back({g.word(), static_cast<int>(g.word().size()), value});
  });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SeparationRow& a, const SeparationRow& b) { return a.length < b.length; });
  return rows;
}

std::vector<double> separation_shell_minima(const std::vector<SeparationRow>& rows) {
  std::vector<double> minima;
  for (const auto& r : rows) {
    const auto len = static_cast<std::size_t>(r.length);
    if (minima.size() <= len) minima.resize(len + 1, kInf);
    minima[len] = std::min(minima[len], r.value);
  }
  return minima;
}

CVector sigma_point(const ProjectiveMap& g, const CMatrix& unitary, const CVector& eta,
                    const Tolerances& tol) {
  const auto k = static_cast<Eigen::Index>(g.n() + 1);
  if (unitary.rows() != k || unitary.cols() != k || eta.size() != k)
    throw UsageError("sigma_point needs a unitary (n+1) x (n+1) matrix and eta in C^{n+1}");
  if (c_singular(g, tol)) throw CSingularError("C_g is singular for " + word_to_string(g.word()));
  const CVector rhs = (std::exp(-g.log_sl_scale()) * unitary - g.block_d()) * eta;
  CVector z(2 * k);
  z.head(k) = g.block_c().partialPivLu().solve(rhs);
  z.tail(k) = eta;
  return z;
}

}  // namespace typel
