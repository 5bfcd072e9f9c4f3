#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "typel/cli.hpp"
#include "typel/exterior_algebra.hpp"
#include "typel/ford.hpp"
#include "typel/random.hpp"

namespace typel::cli {

namespace {

struct Common {
  std::string config;
  std::string preset;
  int max_length = -1;
  std::size_t word_budget = 0;
  std::string tol_overrides;
  int threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON group config file");
  cmd->add_option("--preset", c.preset, "named preset, e.g. twisted-cubic:classical-schottky");
  cmd->add_option("--max-length,-L", c.max_length, "maximal word length")->check(CLI::NonNegativeNumber);
  cmd->add_option("--word-budget", c.word_budget, "maximal number of enumerated words")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-overrides", c.tol_overrides, "key=value,... tolerance overrides");
  cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

LoadedGroup load(const Common& c) {
  if (c.config.empty() == c.preset.empty()) throw ConfigError("give exactly one of --config and --preset");
  LoadedGroup g = c.config.empty() ? load_preset(c.preset) : load_config_file(c.config);
  if (c.max_length >= 0) g.spec.max_word_length = c.max_length;
  if (c.word_budget > 0) g.spec.word_budget = c.word_budget;
  return g;
}

Tolerances tolerances(const Common& c) {
  Tolerances tol;
  if (!c.tol_overrides.empty()) {
    try {
      tol.apply_overrides(c.tol_overrides);
    } catch (const Error& e) {
      throw ConfigError(std::string("--tol-overrides: ") + e.what());
    }
  }
  return tol;
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- verify ----

struct IdentityResiduals {
  double quadric = 0.0;
  double inverse = 0.0;
  double invariant = 0.0;
};

IdentityResiduals identity_residuals(const CMatrix& a, Rng& rng, int trials) {
  const CompoundMatrix c = compound(a);
  const CompoundMatrix adj = adjugate_compound(a);
  const CMatrix& A = c.entries;
  const CMatrix& S = adj.entries;
  const Complex det = c.source_det;
  const auto N = A.rows();
  IdentityResiduals r;
  const CMatrix prod = S * A - det * CMatrix::Identity(N, N);
  r.inverse = max_abs(prod) / (operator_norm(S) * operator_norm(A));
  for (int t = 0; t < trials; ++t) {
    const CVector z = rng.complex_gaussian_vector(N);
    const CVector w = rng.complex_gaussian_vector(N);
    const CVector Az = A * z, Aw = A * w, Sw = S * w;
    r.quadric = std::max(r.quadric, std::abs(q_form(Az, Aw) - det * q_form(z, w)) /
                                        (Az.norm() * Aw.norm() + std::abs(det) * z.norm() * w.norm()));
    r.invariant = std::max(r.invariant, std::abs(q_form(Az, w) - q_form(z, Sw)) /
                                            (Az.norm() * w.norm() + z.norm() * Sw.norm()));
  }
  return r;
}

int cmd_verify(const Common& c, int random_count, std::uint64_t seed, std::ostream& out) {
  const LoadedGroup g = load(c);
  const Tolerances tol = tolerances(c);
  const double bound = tol.algebraic;
  Rng rng(seed);
  bool ok = true;
  const auto line = [&](const std::string& what, double value) {
    const bool pass = value <= bound;
    ok = ok && pass;
    out << (pass ? "ok     " : "BREACH ") << what << " residual=" << format_double(value, 3) << '\n';
  };
  out << "group: " << g.description << " (n=" << g.spec.n << ", " << g.spec.generators.size()
      << " generators, frame " << g.spec.frame_label << ")\n";
  const auto dim = static_cast<Eigen::Index>(2 * g.spec.n + 2);
  std::vector<std::pair<std::string, CMatrix>> mats;
  for (const auto& gen : g.spec.generators) mats.emplace_back("generator " + gen.name, gen.map.sl_rep());
  for (int k = 0; k < random_count; ++k)
    mats.emplace_back("random " + std::to_string(k), rng.complex_gaussian_matrix(dim, dim));
  IdentityResiduals worst;
  for (const auto& [name, m] : mats) {
    const IdentityResiduals r = identity_residuals(m, rng, 4);
    if (name.rfind("generator", 0) == 0) {
      line(name + " Q(Az,Aw)=det Q(z,w)", r.quadric);
      line(name + " A*A=det I", r.inverse);
      line(name + " Q(Az,w)=Q(z,A*w)", r.invariant);
    } else {
      worst.quadric = std::max(worst.quadric, r.quadric);
      worst.inverse = std::max(worst.inverse, r.inverse);
      worst.invariant = std::max(worst.invariant, r.invariant);
    }
  }
  if (random_count > 0) {
    const std::string tag = std::to_string(random_count) + " random matrices";
    line(tag + " Q(Az,Aw)=det Q(z,w)", worst.quadric);
    line(tag + " A*A=det I", worst.inverse);
    line(tag + " Q(Az,w)=Q(z,A*w)", worst.invariant);
  }

  // compound multiplicativity on pairs of generators
  double mult = 0.0;
  for (const auto& a : g.spec.generators)
    for (const auto& b : g.spec.generators) {
      const CMatrix lhs = compound_entries(a.map.sl_rep() * b.map.sl_rep());
      const CMatrix rhs = compound_entries(a.map.sl_rep()) * compound_entries(b.map.sl_rep());
      mult = std::max(mult, max_abs(CMatrix(lhs - rhs)) / std::max(max_abs(lhs), max_abs(rhs)));
    }
  line("compound(gh)=compound(g)compound(h)", mult);

  if (!g.mobius.empty()) {
    const bool tc = g.kind == LoadedGroup::Kind::TwistedCubic;
    const auto rep = [&](const Mobius& m) { return tc ? twisted_cubic_matrix(m) : segre_matrix(m); };
    double hom = 0.0, equiv = 0.0;
    for (const auto& a : g.mobius)
      for (const auto& b : g.mobius) {
        const CMatrix lhs = rep(a * b), rhs = rep(a) * rep(b);
        hom = std::max(hom, projective_distance(Eigen::Map<const CVector>(lhs.data(), lhs.size()),
                                                Eigen::Map<const CVector>(rhs.data(), rhs.size())));
      }
    for (const auto& m : g.mobius)
      for (int t = 0; t < 8; ++t) {
        const P1Point p{rng.complex_gaussian(), rng.complex_gaussian()};
        if (tc) {
          equiv = std::max(equiv, projective_distance(twisted_cubic_point(m.apply(p)),
                                                      twisted_cubic_matrix(m) * twisted_cubic_point(p)));
        } else {
          const NPlane image = map_plane(segre_matrix(m), segre_line(p));
          equiv = std::max(equiv, plane_distance(image, segre_line(m.apply(p))).value);
        }
      }
    line(std::string(tc ? "twisted cubic" : "Segre") + " representation is a homomorphism", hom);
    line(std::string(tc ? "tau(g p) = tau_*(g) tau(p)" : "g_* maps {z'=mu z''} to {z'=g(mu) z''}"), equiv);
  }
  out << (ok ? "verify: all residuals within " : "verify: residual breach, bound ") << format_double(bound, 3)
      << '\n';
  return ok ? kOk : kFailure;
}

// ---- limit-cloud ----

int cmd_limit_cloud(const Common& c, int samples, std::uint64_t seed, const std::string& out_path,
                    const std::string& format, bool allow_partial, std::ostream& out, std::ostream& err) {
  const LoadedGroup g = load(c);
  CloudOptions opt;
  opt.allow_partial = allow_partial;
  opt.threads = c.threads;
  const LimitCloud cloud = limit_set_cloud(g.spec, g.spec.max_word_length, samples, seed, opt);
  if (cloud.partial)
    err << "warning: word budget " << g.spec.word_budget << " reached; cloud is partial\n";
  const std::string content = format == "ply" ? cloud_to_ply(cloud, g.projection) : cloud_to_csv(cloud, g.projection);
  write_output(out_path, content, out);
  if (!out_path.empty() && out_path != "-")
    err << "wrote " << cloud.points.size() << " points from " << cloud.words.size() << " words to " << out_path
        << '\n';
  return kOk;
}

// ---- ford ----

CVector parse_point(const std::string& text, int n) {
  std::vector<Complex> v;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    v.push_back(parse_complex(std::string_view(text).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (static_cast<int>(v.size()) != 2 * n + 2)
    throw ConfigError("point '" + text + "' needs " + std::to_string(2 * n + 2) + " coordinates");
  CVector z(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) z(static_cast<Eigen::Index>(i)) = v[i];
  if (z.norm() == 0.0) throw ConfigError("point '" + text + "' is the zero vector");
  return z;
}

std::vector<CVector> grid_points(const std::string& grid, int n) {
  double lo = 0, hi = 0;
  int steps = 0;
  {
    std::istringstream in(grid);
    char c1 = 0, c2 = 0;
    if (!(in >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
      throw ConfigError("--grid expects lo:hi:steps, got '" + grid + "'");
  }
  if (steps < 1 || !(lo <= hi)) throw ConfigError("--grid needs lo <= hi and steps >= 1");
  const int free_coords = 2 * n + 1;
  double total = std::pow(static_cast<double>(steps), free_coords);
  if (total > 1e6) throw ConfigError("--grid would produce more than 10^6 points");
  std::vector<CVector> pts;
  std::vector<int> idx(static_cast<std::size_t>(free_coords), 0);
  const auto coord = [&](int k) { return steps == 1 ? lo : lo + (hi - lo) * k / (steps - 1); };
  while (true) {
    CVector z(2 * n + 2);
    for (int i = 0; i < free_coords; ++i) z(i) = coord(idx[static_cast<std::size_t>(i)]);
    z(2 * n + 1) = 1.0;
    pts.push_back(z);
    int i = free_coords - 1;
    while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == steps) idx[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return pts;
}

int cmd_ford(const Common& c, const std::vector<std::string>& points, const std::string& grid,
             const std::string& out_path, std::ostream& out, std::ostream& err) {
  const LoadedGroup g = load(c);
  const Tolerances tol = tolerances(c);
  std::vector<CVector> pts = g.points;
  for (const auto& p : points) pts.push_back(parse_point(p, g.spec.n));
  if (!grid.empty())
    for (auto& p : grid_points(grid, g.spec.n)) pts.push_back(std::move(p));
  if (pts.empty()) throw ConfigError("no points: use --point, --grid or a config 'points' list");

  const FordContext ctx = make_ford_context(g.spec, g.spec.max_word_length);
  std::ostringstream csv;
  csv << "index";
  for (int i = 0; i < 2 * g.spec.n + 2; ++i) csv << ",w" << i << "_re,w" << i << "_im";
  csv << ",status,max_mu,witness,witness_mu,depth\n";
  std::size_t counts[4] = {0, 0, 0, 0};
  const auto names = g.spec.names();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const FordVerdict v = ford_membership(pts[i], ctx, tol);
    ++counts[static_cast<int>(v.status)];
    csv << i;
    for (Eigen::Index k = 0; k < pts[i].size(); ++k)
      csv << ',' << format_double(pts[i](k).real()) << ',' << format_double(pts[i](k).imag());
    csv << ',' << to_string(v.status) << ',' << format_double(v.max_mu) << ",\""
        << (v.witness ? word_to_string(*v.witness, names) : std::string()) << "\"," << format_double(v.witness_mu)
        << ',' << v.depth << '\n';
  }
  write_output(out_path, csv.str(), out);
  std::ostream& summary = out_path.empty() || out_path == "-" ? err : out;
  summary << "ford: " << pts.size() << " points, depth " << ctx.depth << ", frame " << g.spec.frame_label
          << ": interior " << counts[0] << ", boundary " << counts[1] << ", exterior " << counts[2]
          << ", undecided " << counts[3] << '\n';
  if (ctx.torsion_caveat)
    summary << "note: a generator of finite order was detected; verdicts assume a torsion-free group\n";
  return kOk;
}

// ---- diagnostics ----

int cmd_diagnostics(const Common& c, const std::vector<double>& deltas, const std::string& out_path,
                    std::ostream& out) {
  const LoadedGroup g = load(c);
  const Tolerances tol = tolerances(c);
  const int L = g.spec.max_word_length;
  const ClubSpadeReport report = club_spade_diagnostics(g.spec, L, deltas, tol);

  std::ostringstream csv;
  csv << "length,count,max_c_inverse_norm,min_c_inverse_norm,unbounded";
  for (const auto& s : report.series) csv << ",increment_delta_" << format_double(s.delta) << ",partial_sum_delta_"
                                          << format_double(s.delta);
  csv << '\n';
  for (std::size_t k = 0; k < report.shells.size(); ++k) {
    const ShellStats& s = report.shells[k];
    csv << s.length << ',' << s.count << ',' << format_double(s.max) << ',' << format_double(s.min) << ','
        << s.unbounded;
    for (const auto& d : report.series)
      csv << ',' << format_double(k < d.increments.size() ? d.increments[k] : std::nan("")) << ','
          << format_double(k < d.partial_sums.size() ? d.partial_sums[k] : std::nan(""));
    csv << '\n';
  }
  if (!out_path.empty() && out_path != "-") write_output(out_path, csv.str(), out);
  else out << csv.str();

  out << "# group: " << g.description << ", frame " << report.frame_label << ", L=" << L << '\n';
  out << "# trend: " << report.trend << '\n';
  out << "# rho (max |C_g^-1|): " << format_double(report.rho, 6) << '\n';
  if (report.monotone_from) out << "# shell maxima decrease from shell " << *report.monotone_from << '\n';
  for (const auto& s : report.series)
    if (s.increments.size() >= 2) {
      const double a = s.increments[s.increments.size() - 2], b = s.increments.back();
      out << "# delta=" << format_double(s.delta, 6) << ": sum=" << format_double(s.partial_sums.back(), 6)
          << ", last increment ratio=" << format_double(b > 0 ? a / b : std::nan(""), 6) << '\n';
    }
  try {
    const VREstimate v = v_r_estimate(g.spec, L, tol);
    out << "# R0 bound (max |A C^-1|, |C^-1 D|): " << format_double(v.R0, 6) << " at "
        << word_to_string(v.r0_word, g.spec.names()) << '\n'
        << "# v_r estimate R = R0 + rho = " << format_double(v.R, 6) << (v.growing ? " (still growing at depth L)" : "")
        << '\n';
  } catch (const UnboundedBlockError& e) {
    out << "# v_r estimate: unbounded (" << e.what() << ")\n";
  }
  for (const auto& bin : report.histogram)
    out << "# histogram |C_g^-1| in [1e" << bin.lower_exponent << ", 1e" << bin.lower_exponent + 1
        << "): " << bin.count << '\n';
  return kOk;
}

// ---- plot ----

int cmd_plot(const std::string& input, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(input);
  const auto rows = parse_cloud_csv(text);
  write_output(out_path, cloud_svg(rows), out);
  if (!out_path.empty() && out_path != "-") err << "wrote " << rows.size() << " points to " << out_path << '\n';
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"typel: limit sets, Ford regions and diagnostics for type L projective groups", "typel"};
  app.require_subcommand(1);

  Common vc, lc, fc, dc;
  int random_count = 20;
  std::uint64_t verify_seed = 1;
  auto* verify = app.add_subcommand("verify", "algebraic identity and representation checks");
  add_common(verify, vc);
  verify->add_option("--random", random_count, "number of random matrices")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", verify_seed, "seed for random matrices and vectors");

  int samples = 4;
  std::uint64_t seed = 1;
  std::string cloud_out, format = "csv";
  bool allow_partial = false;
  auto* cloud = app.add_subcommand("limit-cloud", "sample the limit set on images of a seed plane");
  add_common(cloud, lc);
  cloud->add_option("--samples", samples, "points per plane")->check(CLI::PositiveNumber);
  cloud->add_option("--seed", seed, "sampling seed");
  cloud->add_option("--out,-o", cloud_out, "output file (stdout if omitted)");
  cloud->add_option("--format", format, "csv or ply")->check(CLI::IsMember({"csv", "ply"}));
  cloud->add_flag("--allow-partial", allow_partial, "write a partial cloud when the word budget is reached");

  std::vector<std::string> points;
  std::string grid, ford_out;
  auto* ford = app.add_subcommand("ford", "classify points against the F-region");
  add_common(ford, fc);
  ford->add_option("--point", points, "comma separated frame coordinates, repeatable");
  ford->add_option("--grid", grid, "lo:hi:steps over the real coordinates of the chart w_{2n+1}=1");
  ford->add_option("--out,-o", ford_out, "CSV output file");

  std::vector<double> deltas{4.0};
  std::string diag_out;
  auto* diag = app.add_subcommand("diagnostics", "shell statistics of |C_g^-1| and Poincare-type series");
  add_common(diag, dc);
  diag->add_option("--delta", deltas, "series exponents")->delimiter(',');
  diag->add_option("--out,-o", diag_out, "CSV output file");

  std::string plot_in, plot_out;
  auto* plot = app.add_subcommand("plot", "SVG scatter of a cloud CSV");
  plot->add_option("input", plot_in, "cloud CSV")->required();
  plot->add_option("--out,-o", plot_out, "SVG output file")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*verify) return cmd_verify(vc, random_count, verify_seed, out);
    if (*cloud) return cmd_limit_cloud(lc, samples, seed, cloud_out, format, allow_partial, out, err);
    if (*ford) return cmd_ford(fc, points, grid, ford_out, out, err);
    if (*diag) return cmd_diagnostics(dc, deltas, diag_out, out);
    if (*plot) return cmd_plot(plot_in, plot_out, out, err);
  } catch (const EnumerationCapError& e) {
    err << "error: " << e.what() << " (use --allow-partial or --word-budget)\n";
    return kBudgetExceeded;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NotGroupElementError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InvalidSchottkyError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const CombinationInfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DimensionCapError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace typel::cli
