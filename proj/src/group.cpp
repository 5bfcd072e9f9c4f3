#include "typel/group.hpp"

#include <cmath>
#include <limits>

#include "typel/errors.hpp"
#include "typel/exterior_algebra.hpp"

namespace typel {

namespace {

// Words longer than this are re-evaluated from their letters instead of
// extending the cached parent product.
constexpr std::size_t kIncrementalLimit = 32;

// Compound of the inverse, up to scale, read off the compound itself:
// compound(A^{-1}) is proportional to the adjugate compound A^*, whose
// entries are signed entries of the compound. No inversion is involved.
CMatrix inverse_compound(const CMatrix& c) {
  const int m = half_dimension_for_plucker_size(static_cast<std::size_t>(c.rows()));
  const QuadricForm& q = quadric_form(m);
  const auto dim = c.rows();
  CMatrix star(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto ic = q.partner(static_cast<std::size_t>(i));
    const int s_i = q.partner_sign(ic);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const auto jc = q.partner(static_cast<std::size_t>(j));
      const int s_j = q.partner_sign(jc);
      star(i, j) = static_cast<double>(s_i * s_j) *
                   c(static_cast<Eigen::Index>(jc), static_cast<Eigen::Index>(ic));
    }
  }
  return normalize_projective(star);
}

int letter_slot(int letter) {
  const int g = std::abs(letter) - 1;
  return 2 * g + (letter > 0 ? 0 : 1);
}

}  // namespace

Word reduce_word(Word word) {
  Word out;
  out.reserve(word.size());
  for (int x : word) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

Word inverse_word(const Word& word) {
  Word out(word.rbegin(), word.rend());
  for (int& x : out) x = -x;
  return out;
}

Word concat_words(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return reduce_word(std::move(out));
}

std::string word_to_string(const Word& word, const std::vector<std::string>& names) {
  if (word.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) s += ' ';
    const auto g = static_cast<std::size_t>(std::abs(word[i]) - 1);
    s += g < names.size() ? names[g] : "g" + std::to_string(g + 1);
    if (word[i] < 0) s += "^-1";
  }
  return s;
}

ProjectiveMap ProjectiveMap::from_matrix(const CMatrix& m, Word word, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() < 4 || m.rows() % 2 != 0)
    throw UsageError("projective map needs a square matrix of even size >= 4");
  if (m.rows() > 2 * kMaxHalfDimension)
    throw DimensionCapError(static_cast<int>(m.rows() / 2));
  if (!m.allFinite()) throw NotGroupElementError("matrix has non-finite entries");
  if (max_abs(m) == 0.0) throw NotGroupElementError("zero matrix");
  CMatrix rep = normalize_projective(m);
  const double log_det = log_abs_det(rep);
  if (!(log_det > std::log(tol.singular)))
    throw NotGroupElementError("matrix is singular after normalization (|det| <= " +
                               std::to_string(tol.singular) + ")");
  return ProjectiveMap(std::move(rep), -log_det / static_cast<double>(m.rows()),
                       std::move(word), std::nullopt);
}

ProjectiveMap ProjectiveMap::identity(int n) {
  return ProjectiveMap(CMatrix::Identity(2 * n + 2, 2 * n + 2), 0.0, {}, std::nullopt);
}

ProjectiveMap ProjectiveMap::from_product(const CMatrix& product, double log_scale, Word word,
                                          std::optional<CMatrix> compound) {
  Complex s;
  CMatrix rep = normalize_projective(product, &s);
  return ProjectiveMap(std::move(rep), log_scale + std::log(std::abs(s)), std::move(word),
                       std::move(compound));
}

CMatrix ProjectiveMap::block_a() const {
  const auto k = rep_.rows() / 2;
  return rep_.topLeftCorner(k, k);
}
CMatrix ProjectiveMap::block_b() const {
  const auto k = rep_.rows() / 2;
  return rep_.topRightCorner(k, k);
}
CMatrix ProjectiveMap::block_c() const {
  const auto k = rep_.rows() / 2;
  return rep_.bottomLeftCorner(k, k);
}
CMatrix ProjectiveMap::block_d() const {
  const auto k = rep_.rows() / 2;
  return rep_.bottomRightCorner(k, k);
}

CMatrix ProjectiveMap::sl_rep() const { return rep_ * std::exp(log_sl_scale_); }

ProjectiveMap ProjectiveMap::operator*(const ProjectiveMap& other) const {
  if (dim() != other.dim()) throw UsageError("composing maps of different dimension");
  std::optional<CMatrix> c;
  if (compound_ && other.compound_) c = normalize_projective(CMatrix(*compound_ * *other.compound_));
  return from_product(rep_ * other.rep_, log_sl_scale_ + other.log_sl_scale_,
                      concat_words(word_, other.word_), std::move(c));
}

ProjectiveMap ProjectiveMap::inverse() const {
  const CMatrix inv = rep_.partialPivLu().inverse();
  std::optional<CMatrix> c;
  if (compound_) c = inverse_compound(*compound_);
  return from_product(inv, -log_sl_scale_, inverse_word(word_), std::move(c));
}

ProjectiveMap ProjectiveMap::with_compound() const {
  ProjectiveMap out = *this;
  out.compound_ = normalize_projective(compound_entries(rep_));
  return out;
}

ProjectiveMap ProjectiveMap::relabeled(Word word) const {
  ProjectiveMap out = *this;
  out.word_ = std::move(word);
  return out;
}

bool ProjectiveMap::is_identity(double tol) const {
  return max_abs(CMatrix(rep_ - CMatrix::Identity(rep_.rows(), rep_.cols()))) <= tol;
}

ProjectiveMap normalize(const CMatrix& m, const Tolerances& tol) {
  return ProjectiveMap::from_matrix(m, {}, tol);
}

void GroupSpec::validate(const Tolerances& tol) const {
  if (n < 1 || n + 1 > kMaxHalfDimension)
    throw DimensionCapError(n + 1);
  for (const auto& g : generators) {
    if (g.map.dim() != 2 * n + 2)
      throw UsageError("generator '" + g.name + "' has size " + std::to_string(g.map.dim()) +
                       ", expected " + std::to_string(2 * n + 2));
    if (!(log_abs_det(g.map.rep()) > std::log(tol.singular)))
      throw NotGroupElementError("generator '" + g.name + "' is singular");
  }
  if (frame) {
    if (frame->rows() != 2 * n + 2 || frame->cols() != 2 * n + 2)
      throw UsageError("frame matrix must be square of size 2n+2");
    if (!(log_abs_det(normalize_projective(*frame)) > std::log(tol.singular)))
      throw NotGroupElementError("frame matrix is singular");
  }
  switch (structure) {
    case GroupStructure::Cyclic:
      if (generators.size() != 1) throw UsageError("cyclic structure needs exactly one generator");
      break;
    case GroupStructure::FreeProduct: {
      int total = 0;
      for (int s : factor_sizes) {
        if (s < 1) throw UsageError("free-product factor sizes must be positive");
        total += s;
      }
      if (total != static_cast<int>(generators.size()))
        throw UsageError("free-product factor sizes do not add up to the generator count");
      break;
    }
    case GroupStructure::Free:
      break;
  }
  if (max_word_length < 0) throw UsageError("max_word_length must be non-negative");
}

GroupSpec GroupSpec::framed() const {
  if (!frame) return *this;
  GroupSpec out = *this;
  const CMatrix inv = frame->partialPivLu().inverse();
  for (auto& g : out.generators) {
    const ProjectiveMap conj = ProjectiveMap::from_matrix(*frame * g.map.rep() * inv, g.map.word());
    g.map = g.map.compound() ? conj.with_compound() : conj;
  }
  out.frame.reset();
  return out;
}

std::vector<std::string> GroupSpec::names() const {
  std::vector<std::string> out;
  for (const auto& g : generators) out.push_back(g.name);
  return out;
}

int GroupSpec::factor_of(int generator) const {
  if (structure != GroupStructure::FreeProduct) return 0;
  int acc = 0;
  for (std::size_t f = 0; f < factor_sizes.size(); ++f) {
    acc += factor_sizes[f];
    if (generator < acc) return static_cast<int>(f);
  }
  throw UsageError("generator index outside the free-product factors");
}

GroupSpec make_group_spec(int n, const std::vector<CMatrix>& generators, GroupStructure structure,
                          std::vector<int> factor_sizes, std::vector<std::string> names) {
  GroupSpec spec;
  spec.n = n;
  spec.structure = structure;
  spec.factor_sizes = std::move(factor_sizes);
  for (std::size_t i = 0; i < generators.size(); ++i) {
    std::string name = i < names.size() ? names[i]
                       : i < 26        ? std::string(1, static_cast<char>('a' + i))
                                       : "g" + std::to_string(i + 1);
    const int letter = static_cast<int>(i) + 1;
    spec.generators.push_back({name, ProjectiveMap::from_matrix(generators[i], Word{letter})});
  }
  spec.validate();
  return spec;
}

std::size_t count_reduced_words(int generators, int max_length) {
  if (generators <= 0 || max_length <= 0) return 1;
  const auto k2 = static_cast<std::size_t>(2 * generators);
  std::size_t total = 1;
  std::size_t shell = k2;
  for (int l = 1; l <= max_length; ++l) {
    total += shell;
    if (total > (std::size_t{1} << 60)) return total;
    shell *= (k2 - 1);
  }
  return total;
}

std::vector<ProjectiveMap> letter_maps(const GroupSpec& spec, bool track_compound) {
  std::vector<ProjectiveMap> out;
  for (std::size_t i = 0; i < spec.generators.size(); ++i) {
    const int letter = static_cast<int>(i) + 1;
    ProjectiveMap g = spec.generators[i].map.relabeled(Word{letter});
    if (track_compound && !g.compound()) g = g.with_compound();
    out.push_back(g);
    out.push_back(g.inverse().relabeled(Word{-letter}));
  }
  return out;
}

namespace {

ProjectiveMap balanced_product(const std::vector<ProjectiveMap>& letters, const Word& word,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return letters[static_cast<std::size_t>(letter_slot(word[lo]))];
  const std::size_t mid = lo + (hi - lo) / 2;
  return balanced_product(letters, word, lo, mid) * balanced_product(letters, word, mid, hi);
}

ProjectiveMap identity_element(const GroupSpec& spec, bool track_compound) {
  ProjectiveMap id = ProjectiveMap::identity(spec.n);
  return track_compound ? id.with_compound() : id;
}

}  // namespace

ProjectiveMap evaluate_word(const GroupSpec& spec, const Word& word, bool track_compound) {
  const Word reduced = reduce_word(word);
  if (reduced.empty()) return identity_element(spec, track_compound);
  for (int x : reduced)
    if (x == 0 || std::abs(x) > static_cast<int>(spec.generators.size()))
      throw UsageError("word letter out of range");
  const auto letters = letter_maps(spec, track_compound);
  return balanced_product(letters, reduced, 0, reduced.size()).relabeled(reduced);
}

bool for_each_word(const GroupSpec& spec, int max_length, const EnumerationOptions& options,
                   const std::function<void(const ProjectiveMap&)>& visit) {
  const std::size_t budget = options.budget ? options.budget : spec.word_budget;
  const int k = static_cast<int>(spec.generators.size());
  const std::size_t requested = count_reduced_words(k, max_length);
  if (requested > budget && !options.allow_partial) throw EnumerationCapError(requested, budget);

  std::size_t emitted = 0;
  const auto emit = [&](const ProjectiveMap& g) {
    if (emitted >= budget) return false;
    visit(g);
    ++emitted;
    return true;
  };
  if (!emit(identity_element(spec, options.track_compound))) return false;
  if (k == 0 || max_length <= 0) return true;

  const auto letters = letter_maps(spec, options.track_compound);
  std::vector<ProjectiveMap> shell;
  for (const auto& x : letters) {
    if (!emit(x)) return false;
    shell.push_back(x);
  }
  for (int len = 2; len <= max_length; ++len) {
    std::vector<ProjectiveMap> next;
    next.reserve(shell.size() * static_cast<std::size_t>(2 * k - 1));
    for (const auto& parent : shell) {
      const int last = parent.word().back();
      for (std::size_t s = 0; s < letters.size(); ++s) {
        const int x = letters[s].word().front();
        if (x == -last) continue;
        Word w = parent.word();
        w.push_back(x);
        ProjectiveMap child = static_cast<std::size_t>(len) <= kIncrementalLimit
                                  ? (parent * letters[s]).relabeled(w)
                                  : balanced_product(letters, w, 0, w.size()).relabeled(w);
        if (!emit(child)) return false;
        next.push_back(std::move(child));
      }
    }
    shell = std::move(next);
  }
  return true;
}

WordList enumerate_words(const GroupSpec& spec, int max_length, const EnumerationOptions& options) {
  WordList out;
  out.requested = count_reduced_words(static_cast<int>(spec.generators.size()), max_length);
  const bool complete =
      for_each_word(spec, max_length, options, [&](const ProjectiveMap& g) { out.elements.push_back(g); });
  out.partial = !complete;
  return out;
}

NPlane apply_word_to_plane(const GroupSpec& spec, const Word& word, const NPlane& plane) {
  const auto letters = letter_maps(spec, false);
  CMatrix basis = plane.basis();
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it == 0 || std::abs(*it) > static_cast<int>(spec.generators.size()))
      throw UsageError("word letter out of range");
    basis = orthonormal_columns(letters[static_cast<std::size_t>(letter_slot(*it))].rep() * basis);
  }
  return NPlane::from_basis(basis);
}

std::vector<Word> syllables(const GroupSpec& spec, const Word& word) {
  std::vector<Word> out;
  int current = -1;
  for (int x : word) {
    const int f = spec.factor_of(std::abs(x) - 1);
    if (out.empty() || f != current) {
      out.emplace_back();
      current = f;
    }
    out.back().push_back(x);
  }
  return out;
}

namespace {

struct CBlockInfo {
  CMatrix c;
  RVector sv;
  bool singular;
};

CBlockInfo c_block_info(const ProjectiveMap& g, const Tolerances& tol) {
  CBlockInfo info{g.block_c(), {}, true};
  info.sv = singular_values(info.c);
  const double smax = info.sv(0);
  const double smin = info.sv(info.sv.size() - 1);
  info.singular = !(smax > 0.0) || smin <= tol.singular * smax;
  return info;
}

}  // namespace

double c_inverse_norm(const ProjectiveMap& g, const Tolerances& tol) {
  if (g.is_identity()) throw UsageError("c_inverse_norm is undefined for the identity");
  const auto info = c_block_info(g, tol);
  if (info.singular) return std::numeric_limits<double>::infinity();
  return std::exp(-g.log_sl_scale()) / info.sv(info.sv.size() - 1);
}

double a_c_inverse_norm(const ProjectiveMap& g, const Tolerances& tol) {
  const auto info = c_block_info(g, tol);
  if (info.singular) return std::numeric_limits<double>::infinity();
  // A C^{-1} = (C^{-T} A^T)^T
  const CMatrix x = info.c.transpose().partialPivLu().solve(CMatrix(g.block_a().transpose()));
  return operator_norm(x.transpose());
}

double c_inverse_d_norm(const ProjectiveMap& g, const Tolerances& tol) {
  const auto info = c_block_info(g, tol);
  if (info.singular) return std::numeric_limits<double>::infinity();
  return operator_norm(info.c.partialPivLu().solve(g.block_d()));
}

std::optional<int> finite_order(const ProjectiveMap& g, int max_order, double tol) {
  ProjectiveMap power = g;
  for (int k = 1; k <= max_order; ++k) {
    if (power.is_identity(tol)) return k;
    power = power * g;
  }
  return std::nullopt;
}

std::vector<int> torsion_generators(const GroupSpec& spec, int max_order) {
  std::vector<int> out;
  for (std::size_t i = 0; i < spec.generators.size(); ++i)
    if (finite_order(spec.generators[i].map, max_order)) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace typel
