#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "typel/linalg.hpp"
#include "typel/planes.hpp"
#include "typel/tolerances.hpp"

namespace typel {

/// A word in the generators. Letter +k is generator k-1, -k its inverse.
/// The written order is the composition order: {a, b} is a*b, so b acts
/// first on points.
using Word = std::vector<int>;

/// Cancels adjacent x x^{-1} pairs.
Word reduce_word(Word word);
Word inverse_word(const Word& word);
/// reduce_word(a ++ b).
Word concat_words(const Word& a, const Word& b);
/// "a b^-1 a"; "1" for the empty word. Falls back to g<k> without names.
std::string word_to_string(const Word& word, const std::vector<std::string>& names = {});

/// Element of PGL_{2n+2}(C).
///
/// rep() is the representative with largest entry real positive and of
/// modulus one. The determinant-one representative is rep() * exp(log_sl_scale())
/// up to a root of unity; it is tracked as a logarithm because the scale of
/// long words overflows a double. Block quantities that depend on the scale
/// (C_g^{-1}, mu_g) always use the determinant-one representative.
class ProjectiveMap {
 public:
  /// Normalizes m. Throws NotGroupElementError when |det| of the normalized
  /// matrix is <= tol.singular, UsageError if m is not square of even size.
  static ProjectiveMap from_matrix(const CMatrix& m, Word word = {}, const Tolerances& tol = {});
  static ProjectiveMap identity(int n);

  const CMatrix& rep() const { return rep_; }
  double log_sl_scale() const { return log_sl_scale_; }
  const Word& word() const { return word_; }
  int dim() const { return static_cast<int>(rep_.rows()); }
  int n() const { return dim() / 2 - 1; }

  /// Blocks of rep() = [[A, B], [C, D]], each (n+1) x (n+1).
  CMatrix block_a() const;
  CMatrix block_b() const;
  CMatrix block_c() const;
  CMatrix block_d() const;

  /// Determinant-one representative; overflows for very long words.
  CMatrix sl_rep() const;

  /// Composition (*this) o other; the word is the reduced concatenation.
  /// Compounds are multiplied when both operands carry one.
  ProjectiveMap operator*(const ProjectiveMap& other) const;
  ProjectiveMap inverse() const;

  /// Copy carrying the normalized compound of rep(). Compounds of products
  /// are then formed from the factors' compounds, which keeps the small
  /// minors of long words accurate.
  ProjectiveMap with_compound() const;
  const std::optional<CMatrix>& compound() const { return compound_; }

  /// Copy with a different word label.
  ProjectiveMap relabeled(Word word) const;

  CVector apply(const CVector& z) const { return rep_ * z; }
  bool is_identity(double tol = 1e-12) const;

 private:
  ProjectiveMap(CMatrix rep, double log_sl_scale, Word word, std::optional<CMatrix> compound)
      : rep_(std::move(rep)),
        log_sl_scale_(log_sl_scale),
        word_(std::move(word)),
        compound_(std::move(compound)) {}

  static ProjectiveMap from_product(const CMatrix& product, double log_scale, Word word,
                                    std::optional<CMatrix> compound);

  CMatrix rep_;
  double log_sl_scale_ = 0.0;
  Word word_;
  std::optional<CMatrix> compound_;
};

/// normalize(M): the normalized representative of M.
ProjectiveMap normalize(const CMatrix& m, const Tolerances& tol = {});

enum class GroupStructure { Free, FreeProduct, Cyclic };

struct Generator {
  std::string name;
  ProjectiveMap map;
};

/// Finitely generated group given by generators acting on P^{2n+1}.
///
/// Generators are stored in the working coordinates z. The optional frame T
/// defines w = T z, the coordinates in which block quantities (C_g, mu_g,
/// the F-region) are evaluated; framed() returns the conjugated generators.
/// For a free product, factor_sizes lists how many consecutive generators
/// belong to each factor; every factor is free on its generators.
struct GroupSpec {
  int n = 1;
  std::vector<Generator> generators;
  GroupStructure structure = GroupStructure::Free;
  std::vector<int> factor_sizes;
  int max_word_length = 8;
  std::optional<CMatrix> frame;
  std::string frame_label = "identity";
  std::size_t word_budget = 1'000'000;

  /// Throws UsageError / NotGroupElementError on inconsistent data.
  void validate(const Tolerances& tol = {}) const;
  GroupSpec framed() const;
  std::vector<std::string> names() const;
  /// Factor of generator k (0-based); 0 unless structure is FreeProduct.
  int factor_of(int generator) const;
};

/// Spec from raw matrices. Names default to a, b, c, ...
GroupSpec make_group_spec(int n, const std::vector<CMatrix>& generators,
                          GroupStructure structure = GroupStructure::Free,
                          std::vector<int> factor_sizes = {},
                          std::vector<std::string> names = {});

/// Number of freely reduced words of length <= max_length on k generators.
std::size_t count_reduced_words(int generators, int max_length);

struct EnumerationOptions {
  /// 0 means spec.word_budget.
  std::size_t budget = 0;
  bool allow_partial = false;
  bool track_compound = false;
};

struct WordList {
  std::vector<ProjectiveMap> elements;
  bool partial = false;
  std::size_t requested = 0;
};

/// Calls visit on every freely reduced word of length <= max_length,
/// breadth-first by length; within a length, words follow the letter order
/// g1, g1^-1, g2, g2^-1, ... of their prefixes. Returns false if the budget
/// cut the enumeration short. Throws EnumerationCapError when the budget is
/// exceeded and partial results are not allowed.
bool for_each_word(const GroupSpec& spec, int max_length, const EnumerationOptions& options,
                   const std::function<void(const ProjectiveMap&)>& visit);

WordList enumerate_words(const GroupSpec& spec, int max_length, const EnumerationOptions& options = {});

/// Map of a word, by a balanced product of letter maps.
ProjectiveMap evaluate_word(const GroupSpec& spec, const Word& word, bool track_compound = false);

/// Letter maps of the spec in letter order (g1, g1^-1, g2, ...).
std::vector<ProjectiveMap> letter_maps(const GroupSpec& spec, bool track_compound = false);

/// Image of a plane under a word, applying letters right to left and
/// re-orthonormalizing after each step.
NPlane apply_word_to_plane(const GroupSpec& spec, const Word& word, const NPlane& plane);

/// Splits a reduced word into maximal runs of letters from one factor.
std::vector<Word> syllables(const GroupSpec& spec, const Word& word);

/// |C_g^{-1}| for the determinant-one representative; +infinity when
/// sigma_min(C_g) <= tol.singular * sigma_max(C_g). Throws UsageError for
/// the identity.
double c_inverse_norm(const ProjectiveMap& g, const Tolerances& tol = {});

/// |A_g C_g^{-1}| and |C_g^{-1} D_g| (scale free); +infinity when C_g is
/// singular.
double a_c_inverse_norm(const ProjectiveMap& g, const Tolerances& tol = {});
double c_inverse_d_norm(const ProjectiveMap& g, const Tolerances& tol = {});

/// Smallest k <= max_order with g^k projectively equal to the identity.
std::optional<int> finite_order(const ProjectiveMap& g, int max_order = 12, double tol = 1e-9);

/// Indices of generators detected as having finite order.
std::vector<int> torsion_generators(const GroupSpec& spec, int max_order = 12);

}  // namespace typel
