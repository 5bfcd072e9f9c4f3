#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "typel/linalg.hpp"
#include "typel/tolerances.hpp"

namespace typel {

inline constexpr int kMinHalfDimension = 2;
inline constexpr int kMaxHalfDimension = 6;

/// Sorted m-subset of {1, ..., 2m}. Indexes the coordinates of m-vectors
/// e_I = e_{i_1} ^ ... ^ e_{i_m}; entries are 1-based.
struct MultiIndex {
  std::vector<int> entries;

  int m() const { return static_cast<int>(entries.size()); }
  bool intersects(const MultiIndex& other) const;
  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.entries <=> b.entries;
  }
};

/// All MultiIndices for half-dimension m, lexicographically sorted. Length
/// C(2m, m). Throws DimensionCapError outside [2, 6].
std::vector<MultiIndex> enumerate_multiindices(int m);

/// Position of I in the lexicographic list for its m.
std::size_t multiindex_position(const MultiIndex& index);

/// delta_{JK}: 0 if J and K meet, otherwise (-1)^nu with
/// nu = #{(p, q) in J x K : p > q}. Throws UsageError on mismatched m.
int sign_delta(const MultiIndex& j, const MultiIndex& k);

/// Number of Plucker coordinates N + 1 = C(2m, m).
std::size_t plucker_dimension(int m);

/// Half-dimension m with C(2m, m) == size; throws UsageError if none.
int half_dimension_for_plucker_size(std::size_t size);

/// The bilinear form Q(z, w) = delta_{JK} z^J w^K on C^{N+1}.
///
/// Each row of the sign table has exactly one non-zero entry, at the
/// complementary index, so Q is stored as a (partner, sign) pair per index.
class QuadricForm {
 public:
  explicit QuadricForm(int m);

  int m() const { return m_; }
  std::size_t dimension() const { return partner_.size(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// delta_{JK} by positions in the lexicographic list.
  int delta(std::size_t j, std::size_t k) const;
  std::size_t partner(std::size_t j) const { return partner_[j]; }
  int partner_sign(std::size_t j) const { return sign_[j]; }

  /// Throws UsageError on a length mismatch.
  Complex operator()(const CVector& z, const CVector& w) const;

 private:
  int m_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> partner_;
  std::vector<int> sign_;
};

/// Shared immutable form for half-dimension m.
const QuadricForm& quadric_form(int m);

/// Matrix of m x m minors of a 2m x 2m matrix. entries(K, J) is the minor
/// with rows K and columns J, so that A e_J = A_J^K e_K.
struct CompoundMatrix {
  int m = 0;
  CMatrix entries;
  Complex source_det;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

/// The compound (m-th exterior power) of a. Singular inputs are allowed.
CompoundMatrix compound(const CMatrix& a);

/// Compound entries only, without the source determinant.
CMatrix compound_entries(const CMatrix& a);

/// The adjugate compound (A^*)^I_J = delta^{IK} delta_{LJ} A^L_K, which
/// satisfies A^* A = det(A) I and Q(A z, w) = Q(z, A^* w).
CompoundMatrix adjugate_compound(const CMatrix& a);

/// Q(z, w) for vectors of length C(2m, m).
Complex q_form(const CVector& z, const CVector& w);

/// Plucker coordinates (raw minors, unnormalized) of the column span of the
/// 2m x m matrix b. Throws DegenerateSubspaceError when b is rank deficient
/// relative to tol.rank.
CVector plucker_of_subspace(const CMatrix& b, const Tolerances& tol = {});

}  // namespace typel
