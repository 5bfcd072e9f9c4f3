#include "typel/exterior_algebra.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>

#include "typel/errors.hpp"

namespace typel {

namespace {

void check_m(int m) {
  if (m < kMinHalfDimension || m > kMaxHalfDimension) throw DimensionCapError(m);
}

std::size_t binomial(int n, int k) {
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

struct MultiIndexTable {
  std::vector<MultiIndex> list;
  std::map<std::vector<int>, std::size_t> position;
  // Zero-based row/column sets, one per index, for minor extraction.
  std::vector<std::array<int, kMaxHalfDimension>> zero_based;
};

MultiIndexTable build_table(int m) {
  MultiIndexTable table;
  std::vector<int> current(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) current[static_cast<std::size_t>(i)] = i + 1;
  const int top = 2 * m;
  while (true) {
    table.position.emplace(current, table.list.size());
    table.list.push_back(MultiIndex{current});
    std::array<int, kMaxHalfDimension> zb{};
    for (int i = 0; i < m; ++i) zb[static_cast<std::size_t>(i)] = current[static_cast<std::size_t>(i)] - 1;
    table.zero_based.push_back(zb);
    int i = m - 1;
    while (i >= 0 && current[static_cast<std::size_t>(i)] == top - (m - 1 - i)) --i;
    if (i < 0) break;
    ++current[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j)
      current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
  }
  return table;
}

const MultiIndexTable& table_for(int m) {
  check_m(m);
  static const std::array<MultiIndexTable, kMaxHalfDimension + 1> tables = [] {
    std::array<MultiIndexTable, kMaxHalfDimension + 1> t;
    for (int k = kMinHalfDimension; k <= kMaxHalfDimension; ++k)
      t[static_cast<std::size_t>(k)] = build_table(k);
    return t;
  }();
  return tables[static_cast<std::size_t>(m)];
}

using SmallMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0,
                                  kMaxHalfDimension, kMaxHalfDimension>;

Complex small_det(const SmallMatrix& s) {
  const auto m = s.rows();
  if (m == 2) return s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
  Eigen::PartialPivLU<SmallMatrix> lu(s);
  return lu.determinant();
}

int half_dimension_of_square(const CMatrix& a) {
  if (a.rows() != a.cols() || a.rows() % 2 != 0)
    throw UsageError("compound needs a square matrix of even size, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  const int m = static_cast<int>(a.rows() / 2);
  check_m(m);
  return m;
}

}  // namespace

bool MultiIndex::intersects(const MultiIndex& other) const {
  for (int x : entries)
    if (std::find(other.entries.begin(), other.entries.end(), x) != other.entries.end())
      return true;
  return false;
}

std::string MultiIndex::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(entries[i]);
  }
  return s + "}";
}

std::vector<MultiIndex> enumerate_multiindices(int m) { return table_for(m).list; }

std::size_t multiindex_position(const MultiIndex& index) {
  const auto& table = table_for(index.m());
  const auto it = table.position.find(index.entries);
  if (it == table.position.end()) throw UsageError("invalid multiindex " + index.to_string());
  return it->second;
}

int sign_delta(const MultiIndex& j, const MultiIndex& k) {
  if (j.m() != k.m()) throw UsageError("sign_delta on multiindices of different m");
  if (j.intersects(k)) return 0;
  int nu = 0;
  for (int p : j.entries)
    for (int q : k.entries)
      if (p > q) ++nu;
  return nu % 2 == 0 ? 1 : -1;
}

std::size_t plucker_dimension(int m) {
  check_m(m);
  return binomial(2 * m, m);
}

int half_dimension_for_plucker_size(std::size_t size) {
  for (int m = kMinHalfDimension; m <= kMaxHalfDimension; ++m)
    if (binomial(2 * m, m) == size) return m;
  throw UsageError("no half-dimension has " + std::to_string(size) + " Plucker coordinates");
}

QuadricForm::QuadricForm(int m) : m_(m), indices_(table_for(m).list) {
  const auto& table = table_for(m);
  partner_.resize(indices_.size());
  sign_.resize(indices_.size());
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    std::vector<int> complement;
    for (int x = 1; x <= 2 * m; ++x)
      if (std::find(indices_[j].entries.begin(), indices_[j].entries.end(), x) ==
          indices_[j].entries.end())
        complement.push_back(x);
    partner_[j] = table.position.at(complement);
    sign_[j] = sign_delta(indices_[j], indices_[partner_[j]]);
  }
}

int QuadricForm::delta(std::size_t j, std::size_t k) const {
  return partner_.at(j) == k ? sign_[j] : 0;
}

Complex QuadricForm::operator()(const CVector& z, const CVector& w) const {
  const auto d = static_cast<Eigen::Index>(dimension());
  if (z.size() != d || w.size() != d)
    throw UsageError("q_form expects vectors of length " + std::to_string(d));
  Complex acc = 0.0;
  for (std::size_t j = 0; j < partner_.size(); ++j)
    acc += static_cast<double>(sign_[j]) * z(static_cast<Eigen::Index>(j)) *
           w(static_cast<Eigen::Index>(partner_[j]));
  return acc;
}

const QuadricForm& quadric_form(int m) {
  check_m(m);
  static const std::array<std::unique_ptr<QuadricForm>, kMaxHalfDimension + 1> forms = [] {
    std::array<std::unique_ptr<QuadricForm>, kMaxHalfDimension + 1> f;
    for (int k = kMinHalfDimension; k <= kMaxHalfDimension; ++k)
      f[static_cast<std::size_t>(k)] = std::make_unique<QuadricForm>(k);
    return f;
  }();
  return *forms[static_cast<std::size_t>(m)];
}

CMatrix compound_entries(const CMatrix& a) {
  const int m = half_dimension_of_square(a);
  const auto& table = table_for(m);
  const auto dim = static_cast<Eigen::Index>(table.list.size());
  CMatrix out(dim, dim);
  SmallMatrix sub(m, m);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto& rows = table.zero_based[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < dim; ++j) {
      const auto& cols = table.zero_based[static_cast<std::size_t>(j)];
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          sub(r, c) = a(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
      out(k, j) = small_det(sub);
    }
  }
  return out;
}

CompoundMatrix compound(const CMatrix& a) {
  const int m = half_dimension_of_square(a);
  return CompoundMatrix{m, compound_entries(a), a.determinant()};
}

CompoundMatrix adjugate_compound(const CMatrix& a) {
  const CompoundMatrix c = compound(a);
  const QuadricForm& q = quadric_form(c.m);
  const auto dim = static_cast<Eigen::Index>(q.dimension());
  CMatrix star(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto ic = q.partner(static_cast<std::size_t>(i));
    // delta^{I K} = delta_{K I} with K the complement of I.
    const int s_i = q.partner_sign(ic);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const auto jc = q.partner(static_cast<std::size_t>(j));
      const int s_j = q.partner_sign(jc);
      star(i, j) = static_cast<double>(s_i * s_j) *
                   c.entries(static_cast<Eigen::Index>(jc), static_cast<Eigen::Index>(ic));
    }
  }
  return CompoundMatrix{c.m, star, c.source_det};
}

Complex q_form(const CVector& z, const CVector& w) {
  if (z.size() != w.size()) throw UsageError("q_form arguments differ in length");
  return quadric_form(half_dimension_for_plucker_size(static_cast<std::size_t>(z.size())))(z, w);
}

CVector plucker_of_subspace(const CMatrix& b, const Tolerances& tol) {
  if (b.rows() != 2 * b.cols())
    throw UsageError("plucker_of_subspace expects a 2m x m matrix");
  const int m = static_cast<int>(b.cols());
  const auto& table = table_for(m);
  const RVector sv = singular_values(b);
  if (sv.size() == 0 || !(sv(0) > 0.0) || sv(sv.size() - 1) <= tol.rank * sv(0))
    throw DegenerateSubspaceError("spanning matrix is rank deficient");
  CVector out(static_cast<Eigen::Index>(table.list.size()));
  SmallMatrix sub(m, m);
  for (std::size_t k = 0; k < table.list.size(); ++k) {
    const auto& rows = table.zero_based[k];
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) sub(r, c) = b(rows[static_cast<std::size_t>(r)], c);
    out(static_cast<Eigen::Index>(k)) = small_det(sub);
  }
  return out;
}

}  // namespace typel
