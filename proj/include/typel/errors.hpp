#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace typel {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (mismatched dimensions, identity where a
/// non-trivial element is required, too-short sequences, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Half-dimension m outside the supported range [2, 6].
class DimensionCapError : public Error {
 public:
  explicit DimensionCapError(int m);
  int m() const { return m_; }

 private:
  int m_;
};

/// Spanning matrix does not have full column rank.
class DegenerateSubspaceError : public Error {
 public:
  using Error::Error;
};

/// Matrix is numerically singular and cannot represent a projective map.
class NotGroupElementError : public Error {
 public:
  using Error::Error;
};

/// Word enumeration would exceed the configured budget.
class EnumerationCapError : public Error {
 public:
  EnumerationCapError(std::size_t requested, std::size_t budget);
  std::size_t requested() const { return requested_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t requested_;
  std::size_t budget_;
};

/// Compound limit of a sequence has rank > 1, so the sequence does not
/// converge to a single n-plane.
class NotLimitPlaneError : public Error {
 public:
  NotLimitPlaneError(int rank, const std::string& detail);
  int rank() const { return rank_; }

 private:
  int rank_;
};

/// Sequence failed the Cauchy test; no limit can be read off.
class UndecidedError : public Error {
 public:
  using Error::Error;
};

/// Lower-left block C_g is numerically singular.
class CSingularError : public Error {
 public:
  using Error::Error;
};

/// Image point left the affine chart of the volume form.
class ChartEscapeError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue separation |alpha_j| < |beta_k| fails for a Schottky generator.
class InvalidSchottkyError : public Error {
 public:
  using Error::Error;
};

/// No admissible scaling exists for a Klein combination.
class CombinationInfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A block quantity of some word is unbounded (infinite marker).
class UnboundedBlockError : public Error {
 public:
  UnboundedBlockError(const std::string& what, std::vector<int> word);
  const std::vector<int>& word() const { return word_; }

 private:
  std::vector<int> word_;
};

}  // namespace typel
