#pragma once

#include <cstdint>
#include <random>

#include "typel/linalg.hpp"

namespace typel {

/// Seeded generator with platform-independent output. std::mt19937_64 is
/// fully specified by the standard; the distributions are derived here
/// rather than through <random> distributions, whose algorithms vary
/// between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double gaussian();
  Complex complex_gaussian();

  CVector complex_gaussian_vector(Eigen::Index size);
  CMatrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
  /// Uniform on the unit sphere of C^size.
  CVector unit_sphere(Eigen::Index size);
  /// Haar-distributed unitary via QR of a Gaussian matrix with phase fix.
  CMatrix unitary(Eigen::Index size);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Mixes two integers into a seed (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace typel
