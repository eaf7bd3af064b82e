#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "mimocov/types.hpp"

namespace mimo {

/// splitmix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Fold a label path into a root seed. Streams with different paths are
/// statistically independent, which is what makes parallel sweeps
/// reproducible at any worker count.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Deterministic random stream. Gaussian variates are generated with a
/// fixed polar recipe instead of std::normal_distribution so that the
/// byte-level output does not depend on the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  static Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(seed, path));
  }

  /// Uniform on [0, 1).
  double uniform();

  /// Standard circularly-symmetric complex Gaussian, CN(0, 1).
  Complex cgauss();

  /// Real standard Gaussian, N(0, 1).
  double gauss();

  CVector cgauss_vector(int m);
  CMatrix cgauss_matrix(int m, int n);

 private:
  std::mt19937_64 gen_;
};

}  // namespace mimo
