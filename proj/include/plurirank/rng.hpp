#pragma once

#include <cstdint>
#include <random>

#include "plurirank/types.hpp"

namespace plurirank {

/// Deterministic random stream. Gaussians are produced by plain Box-Muller on
/// two engine draws each, so the stream state is exactly the engine state and
/// results do not depend on the standard library's distribution internals.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Stream for sub-task `index` of a seeded computation. Streams derived from
  /// the same (seed, index) coincide; distinct indices decorrelate.
  static RngStream derived(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal via Box-Muller.
  double gaussian();

  /// Complex with independent N(0,1) real and imaginary parts.
  Complex cgaussian();

  VectorXcd gaussian_vector(int n);
  MatrixXcd gaussian_matrix(int rows, int cols);

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used for seed derivation and input digests.
std::uint64_t splitmix64(std::uint64_t x);

/// Haar-distributed n x n unitary: QR of a complex Gaussian matrix with column
/// phases fixed so the R factor has positive real diagonal.
MatrixXcd haar_unitary(int n, RngStream& rng);

/// Haar point on the unit sphere of the column span of `basis`.
VectorXcd haar_sphere_point(const MatrixXcd& basis, RngStream& rng);

}  // namespace plurirank
