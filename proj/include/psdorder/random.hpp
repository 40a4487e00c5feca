#pragma once

#include <cstdint>
#include <random>

#include "psdorder/matrix.hpp"

namespace psdorder {

/// SplitMix64 finalizer over (seed, stream); decorrelates per-trial and per-shard sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/**
 * Seeded generator with a platform-independent output sequence: mt19937_64
 * for bits, 53-bit uniforms, and Box-Muller normals. The standard
 * distributions are avoided because their algorithms are implementation
 * defined.
 */
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : gen_(derive_seed(seed, stream)) {}

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [lo, hi].
  int integer(int lo, int hi);
  double normal();
  std::uint64_t bits() { return gen_(); }

  Vector normal_vector(std::size_t n);
  Matrix gaussian(std::size_t rows, std::size_t cols);
  Matrix uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi);
  /// Integer entries drawn uniformly from [lo, hi].
  Matrix integer_matrix(std::size_t rows, std::size_t cols, int lo, int hi);

  /// Haar-distributed orthogonal matrix (Gram-Schmidt of a Gaussian matrix).
  Matrix orthogonal(std::size_t n);
  /// Invertible matrix with 2-norm condition number below max_cond, by rejection.
  Matrix invertible(std::size_t n, double max_cond);
  /// G G^t with G n x rank Gaussian.
  SymMatrix psd(std::size_t n, std::size_t rank);
  /// Symmetric with entries uniform in [-1, 1].
  SymMatrix symmetric(std::size_t n);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Ratio of extreme singular values.
double condition_number(const Matrix& s);

}  // namespace psdorder
