#pragma once

// Shared test-input generators. Each takes an explicit RandomStream so every
// test is reproducible from its seed.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "psdorder/canonical.hpp"
#include "psdorder/random.hpp"

namespace gen {

using psdorder::Matrix;
using psdorder::RandomStream;
using psdorder::SymMatrix;

/// G G^t for an integer n x k factor with entries in [lo, hi].
inline SymMatrix integer_gram(const Matrix& g) { return SymMatrix(g * g.transpose()); }

/// Columns [c0, c0 + k) of m.
inline Matrix columns(const Matrix& m, std::size_t c0, std::size_t k) { return m.block(0, c0, m.rows(), k); }

/**
 * Integer-entry PSD pair (A, B) of size n, rotating through shapes that
 * land on both sides of the minus order:
 *   0  A = G1 G1^t, B = A + G2 G2^t with k1 + k2 <= n
 *   1  same with k1 + k2 > n
 *   2  G2 reuses a column of G1, so the images overlap
 *   3  B = c A or B = A
 *   4  two unrelated Gram matrices
 *   5  A = 0 or A = B
 */
inline std::pair<SymMatrix, SymMatrix> integer_psd_pair(RandomStream& rng, std::size_t n, int shape) {
  const int lo = -3, hi = 3;
  auto rank_in = [&](int a, int b) { return static_cast<std::size_t>(rng.integer(a, b)); };
  switch (shape % 6) {
    case 0: {
      const std::size_t k1 = rank_in(0, static_cast<int>(n));
      const std::size_t k2 = rank_in(0, static_cast<int>(n - k1));
      const Matrix g = rng.integer_matrix(n, k1 + k2 + 1, lo, hi);
      const SymMatrix a = integer_gram(columns(g, 0, k1));
      return {a, a + integer_gram(columns(g, k1, k2))};
    }
    case 1: {
      const std::size_t k1 = rank_in(1, static_cast<int>(n));
      const std::size_t k2 = rank_in(static_cast<int>(n - k1) + 1, static_cast<int>(n));
      const Matrix g1 = rng.integer_matrix(n, k1, lo, hi);
      const Matrix g2 = rng.integer_matrix(n, k2, lo, hi);
      const SymMatrix a = integer_gram(g1);
      return {a, a + integer_gram(g2)};
    }
    case 2: {
      const std::size_t k1 = rank_in(1, static_cast<int>(n));
      const Matrix g1 = rng.integer_matrix(n, k1, lo, hi);
      Matrix g2 = rng.integer_matrix(n, rank_in(1, static_cast<int>(n)), lo, hi);
      const std::size_t shared = rank_in(0, static_cast<int>(k1) - 1);
      const int mult = rng.integer(1, 2);
      for (std::size_t i = 0; i < n; ++i) g2(i, 0) = mult * g1(i, shared);
      const SymMatrix a = integer_gram(g1);
      return {a, a + integer_gram(g2)};
    }
    case 3: {
      const SymMatrix a = integer_gram(rng.integer_matrix(n, rank_in(1, static_cast<int>(n)), lo, hi));
      const double c = static_cast<double>(rng.integer(1, 3));
      return {a, c * a};
    }
    case 4: {
      const SymMatrix a = integer_gram(rng.integer_matrix(n, rank_in(0, static_cast<int>(n)), lo, hi));
      const SymMatrix b = integer_gram(rng.integer_matrix(n, rank_in(0, static_cast<int>(n)), lo, hi));
      return {a, b};
    }
    default: {
      const SymMatrix b = integer_gram(rng.integer_matrix(n, rank_in(0, static_cast<int>(n)), lo, hi));
      if (rng.integer(0, 1) == 0) return {SymMatrix::zero(n), b};
      return {b, b};
    }
  }
}

/// U diag(sigma) V^t with log-spaced singular values spanning exactly `cond`.
inline Matrix with_condition(RandomStream& rng, std::size_t n, double cond) {
  const Matrix u = rng.orthogonal(n);
  const Matrix v = rng.orthogonal(n);
  std::vector<double> sigma(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : (i == 0 ? 1.0 : (i == n - 1 ? 0.0 : rng.uniform()));
    sigma[i] = std::pow(cond, t);
  }
  return u * Matrix::diagonal(sigma) * v.transpose();
}

/// Invertible S with condition number drawn log-uniformly from [1, max_cond).
inline Matrix random_invertible(RandomStream& rng, std::size_t n, double max_cond) {
  const double cond = std::pow(max_cond, rng.uniform(0.0, 0.999));
  return with_condition(rng, n, cond);
}

/// (A, B) = (S E_r S^t, S E_s S^t) with r <= s.
struct CanonicalPair {
  Matrix s;
  std::size_t r = 0;
  std::size_t s_rank = 0;
  SymMatrix a;
  SymMatrix b;
};

inline CanonicalPair canonical_pair(RandomStream& rng, std::size_t n, double max_cond) {
  CanonicalPair p;
  p.s = random_invertible(rng, n, max_cond);
  p.s_rank = static_cast<std::size_t>(rng.integer(1, static_cast<int>(n)));
  p.r = static_cast<std::size_t>(rng.integer(0, static_cast<int>(p.s_rank)));
  p.a = psdorder::congruence(p.s, psdorder::canonical_ek(n, p.r).sym());
  p.b = psdorder::congruence(p.s, psdorder::canonical_ek(n, p.s_rank).sym());
  return p;
}

/// A and B - A with orthogonal images, so A is star-below B.
inline std::pair<SymMatrix, SymMatrix> star_pair(RandomStream& rng, std::size_t n) {
  const Matrix q = rng.orthogonal(n);
  std::vector<double> da(n, 0.0), dc(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int slot = rng.integer(0, 2);  // in A, in B - A, or in neither
    if (slot == 0) da[i] = rng.uniform(0.1, 10.0);
    if (slot == 1) dc[i] = rng.uniform(0.1, 10.0);
  }
  const SymMatrix a(q * Matrix::diagonal(da) * q.transpose());
  const SymMatrix c(q * Matrix::diagonal(dc) * q.transpose());
  return {a, a + c};
}

}  // namespace gen
