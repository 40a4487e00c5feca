#include "psdorder/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "psdorder/errors.hpp"
#include "psdorder/numkernel.hpp"

namespace psdorder {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomStream::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

int RandomStream::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(gen_() % span);
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Vector RandomStream::normal_vector(std::size_t n) {
  Vector v(n);
  for (double& x : v) x = normal();
  return v;
}

Matrix RandomStream::gaussian(std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal();
  return m;
}

Matrix RandomStream::uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

Matrix RandomStream::integer_matrix(std::size_t rows, std::size_t cols, int lo, int hi) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = integer(lo, hi);
  return m;
}

Matrix RandomStream::orthogonal(std::size_t n) {
  for (;;) {
    Matrix g = gaussian(n, n);
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      Vector v = g.col(j);
      // Two passes of modified Gram-Schmidt.
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < j; ++k) {
          const Vector qk = g.col(k);
          const double c = dot(qk, v);
          for (std::size_t i = 0; i < n; ++i) v[i] -= c * qk[i];
        }
      const double len = norm2(v);
      if (len < 1e-8) ok = false;
      for (double& x : v) x /= len;
      g.set_col(j, v);
    }
    if (ok) return g;
  }
}

Matrix RandomStream::invertible(std::size_t n, double max_cond) {
  for (;;) {
    Matrix s = gaussian(n, n);
    if (condition_number(s) < max_cond) return s;
  }
}

SymMatrix RandomStream::psd(std::size_t n, std::size_t rank) {
  if (rank == 0) return SymMatrix::zero(n);
  const Matrix g = gaussian(n, rank);
  return SymMatrix(g * g.transpose());
}

SymMatrix RandomStream::symmetric(std::size_t n) { return SymMatrix(uniform_matrix(n, n, -1.0, 1.0)); }

double condition_number(const Matrix& s) {
  const auto eig = sym_eig(SymMatrix(s.transpose() * s));
  const double lo = eig.lambda.back();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(eig.lambda.front() / lo);
}

}  // namespace psdorder
