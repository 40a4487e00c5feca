#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "psdorder/matrix.hpp"
#include "psdorder/tolerance.hpp"

namespace psdorder {

/// A = Q diag(lambda) Q^t with lambda non-increasing and Q orthogonal.
struct EigDecomposition {
  Matrix q;
  Vector lambda;
  int sweeps = 0;

  std::size_t n() const noexcept { return lambda.size(); }
  double max_abs_eig() const noexcept;
  Vector vector(std::size_t k) const { return q.col(k); }
  /// Q diag(f(lambda_i)) Q^t
  template <class F>
  SymMatrix apply(F&& f) const;
};

/// Orthonormal columns spanning a subspace of R^n.
struct SubspaceBasis {
  std::size_t ambient = 0;
  Matrix vectors;  // ambient x dim

  std::size_t dim() const noexcept { return vectors.cols(); }
};

/**
 * A symmetric matrix certified positive semidefinite: its smallest computed
 * eigenvalue is no less than -psd_tol * scale.
 */
class PsdMatrix {
 public:
  /// Throws NotPsd when the certificate fails.
  static PsdMatrix certify(const SymMatrix& a, const ToleranceConfig& tol = {});
  /// Certifies against an externally chosen scale (defaults to max |lambda|).
  static PsdMatrix certify(const SymMatrix& a, double scale, const ToleranceConfig& tol);

  const SymMatrix& sym() const noexcept { return base_; }
  operator const SymMatrix&() const noexcept { return base_; }
  const Matrix& matrix() const noexcept { return base_.matrix(); }
  std::size_t n() const noexcept { return base_.n(); }
  double min_eig_witness() const noexcept { return min_eig_; }

 private:
  PsdMatrix(SymMatrix base, double min_eig) : base_(std::move(base)), min_eig_(min_eig) {}
  SymMatrix base_;
  double min_eig_ = 0.0;
};

/// Cyclic Jacobi eigensolver. Fixed row-major sweep order; eigenvalues sorted
/// descending; each eigenvector's first nonzero component is positive.
EigDecomposition sym_eig(const SymMatrix& a, const ToleranceConfig& tol = {});

/// Number of eigenvalues with |lambda| > rank_cutoff(n, scale). `scale`
/// defaults to max |lambda| of `a`.
int numerical_rank(const SymMatrix& a, const ToleranceConfig& tol = {},
                   std::optional<double> scale = std::nullopt);
int numerical_rank(const EigDecomposition& eig, const ToleranceConfig& tol,
                   std::optional<double> scale = std::nullopt);

struct PsdCheck {
  bool psd = false;
  double min_eig = 0.0;
  /// Present iff !psd; satisfies x^t A x < 0 and ||x|| = 1.
  std::optional<Vector> witness;
};

/// PSD iff lambda_min >= -psd_tol * scale, scale defaulting to max |lambda|.
PsdCheck is_psd(const SymMatrix& a, const ToleranceConfig& tol = {},
                std::optional<double> scale = std::nullopt);

/// Moore-Penrose inverse through the eigendecomposition; eigenvalues under
/// the rank cutoff are treated as zero.
SymMatrix pinv(const SymMatrix& a, const ToleranceConfig& tol = {});

/**
 * Member of the inner-inverse family A^+ + V - A^+ A V A A^+, with V an n x n
 * matrix of uniform [-1, 1] entries drawn from `seed`. Seed 0 returns A^+.
 */
Matrix inner_ginverse(const SymMatrix& a, std::uint64_t seed, const ToleranceConfig& tol = {});

/// Eigenvectors whose eigenvalues exceed the rank cutoff.
SubspaceBasis image_basis(const SymMatrix& a, const ToleranceConfig& tol = {},
                          std::optional<double> scale = std::nullopt);
/// Image of a general (possibly rectangular) matrix, via M M^t.
SubspaceBasis column_space(const Matrix& m, const ToleranceConfig& tol = {});

/// U subset of W: every basis vector of U has residual <= recon_tol after
/// projection onto W.
bool subspace_leq(const SubspaceBasis& u, const SubspaceBasis& w, const ToleranceConfig& tol = {});

struct PosNegParts {
  PsdMatrix positive;
  PsdMatrix negative;
};

/// C = C+ - C-, with both parts PSD and C+ C- = 0.
PosNegParts pos_neg_split(const SymMatrix& c, const ToleranceConfig& tol = {});

/// Orthogonal projector U U^t onto span(U).
PsdMatrix projector_onto(const SubspaceBasis& u, const ToleranceConfig& tol = {});

/// max |P^2 - P| relative to max(1, max |P|).
double idempotency_defect(const Matrix& p);

/// Smallest singular value of a square matrix.
double min_singular_value(const Matrix& s, const ToleranceConfig& tol = {});

template <class F>
SymMatrix EigDecomposition::apply(F&& f) const {
  const std::size_t dim = n();
  Matrix out(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const double w = f(lambda[k]);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < dim; ++i) {
      const double qik = q(i, k) * w;
      for (std::size_t j = 0; j < dim; ++j) out(i, j) += qik * q(j, k);
    }
  }
  return SymMatrix(out);
}

}  // namespace psdorder
