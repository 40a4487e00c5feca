#pragma once

#include <cstddef>

#include "psdorder/errors.hpp"
#include "psdorder/numkernel.hpp"

namespace psdorder {

/// Counts of positive, negative and zero eigenvalues; sums to n.
struct Inertia {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;

  int rank() const noexcept { return n_plus + n_minus; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// diag(1, ..., 1, 0, ..., 0) with k ones. Throws std::out_of_range unless 0 <= k <= n.
PsdMatrix canonical_ek(std::size_t n, std::size_t k);

/// Eigenvalues above +cutoff, below -cutoff, and in between.
Inertia inertia(const SymMatrix& a, const ToleranceConfig& tol = {});

struct CongruenceForm {
  Matrix s;
  Inertia inertia;
};

/// A = S diag(I_p, -I_q, 0) S^t with S = Q diag(sqrt|lambda_i| or 1), columns
/// ordered positive, negative, zero.
CongruenceForm congruence_canonical(const SymMatrix& a, const ToleranceConfig& tol = {});

/// A = S E_r S^t and B = S E_s S^t.
struct SimCongResult {
  Matrix s;
  int r = 0;
  int s_rank = 0;
  double residual_a = 0.0;  // max |A - S E_r S^t| / scale
  double residual_b = 0.0;  // max |B - S E_s S^t| / scale
  double min_singular = 0.0;
};

/**
 * Simultaneous congruence of a minus-comparable PSD pair.
 *
 *  1. B = Q diag(lambda) Q^t; s = rank B; V = diag(lambda^{-1/2} on the first s, 1) Q^t,
 *     so V B V^t = E_s.
 *  2. A1 = V A V^t must vanish outside its leading s x s block.
 *  3. That block must be a symmetric idempotent.
 *  4. Its eigenvalues cluster at 1 (r of them) and 0; the eigenvectors give an
 *     orthogonal U with U A1 U^t = diag(I_r, 0).
 *  5. Z = diag(U, I_{n-s}), S = (Z V)^{-1} = Q diag(sqrt(lambda), 1) Z^t.
 *  6. Both reconstructions are checked.
 *
 * Any failed check raises NotMinusComparable carrying the rank triple. A zero
 * A gives r = 0 and S from step 1.
 */
SimCongResult sim_congruence(const PsdMatrix& a, const PsdMatrix& b, const ToleranceConfig& tol = {});

}  // namespace psdorder
