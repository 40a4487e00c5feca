#pragma once

#include <cstddef>
#include <limits>
#include <optional>

namespace psdorder {

/**
 * Every floating-point decision in the library (rank, PSD membership,
 * idempotency, reconstruction) reads its threshold from one of these
 * fields. All thresholds are relative to a scale supplied by the caller,
 * usually the largest eigenvalue magnitude or infinity norm of the matrices
 * being compared, so congruence-scaled inputs are treated consistently.
 *
 * Defaults:
 *   eig_tol       1e-14  Jacobi stops once off(A) <= eig_tol * ||A||_F.
 *   max_sweeps    30     cyclic Jacobi sweep budget before NonConvergence.
 *   rank_rel_tol  unset  eigenvalues with |lambda| <= rank_rel_tol * scale
 *                        count as zero. When unset the factor is
 *                        n * eps * 1e4 (about 2.2e-12 * n).
 *   psd_tol       1e-10  A is PSD iff lambda_min >= -psd_tol * scale.
 *   idem_tol      1e-8   ||P^2 - P||_max <= idem_tol * max(1, ||P||_max).
 *   recon_tol     1e-9   reconstruction and identity residuals, relative.
 */
struct ToleranceConfig {
  double eig_tol = 1e-14;
  int max_sweeps = 30;
  std::optional<double> rank_rel_tol;
  double psd_tol = 1e-10;
  double idem_tol = 1e-8;
  double recon_tol = 1e-9;

  static constexpr double kRankEpsScale = 1e4;

  /// Relative rank factor for an n x n problem.
  double rank_factor(std::size_t n) const {
    if (rank_rel_tol) return *rank_rel_tol;
    return static_cast<double>(n) * std::numeric_limits<double>::epsilon() * kRankEpsScale;
  }

  /// Absolute cutoff: |lambda| above this counts toward the rank.
  double rank_cutoff(std::size_t n, double scale) const { return rank_factor(n) * scale; }

  /// Throws std::invalid_argument unless every tolerance is strictly positive.
  void validate() const;
};

}  // namespace psdorder
