#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psdorder/canonical.hpp"
#include "psdorder/numkernel.hpp"
#include "psdorder/orders.hpp"

namespace psdorder {

/// The linear model (y, X beta, sigma2 D): X is n x p, D is n x n PSD.
struct LinearModel {
  Matrix x;
  PsdMatrix d;
  double sigma2 = 1.0;
  std::string label;

  /// Checks shapes and sigma2 >= 0; throws DimensionMismatch / std::invalid_argument.
  void validate() const;
  std::size_t observations() const noexcept { return x.rows(); }
  std::size_t parameters() const noexcept { return x.cols(); }
};

/**
 * general: X^t (D + X X^t)^- X, valid for every model.
 * reduced: X^t D^- X, interchangeable with `general` for comparisons only
 *          when Im X is contained in Im D.
 */
enum class EfficiencyForm { general, reduced };
std::string_view to_string(EfficiencyForm f);

/// Efficiency matrix with the inner inverse inner_ginverse(., ginv_seed); seed 0 uses the pseudoinverse.
PsdMatrix efficiency_matrix(const LinearModel& model, const ToleranceConfig& tol = {},
                            EfficiencyForm form = EfficiencyForm::general, std::uint64_t ginv_seed = 0);

/// Im X subset of Im D.
bool design_in_covariance_image(const LinearModel& model, const ToleranceConfig& tol = {});

struct ComparisonVerdict {
  bool l1_geq_l2 = false;  // M2 <=^L M1
  bool l2_geq_l1 = false;  // M1 <=^L M2
  EfficiencyForm form = EfficiencyForm::general;
  PsdMatrix m1;
  PsdMatrix m2;
  OrderVerdict m2_below_m1;
  OrderVerdict m1_below_m2;
};

/// Uses the reduced form when both models have Im X_i in Im D_i, else the general form.
ComparisonVerdict model_compare(const LinearModel& l1, const LinearModel& l2, const ToleranceConfig& tol = {});

/// V(Ly) = sigma2 L D L^t.
PsdMatrix estimator_covariance(const Matrix& l, const LinearModel& model, const ToleranceConfig& tol = {});

struct BlueVerdict {
  bool cond_i = false;    // L X = X
  bool cond_ii = false;   // Im(L D) in Im X
  bool cond_iii = false;  // V(Ly), V(y) simultaneously congruent to E_r, E_s with r < s
  double unbiasedness_residual = 0.0;
  std::optional<SimCongResult> sim_cong;
  std::string cond_iii_detail;

  bool is_blue() const noexcept { return cond_i && cond_ii && cond_iii; }
};

/// Throws PreconditionViolated when V(Ly) equals V(y).
BlueVerdict blue_check(const Matrix& l, const LinearModel& model, const ToleranceConfig& tol = {});

struct QFormEntry {
  int rank = 0;  // r_i
  OrderVerdict minus;
  std::optional<SimCongResult> sim_cong;
};

struct QFormReport {
  Matrix w;  // (V : mu), n x (n + 1)
  std::vector<QFormEntry> forms;
  int s = 0;  // rank of W^t A W
  bool overall = false;
};

/// Rank criterion for quadratic forms x^t A_i x with x ~ N(mu, V), A = sum A_i.
QFormReport qform_rank_criterion(const std::vector<PsdMatrix>& forms, const PsdMatrix& v, const Vector& mu,
                                 const ToleranceConfig& tol = {});

struct McReport {
  int samples = 0;
  Matrix correlation;        // k x k sample correlations of Q_i
  double max_abs_corr = 0.0;  // off-diagonal
  std::vector<int> df;        // rank(V^{1/2} A_i V^{1/2})
  std::vector<double> ks;     // KS distance of Q_i to the central chi-squared(df_i) CDF
  std::vector<double> mean;
};

/// Samples per shard; shard k draws from RandomStream(seed, k).
inline constexpr int kMcShardSize = 8192;

/// Monte Carlo draws x = mu + V^{1/2} z, Q_i = x^t A_i x.
McReport mc_quadratic_forms(const std::vector<PsdMatrix>& forms, const PsdMatrix& v, const Vector& mu,
                            int n_samples, std::uint64_t seed, const ToleranceConfig& tol = {});

/// Chi-squared CDF via the regularized lower incomplete gamma. df = 0 is the point mass at 0.
double chi2_cdf(double x, int df);

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and chi-squared(df).
double ks_distance_chi2(std::vector<double> samples, int df);

}  // namespace psdorder
