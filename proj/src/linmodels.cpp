#include "psdorder/linmodels.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "psdorder/random.hpp"

namespace psdorder {

std::string_view to_string(EfficiencyForm f) {
  return f == EfficiencyForm::general ? "general" : "reduced";
}

void LinearModel::validate() const {
  if (x.rows() != d.n())
    throw DimensionMismatch("model '" + label + "': X has " + std::to_string(x.rows()) + " rows but D is " +
                            std::to_string(d.n()) + "x" + std::to_string(d.n()));
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("model '" + label + "': sigma2 must be a finite nonnegative number");
  if (!x.all_finite()) throw InvalidMatrix("model '" + label + "': X has non-finite entries");
}

bool design_in_covariance_image(const LinearModel& model, const ToleranceConfig& tol) {
  model.validate();
  return subspace_leq(column_space(model.x, tol), image_basis(model.d.sym(), tol), tol);
}

PsdMatrix efficiency_matrix(const LinearModel& model, const ToleranceConfig& tol, EfficiencyForm form,
                            std::uint64_t ginv_seed) {
  model.validate();
  const Matrix& x = model.x;
  const SymMatrix target = form == EfficiencyForm::general ? model.d.sym() + SymMatrix(x * x.transpose())
                                                           : model.d.sym();
  if (ginv_seed != 0) {
    const Matrix g = inner_ginverse(target, ginv_seed, tol);
    const SymMatrix m(x.transpose() * g * x);
    return PsdMatrix::certify(m, std::max(m.norm_inf(), 1e-300), tol);
  }
  // With the pseudoinverse, M = W^t W for W = T^{+1/2} X. The rounding error
  // then grows with sqrt(cond T) instead of cond T.
  const EigDecomposition eig = sym_eig(target, tol);
  const double cutoff = tol.rank_cutoff(eig.n(), eig.max_abs_eig());
  const SymMatrix root_pinv = eig.apply([cutoff](double l) { return l > cutoff ? 1.0 / std::sqrt(l) : 0.0; });
  const Matrix w = root_pinv.matrix() * x;
  const SymMatrix m(w.transpose() * w);
  return PsdMatrix::certify(m, std::max(m.norm_inf(), 1e-300), tol);
}

ComparisonVerdict model_compare(const LinearModel& l1, const LinearModel& l2, const ToleranceConfig& tol) {
  if (l1.parameters() != l2.parameters())
    throw DimensionMismatch("models have " + std::to_string(l1.parameters()) + " and " +
                            std::to_string(l2.parameters()) + " parameters");
  const EfficiencyForm form = design_in_covariance_image(l1, tol) && design_in_covariance_image(l2, tol)
                                  ? EfficiencyForm::reduced
                                  : EfficiencyForm::general;
  PsdMatrix m1 = efficiency_matrix(l1, tol, form);
  PsdMatrix m2 = efficiency_matrix(l2, tol, form);
  OrderVerdict down = lowner_leq(m2, m1, tol);
  OrderVerdict up = lowner_leq(m1, m2, tol);
  return ComparisonVerdict{down.holds, up.holds, form, std::move(m1), std::move(m2), std::move(down), std::move(up)};
}

PsdMatrix estimator_covariance(const Matrix& l, const LinearModel& model, const ToleranceConfig& tol) {
  model.validate();
  if (l.cols() != model.observations())
    throw DimensionMismatch("estimator has " + std::to_string(l.cols()) + " columns, model has " +
                            std::to_string(model.observations()) + " observations");
  const SymMatrix cov(model.sigma2 * congruence(l, model.d.matrix()));
  return PsdMatrix::certify(cov, std::max(cov.norm_inf(), 1e-300), tol);
}

BlueVerdict blue_check(const Matrix& l, const LinearModel& model, const ToleranceConfig& tol) {
  const PsdMatrix vly = estimator_covariance(l, model, tol);
  if (!l.square())
    throw DimensionMismatch("estimator of X beta must be n x n");
  const PsdMatrix vy = PsdMatrix::certify(model.sigma2 * model.d.sym(), tol);
  if (nearly_equal(vly, vy, tol))
    throw PreconditionViolated("V(Ly) equals V(y); the BLUE criterion excludes this case");

  BlueVerdict out;
  const Matrix lx = l * model.x;
  const double xscale = std::max({1.0, model.x.max_abs(), lx.max_abs()});
  out.unbiasedness_residual = max_abs_diff(lx, model.x) / xscale;
  out.cond_i = out.unbiasedness_residual <= tol.recon_tol;
  out.cond_ii = subspace_leq(column_space(l * model.d.matrix(), tol), column_space(model.x, tol), tol);
  try {
    SimCongResult sc = sim_congruence(vly, vy, tol);
    out.cond_iii = sc.r < sc.s_rank;
    out.cond_iii_detail = "r=" + std::to_string(sc.r) + ", s=" + std::to_string(sc.s_rank);
    out.sim_cong = std::move(sc);
  } catch (const NotMinusComparable& e) {
    out.cond_iii = false;
    out.cond_iii_detail = e.what();
  }
  return out;
}

QFormReport qform_rank_criterion(const std::vector<PsdMatrix>& forms, const PsdMatrix& v, const Vector& mu,
                                 const ToleranceConfig& tol) {
  const std::size_t n = v.n();
  if (forms.empty()) throw std::invalid_argument("qform_rank_criterion needs at least one form");
  if (mu.size() != n) throw DimensionMismatch("mean vector length differs from covariance dimension");

  QFormReport report;
  report.w = hcat(v.matrix(), Matrix::column(mu));
  const Matrix wt = report.w.transpose();
  SymMatrix total = SymMatrix::zero(n);
  for (const auto& a : forms) {
    if (a.n() != n) throw DimensionMismatch("form dimension differs from covariance dimension");
    total = total + a.sym();
  }
  const PsdMatrix wtaw = PsdMatrix::certify(SymMatrix(wt * total.matrix() * report.w), tol);
  report.s = numerical_rank(wtaw.sym(), tol);

  report.overall = true;
  for (const auto& a : forms) {
    // W^t A_i W inherits positive semidefiniteness from A_i.
    const PsdMatrix wtaiw =
        PsdMatrix::certify(SymMatrix(wt * a.matrix() * report.w), std::max(wtaw.sym().norm_inf(), 1e-300), tol);
    QFormEntry entry;
    entry.minus = minus_leq(wtaiw, wtaw, MinusMethod::rank, tol);
    entry.rank = std::get<RankTriple>(entry.minus.certificate).rank_a;
    try {
      entry.sim_cong = sim_congruence(wtaiw, wtaw, tol);
      entry.rank = entry.sim_cong->r;
    } catch (const NotMinusComparable&) {
    }
    report.overall = report.overall && entry.minus.holds;
    report.forms.push_back(std::move(entry));
  }
  return report;
}

double chi2_cdf(double x, int df) {
  if (df < 0) throw std::invalid_argument("chi-squared degrees of freedom must be >= 0");
  if (x <= 0.0) return df == 0 && x == 0.0 ? 1.0 : 0.0;
  if (df == 0) return 1.0;
  return boost::math::gamma_p(0.5 * df, 0.5 * x);
}

double ks_distance_chi2(std::vector<double> samples, int df) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = chi2_cdf(samples[i], df);
    worst = std::max({worst, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return worst;
}

McReport mc_quadratic_forms(const std::vector<PsdMatrix>& forms, const PsdMatrix& v, const Vector& mu,
                            int n_samples, std::uint64_t seed, const ToleranceConfig& tol) {
  const std::size_t n = v.n();
  const std::size_t k = forms.size();
  if (mu.size() != n) throw DimensionMismatch("mean vector length differs from covariance dimension");
  if (n_samples < 2) throw std::invalid_argument("Monte Carlo needs at least two samples");

  const auto ev = sym_eig(v.sym(), tol);
  const SymMatrix root = ev.apply([](double l) { return std::sqrt(std::max(l, 0.0)); });

  McReport report;
  report.samples = n_samples;
  for (const auto& a : forms) {
    if (a.n() != n) throw DimensionMismatch("form dimension differs from covariance dimension");
    report.df.push_back(numerical_rank(congruence(root.matrix(), a.sym()), tol));
  }

  std::vector<std::vector<double>> q(k, std::vector<double>(static_cast<std::size_t>(n_samples)));
  const int shards = (n_samples + kMcShardSize - 1) / kMcShardSize;
  for (int shard = 0; shard < shards; ++shard) {
    RandomStream rs(seed, static_cast<std::uint64_t>(shard));
    const int lo = shard * kMcShardSize;
    const int hi = std::min(n_samples, lo + kMcShardSize);
    for (int t = lo; t < hi; ++t) {
      const Vector z = rs.normal_vector(n);
      Vector x = root.matrix() * z;
      for (std::size_t i = 0; i < n; ++i) x[i] += mu[i];
      for (std::size_t f = 0; f < k; ++f) q[f][static_cast<std::size_t>(t)] = quadratic_form(forms[f].matrix(), x);
    }
  }

  const double ns = static_cast<double>(n_samples);
  std::vector<double> mean(k, 0.0), sd(k, 0.0);
  for (std::size_t f = 0; f < k; ++f) {
    for (double val : q[f]) mean[f] += val;
    mean[f] /= ns;
    for (double val : q[f]) sd[f] += (val - mean[f]) * (val - mean[f]);
    sd[f] = std::sqrt(sd[f] / (ns - 1.0));
  }
  report.mean = mean;
  report.correlation = Matrix::identity(k);
  for (std::size_t f = 0; f < k; ++f)
    for (std::size_t g = f + 1; g < k; ++g) {
      double c = 0.0;
      for (std::size_t t = 0; t < q[f].size(); ++t) c += (q[f][t] - mean[f]) * (q[g][t] - mean[g]);
      c /= (ns - 1.0);
      const double denom = sd[f] * sd[g];
      // Degenerate (constant) forms carry no correlation.
      const double corr = denom > 0.0 ? c / denom : 0.0;
      report.correlation(f, g) = report.correlation(g, f) = corr;
      report.max_abs_corr = std::max(report.max_abs_corr, std::abs(corr));
    }
  for (std::size_t f = 0; f < k; ++f) report.ks.push_back(ks_distance_chi2(q[f], report.df[f]));
  return report;
}

}  // namespace psdorder
