#include "psdorder/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "psdorder/orders.hpp"

namespace psdorder {

PsdMatrix canonical_ek(std::size_t n, std::size_t k) {
  if (n == 0 || k > n)
    throw std::out_of_range("canonical_ek: need 0 <= k <= n and n >= 1, got n=" + std::to_string(n) +
                            " k=" + std::to_string(k));
  Vector d(n, 0.0);
  std::fill_n(d.begin(), k, 1.0);
  return PsdMatrix::certify(SymMatrix::diagonal(d), 1.0, ToleranceConfig{});
}

Inertia inertia(const SymMatrix& a, const ToleranceConfig& tol) {
  const auto eig = sym_eig(a, tol);
  const double cutoff = tol.rank_cutoff(eig.n(), eig.max_abs_eig());
  Inertia out;
  for (double l : eig.lambda) {
    if (l > cutoff)
      ++out.n_plus;
    else if (l < -cutoff)
      ++out.n_minus;
    else
      ++out.n_zero;
  }
  return out;
}

CongruenceForm congruence_canonical(const SymMatrix& a, const ToleranceConfig& tol) {
  const auto eig = sym_eig(a, tol);
  const std::size_t n = eig.n();
  const double cutoff = tol.rank_cutoff(n, eig.max_abs_eig());

  std::vector<std::size_t> pos, neg, zero;
  for (std::size_t k = 0; k < n; ++k) {
    if (eig.lambda[k] > cutoff)
      pos.push_back(k);
    else if (eig.lambda[k] < -cutoff)
      neg.push_back(k);
    else
      zero.push_back(k);
  }
  // Most negative first keeps the -I block ordered by magnitude.
  std::reverse(neg.begin(), neg.end());

  CongruenceForm out{Matrix(n, n),
                     {static_cast<int>(pos.size()), static_cast<int>(neg.size()), static_cast<int>(zero.size())}};
  std::size_t col = 0;
  for (const auto* group : {&pos, &neg, &zero}) {
    for (std::size_t k : *group) {
      const double l = eig.lambda[k];
      const double w = (group == &zero) ? 1.0 : std::sqrt(std::abs(l));
      Vector v = eig.vector(k);
      for (double& x : v) x *= w;
      out.s.set_col(col++, v);
    }
  }
  return out;
}

namespace {

[[noreturn]] void reject(const PsdMatrix& a, const PsdMatrix& b, const ToleranceConfig& tol,
                         const std::string& stage, const std::string& why) {
  throw NotMinusComparable("pair is not minus-comparable: " + why, rank_triple(a, b, tol), stage);
}

}  // namespace

SimCongResult sim_congruence(const PsdMatrix& a, const PsdMatrix& b, const ToleranceConfig& tol) {
  const std::size_t n = a.n();
  if (b.n() != n)
    throw DimensionMismatch("sim_congruence: dimensions " + std::to_string(n) + " and " +
                            std::to_string(b.n()));
  const double scale = std::max(a.sym().norm_inf(), b.sym().norm_inf());
  const double eps = std::numeric_limits<double>::epsilon();

  // Step 1: V B V^t = E_s.
  const auto eb = sym_eig(b.sym(), tol);
  const int s = numerical_rank(eb, tol, scale);
  const auto su = static_cast<std::size_t>(s);
  Vector root(n, 1.0);
  for (std::size_t i = 0; i < su; ++i) root[i] = std::sqrt(eb.lambda[i]);

  // Rounding in the scaled coordinates grows like the condition number of B on its image.
  const double kappa = s > 0 ? scale / eb.lambda[su - 1] : 1.0;
  const double noise = 64.0 * static_cast<double>(n) * eps * kappa;
  const double idem_threshold = std::max(tol.idem_tol, noise);

  const Matrix& am = a.matrix();
  const Matrix qt = eb.q.transpose();

  // Step 2: Im A must lie in Im B, i.e. A annihilates the trailing eigenvectors of B.
  if (su < n) {
    const Matrix tail = qt.block(su, 0, n - su, n) * am;
    if (tail.max_abs() > std::max(tol.recon_tol, noise) * std::max(scale, 1e-300))
      reject(a, b, tol, "image", "Im A is not contained in Im B");
  }

  // Step 3: leading block of V A V^t is a symmetric idempotent.
  Matrix a1(su, su);
  if (s > 0) {
    const Matrix q1 = eb.q.leading_cols(su);
    const Matrix core = q1.transpose() * am * q1;
    for (std::size_t i = 0; i < su; ++i)
      for (std::size_t j = 0; j < su; ++j) a1(i, j) = core(i, j) / (root[i] * root[j]);
  }
  int r = 0;
  Matrix u_t(su, su);
  if (s > 0) {
    const SymMatrix block(a1);
    if (idempotency_defect(block.matrix()) > idem_threshold)
      reject(a, b, tol, "idempotent", "scaled block of A is not idempotent");

    // Step 4: eigenvalues of the block cluster at {1, 0}.
    const auto ea = sym_eig(block, tol);
    for (double l : ea.lambda) {
      if (std::abs(l - 1.0) <= idem_threshold)
        ++r;
      else if (std::abs(l) > idem_threshold) {
        std::ostringstream msg;
        msg << std::setprecision(6) << "scaled block has eigenvalue " << l << " outside {0, 1}";
        reject(a, b, tol, "spectrum", msg.str());
      }
    }
    u_t = ea.q;  // columns are eigenvectors, ones first
  }

  // Step 5: S = Q diag(sqrt(lambda), 1) diag(U^t, I).
  Matrix zt = Matrix::identity(n);
  for (std::size_t i = 0; i < su; ++i)
    for (std::size_t j = 0; j < su; ++j) zt(i, j) = u_t(i, j);
  Matrix qd = eb.q;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) qd(i, j) *= root[j];

  SimCongResult out;
  out.s = qd * zt;
  out.r = r;
  out.s_rank = s;
  out.min_singular = *std::min_element(root.begin(), root.end());

  // Step 6: both reconstructions.
  const double rscale = std::max({a.sym().max_abs(), b.sym().max_abs(), 1e-300});
  const SymMatrix ra = congruence(out.s, canonical_ek(n, static_cast<std::size_t>(r)).sym());
  const SymMatrix rb = congruence(out.s, canonical_ek(n, su).sym());
  out.residual_a = max_abs_diff(ra, a.sym()) / rscale;
  out.residual_b = max_abs_diff(rb, b.sym()) / rscale;
  const double recon_threshold = std::max(tol.recon_tol, noise);
  if (out.residual_a > recon_threshold || out.residual_b > recon_threshold) {
    std::ostringstream msg;
    msg << std::setprecision(3) << "reconstruction residuals " << out.residual_a << ", " << out.residual_b
        << " exceed " << recon_threshold;
    reject(a, b, tol, "reconstruction", msg.str());
  }
  const double max_sv = *std::max_element(root.begin(), root.end());
  if (out.min_singular <= tol.rank_cutoff(n, max_sv))
    reject(a, b, tol, "singular", "congruence factor is numerically singular");
  return out;
}

}  // namespace psdorder
