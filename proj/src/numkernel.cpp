#include "psdorder/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "psdorder/errors.hpp"

namespace psdorder {

void ToleranceConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(eig_tol) || !positive(psd_tol) || !positive(idem_tol) || !positive(recon_tol) ||
      (rank_rel_tol && !positive(*rank_rel_tol)) || max_sweeps < 1)
    throw std::invalid_argument("tolerances must be strictly positive");
}

double EigDecomposition::max_abs_eig() const noexcept {
  double m = 0.0;
  for (double l : lambda) m = std::max(m, std::abs(l));
  return m;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

// One Jacobi rotation annihilating a(p, q); also accumulates into v.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const std::size_t n = a.rows();
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = a(p, k) = akp - s * (akq + tau * akp);
    a(k, q) = a(q, k) = akq + s * (akp - tau * akq);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = vkp - s * (vkq + tau * vkp);
    v(k, q) = vkq + s * (vkp - tau * vkq);
  }
}

}  // namespace

EigDecomposition sym_eig(const SymMatrix& input, const ToleranceConfig& tol) {
  const std::size_t n = input.n();
  Matrix a = input.matrix();
  Matrix v = Matrix::identity(n);
  const double target = tol.eig_tol * a.frobenius();
  const double eps = std::numeric_limits<double>::epsilon();

  int sweep = 0;
  bool converged = off_diagonal_norm(a) <= target;
  while (!converged && sweep < tol.max_sweeps) {
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = std::abs(a(p, q));
        if (apq == 0.0) continue;
        // Entries negligible against both diagonal entries are dropped.
        if (sweep > 3 && apq <= eps * std::abs(a(p, p)) * 0.5 &&
            apq <= eps * std::abs(a(q, q)) * 0.5) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
    converged = off_diagonal_norm(a) <= target;
  }
  if (!converged)
    throw NonConvergence("Jacobi eigensolver did not converge within " +
                         std::to_string(tol.max_sweeps) + " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigDecomposition out{Matrix(n, n), Vector(n), sweep};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.lambda[k] = a(src, src);
    Vector col = v.col(src);
    const auto lead = std::find_if(col.begin(), col.end(), [](double x) { return std::abs(x) > 1e-14; });
    if (lead != col.end() && *lead < 0.0)
      for (double& x : col) x = -x;
    out.q.set_col(k, col);
  }
  return out;
}

int numerical_rank(const EigDecomposition& eig, const ToleranceConfig& tol,
                   std::optional<double> scale) {
  const double cutoff = tol.rank_cutoff(eig.n(), scale.value_or(eig.max_abs_eig()));
  return static_cast<int>(
      std::count_if(eig.lambda.begin(), eig.lambda.end(), [&](double l) { return std::abs(l) > cutoff; }));
}

int numerical_rank(const SymMatrix& a, const ToleranceConfig& tol, std::optional<double> scale) {
  return numerical_rank(sym_eig(a, tol), tol, scale);
}

PsdCheck is_psd(const SymMatrix& a, const ToleranceConfig& tol, std::optional<double> scale) {
  const auto eig = sym_eig(a, tol);
  const double lmin = eig.lambda.back();
  const double threshold = -tol.psd_tol * scale.value_or(eig.max_abs_eig());
  PsdCheck out;
  out.min_eig = lmin;
  out.psd = lmin >= threshold;
  if (!out.psd) out.witness = eig.vector(eig.n() - 1);
  return out;
}

PsdMatrix PsdMatrix::certify(const SymMatrix& a, double scale, const ToleranceConfig& tol) {
  const auto check = is_psd(a, tol, scale);
  if (!check.psd)
    throw NotPsd("matrix is not positive semidefinite (min eigenvalue " +
                     std::to_string(check.min_eig) + ")",
                 check.min_eig);
  return PsdMatrix(a, check.min_eig);
}

PsdMatrix PsdMatrix::certify(const SymMatrix& a, const ToleranceConfig& tol) {
  const auto eig = sym_eig(a, tol);
  const double lmin = eig.lambda.back();
  if (lmin < -tol.psd_tol * eig.max_abs_eig())
    throw NotPsd("matrix is not positive semidefinite (min eigenvalue " + std::to_string(lmin) + ")",
                 lmin);
  return PsdMatrix(a, lmin);
}

SymMatrix pinv(const SymMatrix& a, const ToleranceConfig& tol) {
  const auto eig = sym_eig(a, tol);
  const double cutoff = tol.rank_cutoff(eig.n(), eig.max_abs_eig());
  return eig.apply([cutoff](double l) { return std::abs(l) > cutoff ? 1.0 / l : 0.0; });
}

Matrix inner_ginverse(const SymMatrix& a, std::uint64_t seed, const ToleranceConfig& tol) {
  const SymMatrix ap = pinv(a, tol);
  if (seed == 0) return ap.matrix();
  const std::size_t n = a.n();
  std::mt19937_64 gen(seed);
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      v(i, j) = 2.0 * std::generate_canonical<double, 53>(gen) - 1.0;
  const Matrix& am = a.matrix();
  const Matrix& apm = ap.matrix();
  return apm + v - apm * am * v * am * apm;
}

SubspaceBasis image_basis(const SymMatrix& a, const ToleranceConfig& tol, std::optional<double> scale) {
  const auto eig = sym_eig(a, tol);
  const double cutoff = tol.rank_cutoff(eig.n(), scale.value_or(eig.max_abs_eig()));
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < eig.n(); ++k)
    if (std::abs(eig.lambda[k]) > cutoff) keep.push_back(k);
  SubspaceBasis out{a.n(), Matrix(a.n(), keep.size())};
  for (std::size_t j = 0; j < keep.size(); ++j) out.vectors.set_col(j, eig.vector(keep[j]));
  return out;
}

SubspaceBasis column_space(const Matrix& m, const ToleranceConfig& tol) {
  return image_basis(SymMatrix(m * m.transpose()), tol);
}

bool subspace_leq(const SubspaceBasis& u, const SubspaceBasis& w, const ToleranceConfig& tol) {
  if (u.ambient != w.ambient) throw DimensionMismatch("subspace_leq: ambient dimension mismatch");
  if (u.dim() > w.dim()) return false;
  const Matrix wt = w.vectors.transpose();
  for (std::size_t j = 0; j < u.dim(); ++j) {
    const Vector x = u.vectors.col(j);
    const Vector coeff = wt * x;
    Vector residual = x;
    const Vector proj = w.vectors * coeff;
    for (std::size_t i = 0; i < x.size(); ++i) residual[i] -= proj[i];
    if (norm2(residual) > tol.recon_tol) return false;
  }
  return true;
}

PosNegParts pos_neg_split(const SymMatrix& c, const ToleranceConfig& tol) {
  const auto eig = sym_eig(c, tol);
  const double scale = eig.max_abs_eig();
  const double cutoff = tol.rank_cutoff(eig.n(), scale);
  const SymMatrix pos = eig.apply([cutoff](double l) { return l > cutoff ? l : 0.0; });
  const SymMatrix neg = eig.apply([cutoff](double l) { return l < -cutoff ? -l : 0.0; });
  return {PsdMatrix::certify(pos, scale, tol), PsdMatrix::certify(neg, scale, tol)};
}

PsdMatrix projector_onto(const SubspaceBasis& u, const ToleranceConfig& tol) {
  const SymMatrix p(u.vectors * u.vectors.transpose());
  return PsdMatrix::certify(p, 1.0, tol);
}

double idempotency_defect(const Matrix& p) {
  return max_abs_diff(p * p, p) / std::max(1.0, p.max_abs());
}

double min_singular_value(const Matrix& s, const ToleranceConfig& tol) {
  const auto eig = sym_eig(SymMatrix(s.transpose() * s), tol);
  return std::sqrt(std::max(0.0, eig.lambda.back()));
}

}  // namespace psdorder
