#include "psdorder/orders.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace psdorder {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::lowner: return "lowner";
    case Relation::minus: return "minus";
    case Relation::star: return "star";
    case Relation::left_star: return "left-star";
    case Relation::right_star: return "right-star";
  }
  return "?";
}

std::string_view to_string(MinusMethod m) {
  switch (m) {
    case MinusMethod::rank: return "rank";
    case MinusMethod::image: return "image";
    case MinusMethod::ginv: return "ginv";
  }
  return "?";
}

std::string_view to_string(Standing s) {
  switch (s) {
    case Standing::equal: return "equal";
    case Standing::below: return "strictly_less";
    case Standing::above: return "strictly_greater";
    case Standing::incomparable: return "incomparable";
  }
  return "?";
}

Relation parse_relation(std::string_view s) {
  if (s == "lowner" || s == "loewner") return Relation::lowner;
  if (s == "minus") return Relation::minus;
  if (s == "star") return Relation::star;
  if (s == "left-star" || s == "left_star") return Relation::left_star;
  if (s == "right-star" || s == "right_star") return Relation::right_star;
  throw std::invalid_argument("unknown relation '" + std::string(s) + "'");
}

MinusMethod parse_minus_method(std::string_view s) {
  if (s == "rank") return MinusMethod::rank;
  if (s == "image") return MinusMethod::image;
  if (s == "ginv") return MinusMethod::ginv;
  throw std::invalid_argument("unknown minus method '" + std::string(s) + "'");
}

namespace {

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.n() != b.n())
    throw DimensionMismatch("operands have dimensions " + std::to_string(a.n()) + " and " +
                            std::to_string(b.n()));
}

// Spectral-radius bound shared by every cutoff in a pairwise decision.
double pair_scale(const SymMatrix& a, const SymMatrix& b) { return std::max(a.norm_inf(), b.norm_inf()); }

Standing standing_of(bool forward, bool backward, bool equal) {
  if (equal) return Standing::equal;
  if (forward) return Standing::below;
  if (backward) return Standing::above;
  return Standing::incomparable;
}

std::string describe(Standing s) {
  switch (s) {
    case Standing::equal: return "A and B are equal";
    case Standing::below: return "A is strictly below B";
    case Standing::above: return "A is strictly greater than B";
    case Standing::incomparable: return "A and B are incomparable";
  }
  return {};
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : num; }

}  // namespace

bool nearly_equal(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol) {
  require_same_dim(a, b);
  const double scale = std::max({1.0, a.max_abs(), b.max_abs()});
  return max_abs_diff(a, b) <= tol.recon_tol * scale;
}

RankTriple rank_triple(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol) {
  require_same_dim(a, b);
  const double scale = pair_scale(a, b);
  return {numerical_rank(a, tol, scale), numerical_rank(b, tol, scale), numerical_rank(b - a, tol, scale)};
}

OrderVerdict lowner_leq(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol) {
  require_same_dim(a, b);
  const double scale = pair_scale(a, b);
  const auto eig = sym_eig(b - a, tol);
  const double threshold = tol.psd_tol * scale;
  const double lmin = eig.lambda.back();
  const double lmax = eig.lambda.front();

  OrderVerdict v;
  v.relation = Relation::lowner;
  v.holds = lmin >= -threshold;
  v.standing = standing_of(v.holds, lmax <= threshold, nearly_equal(a, b, tol));
  if (v.holds)
    v.certificate = MinEigenvalue{lmin};
  else
    v.certificate = PsdWitness{eig.vector(eig.n() - 1), lmin};
  v.detail = describe(v.standing) + " in the Loewner order";
  return v;
}

namespace {

OrderVerdict minus_by_rank(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol) {
  const RankTriple r = rank_triple(a, b, tol);
  OrderVerdict v;
  v.holds = r.subtractive();
  // rank(A - B) = rank(B - A), so the reverse test reuses the same triple.
  const bool backward = r.rank_diff == r.rank_a - r.rank_b;
  v.standing = standing_of(v.holds, backward, nearly_equal(a, b, tol));
  v.certificate = r;
  v.detail = describe(v.standing) + "; rank(B-A)=" + std::to_string(r.rank_diff) +
             ", rank(B)-rank(A)=" + std::to_string(r.rank_b - r.rank_a);
  return v;
}

OrderVerdict minus_by_image(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol) {
  const double scale = pair_scale(a, b);
  const SubspaceBasis ia = image_basis(a, tol, scale);
  const SubspaceBasis ib = image_basis(b, tol, scale);
  const SubspaceBasis ic = image_basis(b - a, tol, scale);

  DirectSumCertificate cert{static_cast<int>(ia.dim()), static_cast<int>(ib.dim()),
                            static_cast<int>(ic.dim()), 0};
  const Matrix k = hcat(ia.vectors, ic.vectors);
  if (k.cols() > 0) {
    // Singular values of [Im A | Im(B-A)] are sqrt of the Gram eigenvalues, bounded by sqrt(2).
    const SymMatrix gram(k.transpose() * k);
    cert.dim_sum = numerical_rank(gram, tol, 2.0);
  }
  const bool direct = cert.dim_sum == cert.dim_image_a + cert.dim_image_diff;
  const bool spans = cert.dim_image_a + cert.dim_image_diff == cert.dim_image_b &&
                     subspace_leq(ia, ib, tol) && subspace_leq(ic, ib, tol);

  OrderVerdict v;
  v.holds = direct && spans;
  const bool backward = cert.dim_image_b + cert.dim_image_diff == cert.dim_image_a &&
                        subspace_leq(ib, ia, tol) && subspace_leq(ic, ia, tol);
  v.standing = standing_of(v.holds, backward, nearly_equal(a, b, tol));
  v.certificate = cert;
  v.detail = describe(v.standing) + (direct ? "" : "; Im A and Im(B-A) intersect nontrivially") +
             (spans ? "" : "; Im A + Im(B-A) does not match Im B");
  return v;
}

OrderVerdict minus_by_ginv(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol) {
  const SymMatrix bp = pinv(b, tol);
  const Matrix& am = a.matrix();
  const Matrix g = bp.matrix() * am * bp.matrix();
  const Matrix diff = (a - b).matrix();

  const double na = am.norm_inf();
  const double ng = g.norm_inf();
  const double nab = pair_scale(a, b);
  InnerInverseWitness w;
  w.inner_residual = safe_ratio((am * g * am - am).norm_inf(), std::max(na, na * na * ng));
  w.left_residual = safe_ratio((g * diff).norm_inf(), ng * nab);
  w.right_residual = safe_ratio((diff * g).norm_inf(), ng * nab);
  const double worst = std::max({w.inner_residual, w.left_residual, w.right_residual});
  w.g = g;

  OrderVerdict v;
  v.holds = worst <= tol.recon_tol;
  const bool eq = nearly_equal(a, b, tol);
  v.standing = standing_of(v.holds, false, eq);
  if (!v.holds && !eq) {
    // Reverse direction with the roles swapped, for the standing only.
    const SymMatrix ap = pinv(a, tol);
    const Matrix h = ap.matrix() * b.matrix() * ap.matrix();
    const double nb = b.norm_inf();
    const double nh = h.norm_inf();
    const double back = std::max({safe_ratio((b.matrix() * h * b.matrix() - b.matrix()).norm_inf(),
                                             std::max(nb, nb * nb * nh)),
                                  safe_ratio((h * diff).norm_inf(), nh * nab),
                                  safe_ratio((diff * h).norm_inf(), nh * nab)});
    if (back <= tol.recon_tol) v.standing = Standing::above;
  }
  v.certificate = std::move(w);
  v.detail = describe(v.standing) + "; witness G = B^+ A B^+";
  return v;
}

}  // namespace

OrderVerdict minus_leq(const SymMatrix& a, const SymMatrix& b, MinusMethod method,
                       const ToleranceConfig& tol) {
  require_same_dim(a, b);
  OrderVerdict v;
  switch (method) {
    case MinusMethod::rank: v = minus_by_rank(a, b, tol); break;
    case MinusMethod::image: v = minus_by_image(a, b, tol); break;
    case MinusMethod::ginv: v = minus_by_ginv(a, b, tol); break;
  }
  v.relation = Relation::minus;
  v.method = method;
  return v;
}

namespace {

StarResiduals star_residuals(const SymMatrix& a, const SymMatrix& b, StarVariant variant,
                             const ToleranceConfig& tol) {
  const Matrix& am = a.matrix();
  const Matrix& bm = b.matrix();
  const Matrix at = am.transpose();
  const double scale = a.norm_inf() * pair_scale(a, b);
  StarResiduals r;
  r.left_residual = safe_ratio((at * am - at * bm).norm_inf(), scale);
  if (variant == StarVariant::right_star)
    r.right_residual = safe_ratio((am * at - am * bm.transpose()).norm_inf(), scale);
  else
    r.right_residual = safe_ratio((am * at - bm * at).norm_inf(), scale);
  if (variant != StarVariant::star) {
    const double s = pair_scale(a, b);
    r.image_contained = subspace_leq(image_basis(a, tol, s), image_basis(b, tol, s), tol);
  }
  return r;
}

bool star_holds(const StarResiduals& r, StarVariant variant, const ToleranceConfig& tol) {
  switch (variant) {
    case StarVariant::star: return r.left_residual <= tol.recon_tol && r.right_residual <= tol.recon_tol;
    case StarVariant::left_star: return r.left_residual <= tol.recon_tol && r.image_contained;
    case StarVariant::right_star: return r.right_residual <= tol.recon_tol && r.image_contained;
  }
  return false;
}

Relation relation_of(StarVariant v) {
  switch (v) {
    case StarVariant::star: return Relation::star;
    case StarVariant::left_star: return Relation::left_star;
    case StarVariant::right_star: return Relation::right_star;
  }
  return Relation::star;
}

}  // namespace

OrderVerdict star_family_leq(const SymMatrix& a, const SymMatrix& b, StarVariant variant,
                             const ToleranceConfig& tol) {
  require_same_dim(a, b);
  const StarResiduals fwd = star_residuals(a, b, variant, tol);
  OrderVerdict v;
  v.relation = relation_of(variant);
  v.holds = star_holds(fwd, variant, tol);
  const bool eq = nearly_equal(a, b, tol);
  bool backward = false;
  if (!v.holds && !eq) backward = star_holds(star_residuals(b, a, variant, tol), variant, tol);
  v.standing = standing_of(v.holds, backward, eq);
  v.certificate = fwd;
  v.detail = describe(v.standing) + " in the " + std::string(to_string(v.relation)) + " order";
  return v;
}

OrderVerdict order_leq(Relation relation, const SymMatrix& a, const SymMatrix& b,
                       const ToleranceConfig& tol) {
  switch (relation) {
    case Relation::lowner: return lowner_leq(a, b, tol);
    case Relation::minus: return minus_leq(a, b, MinusMethod::rank, tol);
    case Relation::star: return star_family_leq(a, b, StarVariant::star, tol);
    case Relation::left_star: return star_family_leq(a, b, StarVariant::left_star, tol);
    case Relation::right_star: return star_family_leq(a, b, StarVariant::right_star, tol);
  }
  throw std::invalid_argument("unknown relation");
}

bool adjacent(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol) {
  require_same_dim(a, b);
  return numerical_rank(a - b, tol, pair_scale(a, b)) == 1;
}

std::optional<ScalarMultiple> rank_one_scalar(const PsdMatrix& b, const PsdMatrix& a,
                                              const ToleranceConfig& tol) {
  if (numerical_rank(a.sym(), tol) != 1)
    throw PreconditionViolated("rank_one_scalar requires a rank-one upper operand");
  if (!lowner_leq(b, a, tol).holds) return std::nullopt;
  ScalarMultiple out;
  out.lambda = std::clamp(b.sym().trace() / a.sym().trace(), 0.0, 1.0);
  const double scale = std::max({1.0, a.sym().max_abs(), b.sym().max_abs()});
  out.residual = max_abs_diff(b.matrix(), out.lambda * a.matrix()) / scale;
  return out;
}

}  // namespace psdorder
