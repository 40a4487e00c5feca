#include "psdorder/preservers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psdorder/canonical.hpp"
#include "psdorder/random.hpp"

namespace psdorder {

std::string_view to_string(MapKind k) {
  switch (k) {
    case MapKind::congruence: return "congruence";
    case MapKind::trace_inflation: return "trace_inflation";
    case MapKind::rank_collapse: return "rank_collapse";
    case MapKind::custom: return "custom";
  }
  return "?";
}

PsdMatrix MatrixMap::apply(const PsdMatrix& a, const ToleranceConfig& tol) const {
  return PsdMatrix::certify(fn_(a.sym()), tol);
}

MatrixMap congruence_map(const Matrix& s, const ToleranceConfig& tol) {
  if (!s.square()) throw DimensionMismatch("congruence factor must be square");
  const auto eig = sym_eig(SymMatrix(s.transpose() * s), tol);
  const double smax = std::sqrt(std::max(0.0, eig.lambda.front()));
  const double smin = std::sqrt(std::max(0.0, eig.lambda.back()));
  if (smin <= tol.rank_cutoff(s.rows(), smax))
    throw SingularMatrix("congruence factor is singular (sigma_min = " + std::to_string(smin) + ")");
  return MatrixMap(
      MapKind::congruence, [s](const SymMatrix& a) { return congruence(s, a); }, "congruence", s);
}

MatrixMap trace_inflation_map() {
  return MatrixMap(
      MapKind::trace_inflation,
      [](const SymMatrix& a) { return a + a.trace() * SymMatrix::identity(a.n()); }, "trace-inflation");
}

MatrixMap rank_collapse_map() {
  return MatrixMap(
      MapKind::rank_collapse,
      [](const SymMatrix& a) {
        Matrix out(a.n(), a.n());
        out(0, 0) = a.trace();
        return SymMatrix(out);
      },
      "rank-collapse");
}

MatrixMap identity_map() {
  return MatrixMap(MapKind::custom, [](const SymMatrix& a) { return a; }, "identity");
}

namespace {

constexpr double kSamplerMaxCond = 100.0;

struct Triple {
  SymMatrix a, b, c;
};

SymMatrix positive_diagonal_block(const Matrix& q, std::size_t from, std::size_t count, RandomStream& rs) {
  const std::size_t n = q.rows();
  Vector d(n, 0.0);
  for (std::size_t i = from; i < from + count; ++i) d[i] = rs.uniform(0.5, 2.0);
  return congruence(q, SymMatrix::diagonal(d));
}

// A <= B <= C in the order `relation`, each step generic.
Triple comparable_chain(Relation relation, std::size_t n, RandomStream& rs) {
  const int ni = static_cast<int>(n);
  switch (relation) {
    case Relation::lowner: {
      SymMatrix a = rs.psd(n, static_cast<std::size_t>(rs.integer(0, ni)));
      SymMatrix b = a + rs.psd(n, static_cast<std::size_t>(rs.integer(1, ni)));
      SymMatrix c = b + rs.psd(n, static_cast<std::size_t>(rs.integer(1, ni)));
      return {a, b, c};
    }
    case Relation::minus: {
      const Matrix s = rs.invertible(n, kSamplerMaxCond);
      const int r = rs.integer(0, ni);
      const int t = rs.integer(r, ni);
      const int u = rs.integer(t, ni);
      return {congruence(s, canonical_ek(n, r).sym()), congruence(s, canonical_ek(n, t).sym()),
              congruence(s, canonical_ek(n, u).sym())};
    }
    case Relation::star:
    case Relation::left_star:
    case Relation::right_star: {
      const Matrix q = rs.orthogonal(n);
      const auto ra = static_cast<std::size_t>(rs.integer(0, ni));
      const auto rb = static_cast<std::size_t>(rs.integer(0, ni - static_cast<int>(ra)));
      const auto rc = static_cast<std::size_t>(rs.integer(0, ni - static_cast<int>(ra + rb)));
      SymMatrix a = positive_diagonal_block(q, 0, ra, rs);
      SymMatrix b = a + positive_diagonal_block(q, ra, rb, rs);
      SymMatrix c = b + positive_diagonal_block(q, ra + rb, rc, rs);
      return {a, b, c};
    }
  }
  return {SymMatrix::zero(n), SymMatrix::zero(n), SymMatrix::zero(n)};
}

}  // namespace

SampledPair sample_pair(Relation relation, std::size_t n, std::uint64_t seed, int trial,
                        const ToleranceConfig& tol) {
  RandomStream rs(seed, static_cast<std::uint64_t>(trial));
  const auto kind = static_cast<PairKind>(trial % 4);
  SymMatrix a, b;
  switch (kind) {
    case PairKind::comparable: {
      auto t = comparable_chain(relation, n, rs);
      a = t.a;
      b = t.b;
      break;
    }
    case PairKind::incomparable:
      a = rs.psd(n, static_cast<std::size_t>(rs.integer(1, static_cast<int>(n))));
      b = rs.psd(n, static_cast<std::size_t>(rs.integer(1, static_cast<int>(n))));
      break;
    case PairKind::reversed: {
      auto t = comparable_chain(relation, n, rs);
      a = t.b;
      b = t.a;
      break;
    }
    case PairKind::chain: {
      auto t = comparable_chain(relation, n, rs);
      a = t.a;
      b = t.c;
      break;
    }
  }
  return {kind, PsdMatrix::certify(a, tol), PsdMatrix::certify(b, tol)};
}

PreservationReport preserves_order(const MatrixMap& map, const PreservationOptions& opts,
                                   const ToleranceConfig& tol) {
  if (map.dim() && *map.dim() != opts.n)
    throw DimensionMismatch("map acts on dimension " + std::to_string(*map.dim()) + ", sampler uses " +
                            std::to_string(opts.n));
  PreservationReport report;
  report.relation = std::string(to_string(opts.relation));
  report.trials = opts.trials;
  for (int t = 0; t < opts.trials; ++t) {
    const SampledPair p = sample_pair(opts.relation, opts.n, opts.seed, t, tol);
    const SymMatrix fa = map(p.a);
    const SymMatrix fb = map(p.b);
    const bool before = order_leq(opts.relation, p.a, p.b, tol).holds;
    const bool after = order_leq(opts.relation, fa, fb, tol).holds;
    if (before && !after)
      report.forward_failures.push_back({p.a, p.b, "A <= B but phi(A) </= phi(B) (trial " + std::to_string(t) + ")"});
    if (after && !before)
      report.backward_failures.push_back({p.a, p.b, "phi(A) <= phi(B) but A </= B (trial " + std::to_string(t) + ")"});
  }
  return report;
}

std::vector<SymMatrix> congruence_probes(std::size_t n) {
  std::vector<SymMatrix> probes;
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    probes.push_back(SymMatrix::outer(e));
  }
  for (std::size_t i = 1; i < n; ++i) {
    Vector e(n, 0.0);
    e[0] = 1.0;
    e[i] = 1.0;
    probes.push_back(SymMatrix::outer(e));
  }
  return probes;
}

Matrix normalize_global_sign(Matrix s) {
  const Vector c0 = s.col(0);
  const auto lead = std::find_if(c0.begin(), c0.end(), [](double x) { return x != 0.0; });
  if (lead != c0.end() && *lead < 0.0) s *= -1.0;
  return s;
}

namespace {

const SymMatrix& image_of(const std::vector<std::pair<SymMatrix, SymMatrix>>& pairs, const SymMatrix& probe,
                          const ToleranceConfig& tol) {
  for (const auto& [in, out] : pairs)
    if (in.n() == probe.n() && nearly_equal(in, probe, tol)) {
      if (out.n() != probe.n()) throw InconsistentSamples("probe image has the wrong dimension");
      return out;
    }
  throw InconsistentSamples("sample set is missing a probe input");
}

}  // namespace

Matrix fit_congruence(const std::vector<std::pair<SymMatrix, SymMatrix>>& pairs, const ToleranceConfig& tol) {
  if (pairs.empty()) throw InconsistentSamples("no samples supplied");
  const std::size_t n = pairs.front().first.n();
  const auto probes = congruence_probes(n);

  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const SymMatrix& img = image_of(pairs, probes[i], tol);
    const auto eig = sym_eig(img, tol);
    if (numerical_rank(eig, tol) != 1 || eig.lambda.front() <= 0.0)
      throw InconsistentSamples("image of probe e" + std::to_string(i + 1) + " is not a rank-one PSD matrix");
    Vector col = eig.vector(0);
    const double w = std::sqrt(eig.lambda.front());
    for (double& x : col) x *= w;
    s.set_col(i, col);
  }

  const Vector s1 = s.col(0);
  for (std::size_t i = 1; i < n; ++i) {
    const SymMatrix& img = image_of(pairs, probes[n + i - 1], tol);
    Vector si = s.col(i);
    Vector plus(n), minus(n);
    for (std::size_t k = 0; k < n; ++k) {
      plus[k] = s1[k] + si[k];
      minus[k] = s1[k] - si[k];
    }
    const double rp = max_abs_diff(SymMatrix::outer(plus), img);
    const double rm = max_abs_diff(SymMatrix::outer(minus), img);
    if (rm < rp) {
      for (double& x : si) x = -x;
      s.set_col(i, si);
    }
  }
  s = normalize_global_sign(std::move(s));

  for (const auto& [in, out] : pairs) {
    if (in.n() != n || out.n() != n) throw InconsistentSamples("samples have mixed dimensions");
    const SymMatrix fitted = congruence(s, in);
    const double scale = std::max({fitted.max_abs(), out.max_abs(), 1e-300});
    if (max_abs_diff(fitted, out) > tol.recon_tol * scale)
      throw InconsistentSamples("fitted congruence does not reproduce a supplied pair (residual " +
                                std::to_string(max_abs_diff(fitted, out) / scale) + ")");
  }
  return s;
}

Matrix fit_congruence(const MatrixMap& map, std::size_t n, const ToleranceConfig& tol) {
  std::vector<std::pair<SymMatrix, SymMatrix>> pairs;
  for (const auto& p : congruence_probes(n)) pairs.emplace_back(p, map(p));
  return fit_congruence(pairs, tol);
}

PreservationReport projector_fixed_point_suite(const MatrixMap& map, std::size_t n, std::uint64_t seed,
                                               const ToleranceConfig& tol) {
  std::vector<SymMatrix> projectors;
  for (std::size_t k = 0; k <= n; ++k) projectors.push_back(canonical_ek(n, k).sym());
  RandomStream rs(seed);
  for (std::size_t k = 1; k <= n; ++k) {
    const Matrix q = rs.orthogonal(n).leading_cols(k);
    projectors.emplace_back(q * q.transpose());
  }

  PreservationReport report;
  report.relation = "projector";
  report.trials = static_cast<int>(projectors.size());
  for (const auto& p : projectors) {
    const SymMatrix img = map(p);
    const int rank_in = numerical_rank(p, tol);
    const int rank_out = numerical_rank(img, tol);
    const double defect = idempotency_defect(img.matrix());
    std::string reason;
    if (rank_in != rank_out)
      reason = "rank " + std::to_string(rank_in) + " projector mapped to rank " + std::to_string(rank_out);
    if (defect > tol.idem_tol)
      reason += (reason.empty() ? "" : "; ") + std::string("image is not idempotent (defect ") +
                std::to_string(defect) + ")";
    if (!reason.empty()) report.forward_failures.push_back({p, img, reason});
  }
  return report;
}

}  // namespace psdorder
