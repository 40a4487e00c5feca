#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psdorder/numkernel.hpp"
#include "psdorder/orders.hpp"

namespace psdorder {

enum class MapKind { congruence, trace_inflation, rank_collapse, custom };
std::string_view to_string(MapKind k);

/// A map on symmetric matrices. Immutable once built.
class MatrixMap {
 public:
  using Fn = std::function<SymMatrix(const SymMatrix&)>;

  MatrixMap(MapKind kind, Fn fn, std::string name, std::optional<Matrix> s = std::nullopt)
      : kind_(kind), fn_(std::move(fn)), name_(std::move(name)), s_(std::move(s)) {}

  MapKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  /// The congruence factor, for kind() == congruence.
  const std::optional<Matrix>& factor() const noexcept { return s_; }
  /// Fixed dimension of congruence maps; the zoo maps accept any n.
  std::optional<std::size_t> dim() const {
    return s_ ? std::optional<std::size_t>(s_->rows()) : std::nullopt;
  }

  SymMatrix operator()(const SymMatrix& a) const { return fn_(a); }
  /// Applies the map and re-certifies the image as PSD.
  PsdMatrix apply(const PsdMatrix& a, const ToleranceConfig& tol = {}) const;

 private:
  MapKind kind_;
  Fn fn_;
  std::string name_;
  std::optional<Matrix> s_;
};

/// A -> S A S^t. Throws SingularMatrix unless sigma_min(S) exceeds the rank cutoff.
MatrixMap congruence_map(const Matrix& s, const ToleranceConfig& tol = {});
/// A -> A + tr(A) I. Preserves the Loewner order forward but not backward.
MatrixMap trace_inflation_map();
/// A -> tr(A) E_11. Collapses every rank to at most one.
MatrixMap rank_collapse_map();
MatrixMap identity_map();

struct Counterexample {
  SymMatrix a;
  SymMatrix b;
  std::string reason;
};

struct PreservationReport {
  std::string relation;
  int trials = 0;
  std::vector<Counterexample> forward_failures;
  std::vector<Counterexample> backward_failures;

  bool preserves_both() const noexcept { return forward_failures.empty() && backward_failures.empty(); }
  std::string verdict() const { return preserves_both() ? "preserves_both" : "fails"; }
};

/// Shape of a sampled pair; see `sample_pair`.
enum class PairKind { comparable, incomparable, reversed, chain };

struct SampledPair {
  PairKind kind;
  PsdMatrix a;
  PsdMatrix b;
};

/**
 * Deterministic PSD pair for trial `trial`, drawn from stream
 * derive_seed(seed, trial). The kind cycles comparable, incomparable,
 * reversed, chain:
 *
 *   comparable   lowner: B = A + G G^t;  minus: A = S E_r S^t, B = S E_s S^t;
 *                star family: A, B - A with orthogonal images.
 *   incomparable two independent random PSD matrices with random ranks.
 *   reversed     a comparable pair with its operands swapped.
 *   chain        endpoints (A, C) of a comparable chain A <= B <= C.
 *
 * Random factors S have condition number below 100.
 */
SampledPair sample_pair(Relation relation, std::size_t n, std::uint64_t seed, int trial,
                        const ToleranceConfig& tol = {});

struct PreservationOptions {
  Relation relation = Relation::lowner;
  std::size_t n = 2;
  std::uint64_t seed = 1;
  int trials = 100;
};

/// Checks A <= B  =>  phi(A) <= phi(B) and the converse on sampled pairs.
PreservationReport preserves_order(const MatrixMap& map, const PreservationOptions& opts,
                                   const ToleranceConfig& tol = {});

/// Probe inputs e_i e_i^t followed by (e_i + e_1)(e_i + e_1)^t for i > 1.
std::vector<SymMatrix> congruence_probes(std::size_t n);

/**
 * Recovers S from pairs (A_i, phi(A_i)) that include the probe set. Columns
 * come from the rank-one images of e_i e_i^t; relative signs from the
 * (e_i + e_1) probes; the global sign makes the first nonzero entry of the
 * first column positive. Throws InconsistentSamples when a probe is missing,
 * a probe image is not rank one, or any pair is not reproduced.
 */
Matrix fit_congruence(const std::vector<std::pair<SymMatrix, SymMatrix>>& pairs,
                      const ToleranceConfig& tol = {});
/// Evaluates `map` on the probe set and fits.
Matrix fit_congruence(const MatrixMap& map, std::size_t n, const ToleranceConfig& tol = {});

/// Sign convention used by fit_congruence: first nonzero entry of column 0 positive.
Matrix normalize_global_sign(Matrix s);

/**
 * Sends orthogonal projectors of every rank (coordinate and random) through
 * `map` and records any image that is not a symmetric idempotent or whose
 * rank differs from the input's.
 */
PreservationReport projector_fixed_point_suite(const MatrixMap& map, std::size_t n,
                                               std::uint64_t seed = 1, const ToleranceConfig& tol = {});

}  // namespace psdorder
