#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "psdorder/errors.hpp"
#include "psdorder/numkernel.hpp"

namespace psdorder {

enum class Relation { lowner, minus, star, left_star, right_star };
enum class MinusMethod { rank, image, ginv };
enum class StarVariant { star, left_star, right_star };

std::string_view to_string(Relation r);
std::string_view to_string(MinusMethod m);
/// Accepts both `left_star` and `left-star` spellings. Throws std::invalid_argument.
Relation parse_relation(std::string_view s);
MinusMethod parse_minus_method(std::string_view s);

/// How A sits relative to B once both directions are known.
enum class Standing { equal, below, above, incomparable };
std::string_view to_string(Standing s);

/// Eigenvector of B - A with x^t (B - A) x = value < 0.
struct PsdWitness {
  Vector x;
  double value = 0.0;
};

/// Inner inverse G of A with the residuals of the defining identities.
struct InnerInverseWitness {
  Matrix g;
  double inner_residual = 0.0;  // ||AGA - A|| / scale
  double left_residual = 0.0;   // ||GA - GB|| / scale
  double right_residual = 0.0;  // ||AG - BG|| / scale
};

/// Residuals of the star-family identities plus subspace containment.
struct StarResiduals {
  double left_residual = 0.0;   // ||A^t A - A^t B|| / scale
  double right_residual = 0.0;  // ||A A^t - B A^t|| (star) or ||A A^t - A B^t|| (right-star)
  bool image_contained = true;
};

/// Löwner success carries the smallest eigenvalue of B - A.
struct MinEigenvalue {
  double value = 0.0;
};

/// Direct-sum test: dim Im A + dim Im(B - A) against dim Im B and the rank of [Im A | Im(B - A)].
struct DirectSumCertificate {
  int dim_image_a = 0;
  int dim_image_b = 0;
  int dim_image_diff = 0;
  int dim_sum = 0;
};

using Certificate = std::variant<std::monostate, MinEigenvalue, PsdWitness, RankTriple,
                                 InnerInverseWitness, StarResiduals, DirectSumCertificate>;

struct OrderVerdict {
  bool holds = false;
  Relation relation = Relation::lowner;
  std::optional<MinusMethod> method;
  Standing standing = Standing::incomparable;
  Certificate certificate;
  std::string detail;
};

/// A <=^L B iff B - A is PSD. PSD threshold is relative to max(||A||, ||B||).
OrderVerdict lowner_leq(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol = {});

/**
 * Minus order through one of its three characterizations:
 *   rank  - rank(B - A) = rank(B) - rank(A), one cutoff shared by all three ranks;
 *   image - Im B = Im A (+) Im(B - A) as a direct sum;
 *   ginv  - G = B^+ A B^+ is an inner inverse of A with GA = GB and AG = BG.
 */
OrderVerdict minus_leq(const SymMatrix& a, const SymMatrix& b, MinusMethod method = MinusMethod::rank,
                       const ToleranceConfig& tol = {});

OrderVerdict star_family_leq(const SymMatrix& a, const SymMatrix& b, StarVariant variant,
                             const ToleranceConfig& tol = {});

/// Dispatches on relation; minus uses MinusMethod::rank.
OrderVerdict order_leq(Relation relation, const SymMatrix& a, const SymMatrix& b,
                       const ToleranceConfig& tol = {});

/// rank(A - B) == 1 under the shared cutoff.
bool adjacent(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol = {});

/// Numerical equality: max |A - B| <= recon_tol * max(1, ||A||, ||B||).
bool nearly_equal(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol = {});

/// Rank triple of (A, B) with the cutoff shared across all three ranks.
RankTriple rank_triple(const SymMatrix& a, const SymMatrix& b, const ToleranceConfig& tol = {});

struct ScalarMultiple {
  double lambda = 0.0;
  /// max |B - lambda A| relative to max(1, ||A||, ||B||).
  double residual = 0.0;
};

/**
 * For rank-one PSD A and PSD B with B <=^L A, B is a multiple lambda A with
 * lambda in [0, 1]; lambda is recovered as tr B / tr A. Returns nullopt when
 * B is not below A. Throws PreconditionViolated unless rank A == 1.
 */
std::optional<ScalarMultiple> rank_one_scalar(const PsdMatrix& b, const PsdMatrix& a,
                                              const ToleranceConfig& tol = {});

}  // namespace psdorder
