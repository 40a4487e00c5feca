#pragma once

#include <stdexcept>
#include <string>

namespace psdorder {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Jacobi sweeps exhausted before the off-diagonal mass fell below eig_tol.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

class NotPsd : public Error {
 public:
  NotPsd(const std::string& what, double min_eig) : Error(what), min_eig_(min_eig) {}
  double min_eig() const noexcept { return min_eig_; }

 private:
  double min_eig_;
};

/// (rank A, rank B, rank(B - A)) as computed under the active tolerance.
struct RankTriple {
  int rank_a = 0;
  int rank_b = 0;
  int rank_diff = 0;

  bool subtractive() const noexcept { return rank_diff == rank_b - rank_a; }
  friend bool operator==(const RankTriple&, const RankTriple&) = default;
};

class NotMinusComparable : public Error {
 public:
  NotMinusComparable(const std::string& what, RankTriple ranks, std::string stage)
      : Error(what), ranks_(ranks), stage_(std::move(stage)) {}
  const RankTriple& ranks() const noexcept { return ranks_; }
  /// Which verification step rejected the pair.
  const std::string& stage() const noexcept { return stage_; }

 private:
  RankTriple ranks_;
  std::string stage_;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class InconsistentSamples : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace psdorder
