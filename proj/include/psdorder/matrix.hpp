#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace psdorder {

using Vector = std::vector<double>;

/// Dense row-major real matrix. Value type; all arithmetic returns new matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  static Matrix column(std::span<const double> v);
  static Matrix outer(std::span<const double> x, std::span<const double> y);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector col(std::size_t j) const;
  void set_col(std::size_t j, std::span<const double> v);

  Matrix transpose() const;
  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  /// Keeps the leading `k` columns.
  Matrix leading_cols(std::size_t k) const { return block(0, 0, rows_, k); }

  double max_abs() const noexcept;
  double norm_inf() const noexcept;
  double frobenius() const noexcept;
  double trace() const;
  bool all_finite() const noexcept;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= -1.0; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, std::span<const double> x);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Horizontal concatenation [a | b].
Matrix hcat(const Matrix& a, const Matrix& b);
/// A * B * A^t.
Matrix congruence(const Matrix& a, const Matrix& b);
double max_abs_diff(const Matrix& a, const Matrix& b);
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// x^t A x
double quadratic_form(const Matrix& a, std::span<const double> x);

/**
 * Real symmetric matrix. Constructors average the input with its transpose,
 * so the stored entries are exactly symmetric. Entries must be finite.
 */
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix zero(std::size_t n) { return SymMatrix(Matrix(n, n)); }
  static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }
  static SymMatrix diagonal(std::span<const double> d) { return SymMatrix(Matrix::diagonal(d)); }
  static SymMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }
  /// x x^t
  static SymMatrix outer(std::span<const double> x) { return SymMatrix(Matrix::outer(x, x)); }

  std::size_t n() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }

  double max_abs() const noexcept { return m_.max_abs(); }
  double norm_inf() const noexcept { return m_.norm_inf(); }
  double trace() const { return m_.trace(); }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator*(double s, const SymMatrix& a);
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  Matrix m_;
};

/// Largest |a_ij - a_ji| relative to max(1, max |a_ij|).
double relative_asymmetry(const Matrix& m);

/// S A S^t, symmetrized.
SymMatrix congruence(const Matrix& s, const SymMatrix& a);

}  // namespace psdorder
