#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace funmean {

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t d);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> data() const { return data_; }

  Matrix transpose() const;
  /// (M + M^T) / 2
  Matrix symmetrized() const;
  double frobenius_norm() const;
  double max_abs() const;
  double trace() const;
  /// max |M_ij - M_ji|
  double asymmetry() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend std::vector<double> operator*(const Matrix& a, std::span<const double> x);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Eigenvalues ascending; column k of `vectors` belongs to values[k].
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic Jacobi eigensolver for symmetric matrices (uses the symmetric part).
SymmetricEigen symmetric_eigen(const Matrix& m);

/// Q diag(lambda) Q^T, symmetrized.
Matrix from_eigen(const Matrix& q, std::span<const double> lambda);

double min_eigenvalue(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace funmean
