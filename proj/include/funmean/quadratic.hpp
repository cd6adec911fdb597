#pragma once

#include <cstddef>
#include <span>

#include "funmean/matrix.hpp"

namespace funmean {

/// Symmetric positive definite matrix. Construction checks
/// |A_ij - A_ji| <= 1e-12 max|A| and a positive smallest eigenvalue; the
/// stored matrix is the exact symmetric part of the input.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& m);

  std::size_t dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Q_A(x) = x^T A x / 2.
struct QuadraticFn {
  SpdMatrix matrix;
};

/// Spectral calculus on SPD matrices. Each result is symmetrized.
inline constexpr double kMaxCondition = 1e12;

/// lambda_max / lambda_min.
double condition_number(const SpdMatrix& a);

/// Throws ConditioningError when condition_number(a) > kMaxCondition.
SpdMatrix spd_inverse(const SpdMatrix& a);

/// A^p through the eigendecomposition.
SpdMatrix spd_power(const SpdMatrix& a, double p);

double eval_quadratic(const QuadraticFn& q, std::span<const double> x);

}  // namespace funmean
