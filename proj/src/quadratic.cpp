#include "funmean/quadratic.hpp"

#include <cmath>
#include <string>

#include "funmean/error.hpp"

namespace funmean {

namespace {

Matrix checked_spd(const Matrix& m) {
  if (!m.square() || m.rows() == 0) throw InvalidArgument("SpdMatrix: need a non-empty square matrix");
  for (double x : m.data())
    if (!std::isfinite(x)) throw InvalidArgument("SpdMatrix: non-finite entry");
  if (m.asymmetry() > 1e-12 * m.max_abs()) throw InvalidArgument("SpdMatrix: matrix is not symmetric");
  Matrix s = m.symmetrized();
  if (!(min_eigenvalue(s) > 0.0)) throw InvalidArgument("SpdMatrix: matrix is not positive definite");
  return s;
}

}  // namespace

SpdMatrix::SpdMatrix(const Matrix& m) : m_(checked_spd(m)) {}

double condition_number(const SpdMatrix& a) {
  const auto e = symmetric_eigen(a.matrix());
  return e.values.back() / e.values.front();
}

SpdMatrix spd_inverse(const SpdMatrix& a) {
  auto e = symmetric_eigen(a.matrix());
  const double cond = e.values.back() / e.values.front();
  if (!(cond <= kMaxCondition))
    throw ConditioningError("spd_inverse: condition number " + std::to_string(cond) + " exceeds 1e12");
  for (double& l : e.values) l = 1.0 / l;
  return SpdMatrix(from_eigen(e.vectors, e.values));
}

SpdMatrix spd_power(const SpdMatrix& a, double p) {
  auto e = symmetric_eigen(a.matrix());
  for (double& l : e.values) l = std::pow(l, p);
  return SpdMatrix(from_eigen(e.vectors, e.values));
}

double eval_quadratic(const QuadraticFn& q, std::span<const double> x) {
  if (x.size() != q.matrix.dim()) throw InvalidArgument("eval_quadratic: dimension mismatch");
  return 0.5 * dot(x, q.matrix.matrix() * x);
}

}  // namespace funmean
