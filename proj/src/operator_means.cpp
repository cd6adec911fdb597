#include "funmean/operator_means.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "funmean/error.hpp"
#include "funmean/functional_means.hpp"

namespace funmean {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("lambda must lie in [0, 1]");
}

void check_dims(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("operator mean: dimension mismatch");
}

// Spectral data of A used for congruences: A^{1/2} and A^{-1/2}.
struct Roots {
  Matrix half;
  Matrix inv_half;
};

Roots roots(const SpdMatrix& a) {
  const auto e = symmetric_eigen(a.matrix());
  const double cond = e.values.back() / e.values.front();
  if (!(cond <= kMaxCondition))
    throw ConditioningError("operator mean: condition number " + std::to_string(cond) + " exceeds 1e12");
  std::vector<double> s(e.values.size()), is(e.values.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = std::sqrt(e.values[k]);
    is[k] = 1.0 / s[k];
  }
  return {from_eigen(e.vectors, s), from_eigen(e.vectors, is)};
}

// A^{1/2} h(A^{-1/2} B A^{-1/2}) A^{1/2} with h applied to eigenvalues.
template <class H>
SpdMatrix congruence_mean(const SpdMatrix& a, const SpdMatrix& b, H h) {
  const Roots r = roots(a);
  const Matrix m = (r.inv_half * b.matrix() * r.inv_half).symmetrized();
  auto e = symmetric_eigen(m);
  for (double& l : e.values) l = h(l);
  return SpdMatrix((r.half * from_eigen(e.vectors, e.values) * r.half).symmetrized());
}

}  // namespace

SymmetricEigen sym_eig(const SpdMatrix& a) {
  auto e = symmetric_eigen(a.matrix());
  const Matrix aq = a.matrix() * e.vectors;
  Matrix ql = e.vectors;
  for (std::size_t i = 0; i < ql.rows(); ++i)
    for (std::size_t k = 0; k < ql.cols(); ++k) ql(i, k) *= e.values[k];
  if ((aq - ql).frobenius_norm() > 1e-10 * a.matrix().frobenius_norm())
    throw ConvergenceError("sym_eig: residual above 1e-10");
  return e;
}

SpdMatrix op_arith(const SpdMatrix& a, const SpdMatrix& b, double lambda) {
  check_dims(a, b);
  check_lambda(lambda);
  if (lambda == 0.0) return a;
  if (lambda == 1.0) return b;
  return SpdMatrix(a.matrix() * (1.0 - lambda) + b.matrix() * lambda);
}

SpdMatrix op_harm(const SpdMatrix& a, const SpdMatrix& b, double lambda) {
  check_dims(a, b);
  check_lambda(lambda);
  if (lambda == 0.0) return a;
  if (lambda == 1.0) return b;
  const Matrix mix = spd_inverse(a).matrix() * (1.0 - lambda) + spd_inverse(b).matrix() * lambda;
  return spd_inverse(SpdMatrix(mix));
}

SpdMatrix op_geom(const SpdMatrix& a, const SpdMatrix& b, double lambda) {
  check_dims(a, b);
  check_lambda(lambda);
  if (lambda == 0.0) return a;
  if (lambda == 1.0) return b;
  return congruence_mean(a, b, [lambda](double x) { return std::pow(x, lambda); });
}

SpdMatrix parallel_sum(const SpdMatrix& a, const SpdMatrix& b) {
  check_dims(a, b);
  return spd_inverse(SpdMatrix(spd_inverse(a).matrix() + spd_inverse(b).matrix()));
}

double log_mean_ratio(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("log_mean_ratio: need finite x > 0");
  const double y = x - 1.0;
  if (std::abs(y) < 1e-4) return 1.0 + y * (0.5 + y * (-1.0 / 12.0 + y * (1.0 / 24.0 - y * 19.0 / 720.0)));
  return y / std::log(x);
}

double scalar_log_mean(double a, double b) {
  if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw InvalidArgument("scalar_log_mean: need finite a, b > 0");
  if (a == b) return a;
  return std::min(a, b) * log_mean_ratio(std::max(a, b) / std::min(a, b));
}

SpdMatrix op_log_mean(const SpdMatrix& a, const SpdMatrix& b) {
  check_dims(a, b);
  return congruence_mean(a, b, log_mean_ratio);
}

SpdMatrix op_log_mean_geo(const SpdMatrix& a, const SpdMatrix& b, const QuadRule& lebesgue) {
  check_dims(a, b);
  if (lebesgue.measure != MeasureKind::Lebesgue) throw InvalidArgument("op_log_mean_geo: need a Lebesgue rule");
  Matrix acc(a.dim(), a.dim());
  for (std::size_t k = 0; k < lebesgue.size(); ++k)
    acc += op_geom(a, b, lebesgue.nodes[k]).matrix() * lebesgue.weights[k];
  return SpdMatrix(acc.symmetrized());
}

SpdMatrix op_log_mean_harm(const SpdMatrix& a, const SpdMatrix& b, const QuadRule& mu) {
  check_dims(a, b);
  if (mu.measure != MeasureKind::Mu) throw InvalidArgument("op_log_mean_harm: need the mu rule");
  Matrix acc(a.dim(), a.dim());
  for (std::size_t k = 0; k < mu.size(); ++k) acc += op_harm(a, b, mu.nodes[k]).matrix() * mu.weights[k];
  return SpdMatrix(acc.symmetrized());
}

SpdMatrix op_family_U(const SpdMatrix& a, const SpdMatrix& b, double s, const QuadRule& mu) {
  check_dims(a, b);
  check_lambda(s);
  if (s == 0.0) return op_harm(a, b, 0.5);
  if (mu.measure != MeasureKind::Mu) throw InvalidArgument("op_family_U: need the mu rule");
  Matrix acc(a.dim(), a.dim());
  for (std::size_t k = 0; k < mu.size(); ++k)
    acc += op_harm(a, b, s * mu.nodes[k] + 0.5 * (1.0 - s)).matrix() * mu.weights[k];
  return SpdMatrix(acc.symmetrized());
}

Matrix op_diamond(const SpdMatrix& a, const SpdMatrix& b) {
  check_dims(a, b);
  const Matrix& am = a.matrix();
  return (am * 2.0 - am * spd_inverse(b).matrix() * am).symmetrized();
}

double psd_margin(const Matrix& m) { return min_eigenvalue(m.symmetrized()); }

double scalar_mean(MeanKind kind, double a, double b, double lambda) {
  switch (kind) {
    case MeanKind::Arith:
      return (1.0 - lambda) * a + lambda * b;
    case MeanKind::Harmonic:
      return 1.0 / ((1.0 - lambda) / a + lambda / b);
    case MeanKind::Geometric:
      return std::pow(a, 1.0 - lambda) * std::pow(b, lambda);
    case MeanKind::Log:
      return scalar_log_mean(a, b);
  }
  throw InvalidArgument("scalar_mean: unknown kind");
}

double bridge_interior(double a, double b, double box) { return 0.9 * box * std::min(a, b) / std::max(a, b); }

BridgeReport bridge_check_1d(double a, double b, MeanKind kind, double lambda, GridSpec grid) {
  if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("bridge_check_1d: need a, b > 0");
  if (grid.lo != -grid.hi) throw InvalidArgument("bridge_check_1d: grid must be symmetric about 0");
  const GridFn f = GridFn::sample(grid, [a](double x) { return 0.5 * a * x * x; });
  const GridFn g = GridFn::sample(grid, [b](double x) { return 0.5 * b * x * x; });
  GridFn m = [&] {
    switch (kind) {
      case MeanKind::Arith:
        return arith(f, g, lambda);
      case MeanKind::Harmonic:
        return harmonic(f, g, lambda);
      case MeanKind::Geometric:
        return geometric(f, g, lambda);
      case MeanKind::Log:
        return log_mean_harm(f, g);
    }
    throw InvalidArgument("bridge_check_1d: unknown kind");
  }();
  BridgeReport r{scalar_mean(kind, a, b, lambda), 0.0, bridge_interior(a, b, grid.hi), 0};
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = m.node(i);
    if (std::abs(x) > r.interior) continue;
    r.max_error = std::max(r.max_error, std::abs(m.values()[i] - 0.5 * r.coefficient * x * x));
    ++r.nodes_compared;
  }
  return r;
}

VectorBridgeReport bridge_check_vectors(const Matrix& m1, const Matrix& m2, std::uint64_t seed, int samples) {
  if (m1.rows() != m2.rows() || !m1.square() || !m2.square())
    throw InvalidArgument("bridge_check_vectors: shape mismatch");
  const Matrix d = (m2 - m1).symmetrized();
  const auto e = symmetric_eigen(d);
  const std::size_t n = d.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto quad = [&](const std::vector<double>& x) { return 0.5 * dot(x, d * x); };
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = e.vectors(i, 0);
  double worst = quad(v);
  for (int k = 0; k < samples; ++k) {
    double nn = 0.0;
    for (double& x : v) {
      x = normal(rng);
      nn += x * x;
    }
    for (double& x : v) x /= std::sqrt(nn);
    worst = std::min(worst, quad(v));
  }
  const double tol = 1e-10 * std::max(1.0, std::max(m1.max_abs(), m2.max_abs()));
  const double margin = e.values.front();
  return {margin, worst, (margin >= -tol) == (worst >= -0.5 * tol)};
}

}  // namespace funmean
