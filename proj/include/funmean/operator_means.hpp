#pragma once

#include <cstdint>
#include <vector>

#include "funmean/grid_fn.hpp"
#include "funmean/matrix.hpp"
#include "funmean/quadratic.hpp"
#include "funmean/quadrature.hpp"

namespace funmean {

/// A = Q diag(values) Q^T with eigenvalues ascending. Throws ConvergenceError
/// if the residual ||AQ - Q Lambda||_F exceeds 1e-10 ||A||_F.
SymmetricEigen sym_eig(const SpdMatrix& a);

SpdMatrix op_arith(const SpdMatrix& a, const SpdMatrix& b, double lambda);
SpdMatrix op_harm(const SpdMatrix& a, const SpdMatrix& b, double lambda);
/// A^{1/2} (A^{-1/2} B A^{-1/2})^lambda A^{1/2}.
SpdMatrix op_geom(const SpdMatrix& a, const SpdMatrix& b, double lambda);

/// (A^{-1} + B^{-1})^{-1}.
SpdMatrix parallel_sum(const SpdMatrix& a, const SpdMatrix& b);

/// (x - 1) / log x with the value 1 at x = 1 and a series for |x - 1| < 1e-4.
double log_mean_ratio(double x);

/// (a - b) / (log a - log b), equal to a when a = b.
double scalar_log_mean(double a, double b);

/// A^{1/2} F(A^{-1/2} B A^{-1/2}) A^{1/2} with F = log_mean_ratio.
SpdMatrix op_log_mean(const SpdMatrix& a, const SpdMatrix& b);

/// int_0^1 A #_t B dt with a Lebesgue rule.
SpdMatrix op_log_mean_geo(const SpdMatrix& a, const SpdMatrix& b, const QuadRule& lebesgue);
/// int_0^1 A !_t B dmu(t).
SpdMatrix op_log_mean_harm(const SpdMatrix& a, const SpdMatrix& b, const QuadRule& mu);

/// int_0^1 A !_{s t + (1-s)/2} B dmu(t).
SpdMatrix op_family_U(const SpdMatrix& a, const SpdMatrix& b, double s, const QuadRule& mu);

/// 2A - A B^{-1} A; symmetric, possibly indefinite.
Matrix op_diamond(const SpdMatrix& a, const SpdMatrix& b);

/// Smallest eigenvalue of the symmetric part; >= 0 means PSD.
double psd_margin(const Matrix& m);

enum class MeanKind { Arith, Harmonic, Geometric, Log };

/// Scalar mean of a, b > 0 (Log ignores lambda).
double scalar_mean(MeanKind kind, double a, double b, double lambda);

/// Functional pipeline on 1-D parabolas x -> a x^2 / 2 compared with
/// x -> m(a, b) x^2 / 2 over the interior region.
struct BridgeReport {
  double coefficient;  // m(a, b)
  double max_error;    // over interior nodes
  double interior;     // half-width of the compared region
  std::size_t nodes_compared;
};

/// Interior region of the parabola bridge on [-box, box]: |x| <= 0.9 box
/// min(a, b) / max(a, b). Beyond it the box truncation of the steeper operand
/// shows up in the mean.
double bridge_interior(double a, double b, double box);

BridgeReport bridge_check_1d(double a, double b, MeanKind kind, double lambda, GridSpec grid);

/// Operator inequality m1 <= m2 against the quadratic inequality on random
/// unit vectors: both must agree.
struct VectorBridgeReport {
  double eigen_margin;      // psd_margin(m2 - m1)
  double min_quad_margin;   // min over samples of Q_m2(x) - Q_m1(x)
  bool consistent;
};
VectorBridgeReport bridge_check_vectors(const Matrix& m1, const Matrix& m2, std::uint64_t seed,
                                        int samples = 100);

}  // namespace funmean
