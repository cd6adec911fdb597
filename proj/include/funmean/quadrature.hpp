#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace funmean {

enum class MeasureKind { Lebesgue, Nu, Mu };

/// Nodes in (0, 1), strictly increasing, positive weights.
struct QuadRule {
  MeasureKind measure = MeasureKind::Lebesgue;
  double lambda = 0.0;  // Nu only
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double total_mass() const;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * f(nodes[k]);
    return s;
  }
};

/// Eigenvalues and squared first eigenvector components of the symmetric
/// tridiagonal matrix with diagonal `diag` and off-diagonal `offdiag`
/// (offdiag[k] couples rows k and k + 1). Implicit QL with Wilkinson shifts;
/// results sorted by eigenvalue.
struct TridiagonalSpectrum {
  std::vector<double> values;
  std::vector<double> first_components_sq;
};
TridiagonalSpectrum tridiagonal_spectrum(std::vector<double> diag, std::vector<double> offdiag);

/// Gauss-Legendre on (0, 1), 1 <= n <= 512.
QuadRule gauss_legendre(std::size_t n);

/// Gauss rule for the probability measure
/// sin(pi lambda)/pi * t^(lambda-1) (1-t)^(-lambda) dt, 0 < lambda < 1.
QuadRule gauss_jacobi_nu(double lambda, std::size_t n);

/// Rule for the probability measure dt / (t (1-t) (pi^2 + log^2(t/(1-t)))).
/// t = sigmoid(pi tan(pi (v - 1/2))) carries it to the uniform measure in v,
/// so the rule is Gauss-Legendre in v. Nodes closer to 0 or 1 than 1e-15
/// (|logit t| > 35) are lumped into one node at 2^-53, resp. 1 - 2^-53, so
/// that every node is a distinct double inside (0, 1).
QuadRule mu_rule(std::size_t n);

/// Node counts used when a caller does not pass a rule. FUNMEAN_NODES=N in
/// the environment sets N for nu and mu and 2N for Lebesgue.
struct QuadratureDefaults {
  std::size_t nu = 64;
  std::size_t mu = 64;
  std::size_t lebesgue = 128;
};
QuadratureDefaults quadrature_defaults();

/// Shared read-only rules keyed by (measure, lambda, n).
std::shared_ptr<const QuadRule> cached_legendre(std::size_t n);
std::shared_ptr<const QuadRule> cached_nu(double lambda, std::size_t n);
std::shared_ptr<const QuadRule> cached_mu(std::size_t n);

/// (x + 1) pi / (pi^2 + log^2 x), the value of int_0^1 x^v sin(pi v) dv.
double phi(double x);
/// The same integral by n-point Gauss-Legendre.
double phi_quad(double x, std::size_t n = 64);

/// 1 / (t (1-t) (pi^2 + log^2(t/(1-t)))).
double psi_density(double t);
/// 1 / (t (pi^2 + log^2(t/(1-t)))).
double omega(double t);

struct Estimate {
  double value;
  double error;
};

/// s int_0^s omega + (1-s) int_0^{1-s} omega, lies in [1/4, 1/2].
Estimate refinement_integral(double s);

/// 4 times refinement_integral(1/2).
Estimate refinement_constant();

struct IntegralCheck {
  std::string name;
  std::string formula;
  double expected;
  double computed;
  double error_estimate;
  bool pass;
};

/// Closed-form identities for the density of mu and its tan / cot / u
/// substitutions, each compared against its stated value within `tolerance`.
std::vector<IntegralCheck> check_mu_identities(double tolerance = 1e-8);

}  // namespace funmean
