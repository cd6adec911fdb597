#include "funmean/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <tuple>

#include "funmean/error.hpp"

namespace funmean {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxNodes = 512;
// Beyond |logit t| = 35, 1 - t is below 1e-15 and t no longer has distinct
// doubles near 1.
constexpr double kLogitCut = 35.0;
constexpr double kEdge = 0x1p-53;

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

// Gauss-Legendre on (0, 1), made exactly symmetric about 1/2.
QuadRule legendre_unit(std::size_t n) {
  std::vector<double> diag(n, 0.0), off(n > 0 ? n - 1 : 0);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    off[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  const auto spec = tridiagonal_spectrum(std::move(diag), std::move(off));
  QuadRule r;
  r.measure = MeasureKind::Lebesgue;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const std::size_t m = n - 1 - k;
    const double x = 0.5 * (spec.values[k] - spec.values[m]);  // < 0
    const double w = 0.5 * (spec.first_components_sq[k] + spec.first_components_sq[m]);
    r.nodes[k] = 0.5 * (1.0 + x);
    r.nodes[m] = 1.0 - r.nodes[k];
    r.weights[k] = w;
    r.weights[m] = w;
  }
  if (n % 2 == 1) {
    r.nodes[n / 2] = 0.5;
    r.weights[n / 2] = spec.first_components_sq[n / 2];
  }
  return r;
}

double legendre_on(double a, double b, std::size_t n, const auto& f) {
  const auto rule = cached_legendre(n);
  const double w = b - a;
  double s = 0.0;
  for (std::size_t k = 0; k < rule->size(); ++k) s += rule->weights[k] * f(a + w * rule->nodes[k]);
  return w * s;
}

// Gauss-Legendre with doubling until successive values agree to 1e-15.
Estimate converged(double a, double b, const auto& f) {
  std::size_t n = 32;
  double prev = legendre_on(a, b, n, f);
  double err = std::numeric_limits<double>::infinity();
  while (n < kMaxNodes) {
    n *= 2;
    const double next = legendre_on(a, b, n, f);
    err = std::abs(next - prev);
    prev = next;
    if (err <= 1e-15 * std::max(1.0, std::abs(next))) break;
  }
  return {prev, err};
}

}  // namespace

double QuadRule::total_mass() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

TridiagonalSpectrum tridiagonal_spectrum(std::vector<double> d, std::vector<double> off) {
  const std::size_t n = d.size();
  if (n == 0 || off.size() + 1 != n) throw InvalidArgument("tridiagonal_spectrum: size mismatch");
  std::vector<double> e(n, 0.0);
  std::copy(off.begin(), off.end(), e.begin());
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m)
        if (std::abs(e[m]) <= eps * (std::abs(d[m]) + std::abs(d[m + 1]))) break;
      if (m == l) break;
      if (++iter > 60) throw ConvergenceError("tridiagonal_spectrum: QL iteration did not converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  TridiagonalSpectrum out;
  out.values.reserve(n);
  out.first_components_sq.reserve(n);
  for (std::size_t k : order) {
    out.values.push_back(d[k]);
    out.first_components_sq.push_back(z[k] * z[k]);
  }
  return out;
}

QuadRule gauss_legendre(std::size_t n) {
  if (n < 1 || n > kMaxNodes) throw InvalidArgument("gauss_legendre: need 1 <= n <= 512");
  return legendre_unit(n);
}

QuadRule gauss_jacobi_nu(double lambda, std::size_t n) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("gauss_jacobi_nu: need 0 < lambda < 1");
  if (n < 1 || n > kMaxNodes) throw InvalidArgument("gauss_jacobi_nu: need 1 <= n <= 512");
  // Weight (1-x)^a (1+x)^b on (-1, 1) with t = (1 + x) / 2.
  const double a = -lambda;
  const double b = lambda - 1.0;
  const double ab = a + b;  // = -1
  std::vector<double> diag(n), off(n - 1);
  diag[0] = (b - a) / (ab + 2.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double t = 2.0 * kk + ab;
    diag[k] = (b * b - a * a) / (t * (t + 2.0));
    if (k == 1) {
      off[0] = std::sqrt(4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab)));
    } else {
      off[k - 1] = std::sqrt(4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (t * t * (t + 1.0) * (t - 1.0)));
    }
  }
  const auto spec = tridiagonal_spectrum(std::move(diag), std::move(off));
  QuadRule r;
  r.measure = MeasureKind::Nu;
  r.lambda = lambda;
  r.nodes.resize(n);
  r.weights = spec.first_components_sq;
  for (std::size_t k = 0; k < n; ++k) r.nodes[k] = 0.5 * (1.0 + spec.values[k]);
  return r;
}

QuadRule mu_rule(std::size_t n) {
  if (n < 1 || n > kMaxNodes) throw InvalidArgument("mu_rule: need 1 <= n <= 512");
  const QuadRule v = legendre_unit(n);
  QuadRule r;
  r.measure = MeasureKind::Mu;
  double lump_lo = 0.0, lump_hi = 0.0;
  std::vector<double> inner_nodes, inner_weights;
  for (std::size_t k = 0; k < n; ++k) {
    // u_k = -u_{n-1-k} exactly because the v nodes are mirrored.
    const std::size_t mirror = n - 1 - k;
    const double u = k <= mirror ? kPi * std::tan(kPi * (v.nodes[k] - 0.5))
                                 : -kPi * std::tan(kPi * (v.nodes[mirror] - 0.5));
    if (u < -kLogitCut) {
      lump_lo += v.weights[k];
    } else if (u > kLogitCut) {
      lump_hi += v.weights[k];
    } else {
      inner_nodes.push_back(k == mirror ? 0.5 : sigmoid(u));
      inner_weights.push_back(v.weights[k]);
    }
  }
  if (lump_lo > 0.0) {
    r.nodes.push_back(kEdge);
    r.weights.push_back(lump_lo);
  }
  r.nodes.insert(r.nodes.end(), inner_nodes.begin(), inner_nodes.end());
  r.weights.insert(r.weights.end(), inner_weights.begin(), inner_weights.end());
  if (lump_hi > 0.0) {
    r.nodes.push_back(1.0 - kEdge);
    r.weights.push_back(lump_hi);
  }
  return r;
}

QuadratureDefaults quadrature_defaults() {
  QuadratureDefaults d;
  if (const char* env = std::getenv("FUNMEAN_NODES")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > static_cast<long>(kMaxNodes / 2))
      throw ConfigurationError("FUNMEAN_NODES must be an integer in [1, 256]");
    d.nu = d.mu = static_cast<std::size_t>(v);
    d.lebesgue = 2 * d.nu;
  }
  return d;
}

namespace {

struct RuleCache {
  std::mutex mu;
  std::map<std::tuple<int, double, std::size_t>, std::shared_ptr<const QuadRule>> rules;

  template <class Make>
  std::shared_ptr<const QuadRule> get(MeasureKind kind, double lambda, std::size_t n, Make make) {
    const auto key = std::make_tuple(static_cast<int>(kind), lambda, n);
    {
      std::lock_guard lock(mu);
      if (auto it = rules.find(key); it != rules.end()) return it->second;
    }
    auto rule = std::make_shared<const QuadRule>(make());
    std::lock_guard lock(mu);
    return rules.emplace(key, std::move(rule)).first->second;
  }
};

RuleCache& cache() {
  static RuleCache c;
  return c;
}

}  // namespace

std::shared_ptr<const QuadRule> cached_legendre(std::size_t n) {
  return cache().get(MeasureKind::Lebesgue, 0.0, n, [n] { return gauss_legendre(n); });
}

std::shared_ptr<const QuadRule> cached_nu(double lambda, std::size_t n) {
  return cache().get(MeasureKind::Nu, lambda, n, [=] { return gauss_jacobi_nu(lambda, n); });
}

std::shared_ptr<const QuadRule> cached_mu(std::size_t n) {
  return cache().get(MeasureKind::Mu, 0.0, n, [n] { return mu_rule(n); });
}

double phi(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("phi: need finite x > 0");
  const double l = std::log(x);
  return (x + 1.0) * kPi / (kPi * kPi + l * l);
}

double phi_quad(double x, std::size_t n) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("phi_quad: need finite x > 0");
  const double l = std::log(x);
  return legendre_on(0.0, 1.0, n, [l](double v) { return std::exp(v * l) * std::sin(kPi * v); });
}

double psi_density(double t) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("psi_density: need 0 < t < 1");
  const double u = std::log(t / (1.0 - t));
  return 1.0 / (t * (1.0 - t) * (kPi * kPi + u * u));
}

double omega(double t) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("omega: need 0 < t < 1");
  const double u = std::log(t / (1.0 - t));
  return 1.0 / (t * (kPi * kPi + u * u));
}

namespace {

// int_0^s omega(t) dt. With t = sigmoid(u), u = pi tan(theta) the integrand
// becomes sigmoid(-pi tan theta) / pi on (-pi/2, atan(logit(s) / pi)).
Estimate omega_head(double s) {
  const double theta = std::atan(std::log(s / (1.0 - s)) / kPi);
  const auto e = converged(-kPi / 2.0, theta, [](double th) { return sigmoid(-kPi * std::tan(th)); });
  return {e.value / kPi, e.error / kPi};
}

}  // namespace

Estimate refinement_integral(double s) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("refinement_integral: need 0 < s < 1");
  const Estimate a = omega_head(s);
  const Estimate b = omega_head(1.0 - s);
  return {s * a.value + (1.0 - s) * b.value, s * a.error + (1.0 - s) * b.error};
}

Estimate refinement_constant() {
  const Estimate half = refinement_integral(0.5);
  return {4.0 * half.value, 4.0 * half.error};
}

std::vector<IntegralCheck> check_mu_identities(double tolerance) {
  const double lo = -kPi / 2.0, hi = kPi / 2.0;
  auto over_theta = [&](double scale, auto g) {
    const auto e = converged(lo, hi, g);
    return Estimate{scale * e.value, scale * e.error};
  };
  struct Item {
    const char* name;
    const char* formula;
    double expected;
    Estimate got;
  };
  // Each integral is written in theta with u = pi tan(theta); the comments give
  // the substitution from the original variable.
  const Item items[] = {
      // t = sigmoid(u): dt / t = sigmoid(-u) du
      {"t_split", "int_0^1 dt / (t (pi^2 + log^2(t/(1-t))))", 0.5,
       over_theta(1.0 / kPi, [](double th) { return sigmoid(-kPi * std::tan(th)); })},
      // t = sigmoid(u): dt / (1-t) = sigmoid(u) du
      {"one_minus_t_split", "int_0^1 dt / ((1-t) (pi^2 + log^2(t/(1-t))))", 0.5,
       over_theta(1.0 / kPi, [](double th) { return sigmoid(kPi * std::tan(th)); })},
      // tan z = e^w: tan z dz = sigmoid(2w) dw, then w = u / 2
      {"tan_form", "int_0^{pi/2} tan z dz / (pi^2 + 4 log^2(tan z))", 0.25,
       over_theta(0.5 / kPi, [](double th) { return sigmoid(kPi * std::tan(th)); })},
      // cot z = e^w: cot z dz = sigmoid(2w) dw (orientation reversed), w = u / 2
      {"cot_form", "int_0^{pi/2} cot z dz / (pi^2 + 4 log^2(cot z))", 0.25,
       over_theta(0.5 / kPi, [](double th) { return sigmoid(kPi * std::tan(th)); })},
      // x = e^w: x dx / (1 + x^2) = sigmoid(2w) dw, then w = u
      {"u_form", "int_0^inf x dx / ((1 + x^2) (pi^2 + log^2 x))", 0.25,
       over_theta(1.0 / kPi, [](double th) { return sigmoid(2.0 * kPi * std::tan(th)); })},
  };
  std::vector<IntegralCheck> out;
  for (const auto& it : items) {
    const bool pass = std::abs(it.got.value - it.expected) <= tolerance && it.got.error <= tolerance;
    out.push_back({it.name, it.formula, it.expected, it.got.value, it.got.error, pass});
  }
  return out;
}

}  // namespace funmean
