#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "funmean/fenchel.hpp"
#include "funmean/functional_means.hpp"
#include "funmean/operator_means.hpp"
#include "funmean/quadrature.hpp"
#include "suites.hpp"

namespace funmean::suites {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridSpec dual_union(const GridFn& f, const GridFn& g) {
  const GridSpec a = default_dual_grid(f), b = default_dual_grid(g);
  return GridSpec{std::min(a.lo, b.lo), std::max(a.hi, b.hi), std::max(a.n, b.n)};
}

// f plus a nonnegative convex bump, so f <= result nodewise.
GridFn raise(TrialContext& ctx, const GridFn& f) {
  const double c = ctx.uniform(f.lo(), f.hi()), w = ctx.uniform(0.0, 2.0);
  const double q = ctx.uniform(0.0, 1.0), shift = ctx.uniform(0.0, 0.5);
  std::vector<double> v(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = f.node(i);
    v[i] += w * std::max(0.0, x - c) + q * (x - c) * (x - c) + shift;
  }
  return GridFn(f.grid(), std::move(v));
}

void fenchel_inequality(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  (void)g;
  double worst = kInf;
  for (int k = 0; k < 50; ++k) {
    const double x = ctx.uniform(f.lo(), f.hi()), s = ctx.uniform(-10.0, 10.0);
    const ExtReal gap = fenchel_gap(f, x, s);
    if (gap.is_finite()) worst = std::min(worst, gap.value());
  }
  ctx.margin(worst);
  // Equality exactly on subgradient pairs.
  double eq = 0.0;
  for (std::size_t i = 0; i < f.size(); i += 8) {
    const auto sub = subdifferential(f, i);
    if (!sub) continue;
    const ExtReal gap = fenchel_gap(f, f.node(i), sub->pick());
    eq = std::max(eq, std::abs(gap.value()) / std::max(1.0, std::abs(f.values()[i])));
  }
  ctx.margin(-eq);

  const std::size_t d = ctx.dimension();
  const SpdMatrix a = gen_spd(ctx.rng(), d);
  std::vector<double> x(d), xs(d);
  for (double& v : x) v = ctx.uniform(-1.0, 1.0);
  for (double& v : xs) v = ctx.uniform(-1.0, 1.0);
  const QuadraticFn q{a};
  ctx.margin(fenchel_gap(q, x, xs));
  const std::vector<double> ax = a.matrix() * std::span<const double>(x);
  ctx.margin(-std::abs(fenchel_gap(q, x, ax)) / std::max(1.0, dot(ax, x)));
}

void scaling_identity(TrialContext& ctx) {
  const GridFn f = ctx.functions().first;
  for (double alpha : {0.5, 2.0}) {
    const GridFn af = scalar_multiply(alpha, f);
    const GridSpec dual = default_dual_grid(af);
    const GridFn lhs = conjugate(af, dual);
    const GridFn rhs = epi_scale(conjugate(f, GridSpec{dual.lo / alpha, dual.hi / alpha, dual.n}), alpha);
    ctx.same(lhs, on_nodes_of(lhs, rhs));
  }
}

void infconv_identity(TrialContext& ctx) {
  auto [f, g] = ctx.functions(GenConfig{{-1.0, 1.0, 129}});
  const GridFn box = inf_conv_brute(f, g);
  const GridSpec dual = dual_union(f, g);
  const GridFn lhs = conjugate(box, dual);
  const GridFn cf = conjugate(f, dual), cg = conjugate(g, dual);
  std::vector<double> sum(dual.n);
  for (std::size_t i = 0; i < dual.n; ++i) sum[i] = cf.values()[i] + cg.values()[i];
  ctx.same(lhs, GridFn(dual, std::move(sum)));
}

// The PL conjugate of a sampled parabola a x^2 / 2 is below s^2 / (2a) by at
// most a h^2 / 8; the grid keeps that under 1e-6 for a <= 10.
void parabola_conjugate(TrialContext& ctx) {
  const GridSpec grid{-1.0, 1.0, 4097};
  const double a = std::exp(ctx.uniform(std::log(0.1), std::log(10.0)));
  const GridFn f = GridFn::sample(grid, [a](double x) { return 0.5 * a * x * x; });
  const GridSpec dual{-0.9 * a, 0.9 * a, 513};
  const GridFn c = conjugate(f, dual);
  double worst = 0.0;
  for (std::size_t i = 0; i < dual.n; ++i) {
    const double s = dual.node(i);
    worst = std::max(worst, std::abs(c.values()[i] - s * s / (2.0 * a)));
  }
  ctx.margin(-worst);
  ctx.margin(-std::abs(conjugate_at(f, 0.5 * a).value() - a / 8.0));

  const std::size_t d = ctx.dimension();
  const SpdMatrix m = gen_spd(ctx.rng(), d);
  const QuadraticFn inv = conjugate_quadratic(QuadraticFn{m});
  ctx.margin(-(m.matrix() * inv.matrix.matrix() - Matrix::identity(d)).max_abs());
}

void biconjugate_fixed_point(TrialContext& ctx) {
  const GridFn f = ctx.functions().first;
  const GridFn ff = biconjugate(f);
  ctx.same(ff, f, true);
  ctx.leq(ff, f);
}

void order_reversal(TrialContext& ctx) {
  const GridFn f = ctx.functions().first;
  const GridFn g = raise(ctx, f);
  const GridSpec dual = dual_union(f, g);
  ctx.leq(conjugate(g, dual), conjugate(f, dual));
}

void duality_map_convexity(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const GridSpec dual = dual_union(f, g);
  const GridFn cf = conjugate(f, dual), cg = conjugate(g, dual);
  for (double t : {0.25, 0.5, 0.75}) {
    const GridFn lhs = conjugate(arith(f, g, t), dual);
    ctx.leq(lhs, arith(cf, cg, t));
  }
}

void infconv_routes(TrialContext& ctx) {
  auto [f, g] = ctx.functions(GenConfig{{-1.0, 1.0, 257}});
  const GridFn brute = inf_conv_brute(f, g);
  const GridFn dual = inf_conv_dual(f, g);
  ctx.same(dual, brute, true);
}

}  // namespace

GridFn on_nodes_of(const GridFn& x, const GridFn& y) {
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const ExtReal e = eval(y, x.node(i));
    v[i] = e.is_finite() ? e.value() : kInf;
  }
  return GridFn(x.grid(), std::move(v));
}

std::vector<SuiteInfo> duality() {
  return {
      {"fenchel-105", {"105"}, SuiteFamily::Duality,
       "Fenchel gap >= 0 at random pairs and = 0 on subgradient pairs (grid and quadratic)", 1e-10, 100,
       fenchel_inequality},
      {"scaling-110", {"110"}, SuiteFamily::Duality, "conjugate(a.f) = epi_scale(conjugate(f), a), a in {0.5, 2}",
       1e-6, 100, scaling_identity},
      {"infconv-115", {"115"}, SuiteFamily::Duality, "conjugate(f box g) = f* + g* on a shared dual grid", 1e-6, 50,
       infconv_identity},
      {"conjugate-inv", {"inv", "prEl-iv"}, SuiteFamily::Duality,
       "conjugate of a sampled parabola vs s^2/(2a); conjugate_quadratic inverts", 1e-6, 100, parabola_conjugate},
      {"biconjugate", {"biconj"}, SuiteFamily::Duality, "f** = f and f** <= f for convex grid functions", 1e-8, 100,
       biconjugate_fixed_point},
      {"conjugate-order", {"order"}, SuiteFamily::Duality, "f <= g implies g* <= f*", 1e-10, 100, order_reversal},
      {"duality-pc", {"pc"}, SuiteFamily::Duality, "((1-t)f + t g)* <= (1-t) f* + t g*", 1e-10, 100,
       duality_map_convexity},
      {"infconv-routes", {"120"}, SuiteFamily::Duality, "inf_conv_dual agrees with inf_conv_brute", 1e-5, 50,
       infconv_routes},
  };
}

std::vector<SuiteInfo> quadrature() {
  auto nu_moments = [](TrialContext& ctx) {
    std::vector<double> lambdas;
    for (int k = 1; k <= 9; ++k) lambdas.push_back(0.1 * k);
    lambdas.push_back(ctx.uniform(0.02, 0.98));
    for (double l : lambdas) {
      const auto rule = cached_nu(l, quadrature_defaults().nu);
      ctx.margin(-std::abs(rule->total_mass() - 1.0));
      ctx.margin(-std::abs(rule->integrate([](double t) { return t; }) - l));
      // int t^k dnu = sin(pi l)/pi B(k + l, 1 - l) = prod_{j<k} (j + l) / (j + 1)
      for (int k = 2; k <= 4; ++k) {
        const double closed = std::sin(std::numbers::pi * l) / std::numbers::pi *
                              std::exp(std::lgamma(k + l) + std::lgamma(1.0 - l) - std::lgamma(k + 1.0));
        ctx.margin(-std::abs(rule->integrate([k](double t) { return std::pow(t, k); }) - closed));
      }
    }
  };
  auto mu_measure = [](TrialContext& ctx) {
    const auto rule = cached_mu(quadrature_defaults().mu);
    ctx.margin(-std::abs(rule->total_mass() - 1.0));
    ctx.margin(-std::abs(rule->integrate([](double t) { return t; }) - 0.5));
    // Scalar form of the mu representation of the logarithmic mean.
    const double a = std::exp(ctx.uniform(-2.0, 2.0)), b = std::exp(ctx.uniform(-2.0, 2.0));
    const double l = rule->integrate([a, b](double t) { return 1.0 / ((1.0 - t) / a + t / b); });
    ctx.margin(-std::abs(l - scalar_log_mean(a, b)) / scalar_log_mean(a, b));
    // Doubling the node count leaves a smooth integral unchanged.
    const auto fine = cached_mu(2 * quadrature_defaults().mu);
    const double c = ctx.uniform(0.0, 5.0);
    auto h = [c](double t) { return 1.0 / (1.0 + c * t); };
    ctx.margin(-std::abs(rule->integrate(h) - fine->integrate(h)) * 10.0);
  };
  auto density = [](TrialContext& ctx) {
    for (int k = 0; k < 20; ++k) {
      const double t = ctx.uniform(1e-6, 1.0 - 1e-6);
      const double p = psi_density(t);
      ctx.margin(-std::abs(p - psi_density(1.0 - t)) / p);
      ctx.margin(-std::abs(omega(t) + omega(1.0 - t) - p) / p);
    }
  };
  auto phi_closed = [](TrialContext& ctx) {
    for (double x : {0.1, 1.0, 5.0, 50.0, std::exp(ctx.uniform(std::log(0.01), std::log(100.0)))})
      ctx.margin(-std::abs(phi_quad(x) - phi(x)));
  };
  auto integrals = [](TrialContext& ctx) {
    for (const IntegralCheck& c : check_mu_identities())
      if (c.name != "u_form") ctx.margin(-std::abs(c.computed - c.expected));
  };
  auto refinement = [](TrialContext& ctx) {
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9, ctx.uniform(0.02, 0.98)}) {
      const Estimate e = refinement_integral(s);
      ctx.margin(std::min(e.value - 0.25, 0.5 - e.value));
      ctx.margin(-e.error);
    }
    const Estimate big = refinement_constant();
    ctx.margin(std::min(big.value - 1.0, 2.0 - big.value));
  };
  return {
      {"nu-425", {"425"}, SuiteFamily::Quadrature, "nu_lambda mass, mean lambda and moments k <= 4", 1e-10, 20,
       nu_moments},
      {"mu-535", {"535", "530"}, SuiteFamily::Quadrature,
       "mu mass 1, mean 1/2, scalar log mean, node doubling", 1e-10, 20, mu_measure},
      {"psi-550", {"550"}, SuiteFamily::Quadrature, "Psi symmetric and Psi(t) = omega(t) + omega(1-t)", 1e-12, 20,
       density},
      {"phi-525", {"525"}, SuiteFamily::Quadrature, "phi closed form vs Gauss-Legendre", 1e-10, 20, phi_closed},
      {"integrals-547", {"547"}, SuiteFamily::Quadrature,
       "split and tan/cot forms of the mu identities (the printed u form is reported by quadcheck only)", 1e-8, 1,
       integrals},
      {"refinement-Is", {"Is", "corRR-I"}, SuiteFamily::Quadrature, "I_s in [1/4, 1/2] and I = 4 I_{1/2} in [1, 2]",
       1e-8, 3, refinement},
  };
}

}  // namespace funmean::suites
