#include <algorithm>
#include <cmath>

#include "funmean/operator_means.hpp"
#include "funmean/quadrature.hpp"
#include "suites.hpp"

namespace funmean::suites {

namespace {

double pick(TrialContext& ctx, std::initializer_list<double> values) {
  const auto k = std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(ctx.rng());
  return values.begin()[k];
}

const QuadRule& mu64() {
  static const QuadRule rule = mu_rule(64);
  return rule;
}

void chain_460(TrialContext& ctx) {
  auto [a, b] = ctx.matrices(ctx.dimension());
  for (double l : {0.25, 0.5, 0.75}) {
    const Matrix h = op_harm(a, b, l).matrix(), g = op_geom(a, b, l).matrix(), m = op_arith(a, b, l).matrix();
    ctx.loewner(h, g);
    ctx.loewner(g, m);
  }
}

void chain_513(TrialContext& ctx) {
  auto [a, b] = ctx.matrices(ctx.dimension());
  const Matrix l = op_log_mean(a, b).matrix();
  ctx.loewner(op_harm(a, b, 0.5).matrix(), l);
  ctx.loewner(l, op_arith(a, b, 0.5).matrix());
}

void corollary_620(TrialContext& ctx) {
  auto [a, b] = ctx.matrices(ctx.dimension());
  const Matrix am = op_arith(a, b, 0.5).matrix();
  const Matrix aba = a.matrix() * spd_inverse(b).matrix() * a.matrix();
  const Matrix bab = b.matrix() * spd_inverse(a).matrix() * b.matrix();
  const Matrix upper = ((aba + bab) * 0.5 - am) * (1.0 / 6.0);
  const Matrix gap = am - op_log_mean(a, b).matrix();
  ctx.margin(psd_margin(gap));
  ctx.loewner(gap, upper);
  // 1x1 instance: a nabla b - L(a, b) <= (1/6)(a nabla b)(a - b)^2 / (ab).
  const double x = std::exp(ctx.uniform(-2.0, 2.0)), y = std::exp(ctx.uniform(-2.0, 2.0));
  const double mean = 0.5 * (x + y);
  const double lhs = mean - scalar_log_mean(x, y);
  ctx.margin(lhs);
  ctx.margin(mean * (x - y) * (x - y) / (6.0 * x * y) - lhs);
}

void inverse(TrialContext& ctx) {
  const std::size_t d = ctx.dimension();
  auto [a, p] = ctx.matrices(d);
  const SpdMatrix b(a.matrix() + p.matrix() * ctx.uniform(0.0, 1.0));
  ctx.loewner(spd_inverse(b).matrix(), spd_inverse(a).matrix());
  const double t = ctx.uniform(0.0, 1.0);
  const SpdMatrix c = gen_spd(ctx.rng(), d);
  const Matrix lhs = spd_inverse(op_arith(a, c, t)).matrix();
  const Matrix rhs = spd_inverse(a).matrix() * (1.0 - t) + spd_inverse(c).matrix() * t;
  ctx.loewner(lhs, rhs);
}

void diamond(TrialContext& ctx) {
  auto [a, b] = ctx.matrices(ctx.dimension());
  ctx.loewner(op_diamond(a, b), b.matrix());
}

void symmetry(TrialContext& ctx) {
  auto [a, b] = ctx.matrices(ctx.dimension());
  const double l = pick(ctx, {0.25, 0.5, 0.75});
  ctx.rel_close(op_arith(a, b, l).matrix(), op_arith(b, a, 1.0 - l).matrix());
  ctx.rel_close(op_harm(a, b, l).matrix(), op_harm(b, a, 1.0 - l).matrix());
  ctx.rel_close(op_geom(a, b, l).matrix(), op_geom(b, a, 1.0 - l).matrix());
  ctx.rel_close(op_log_mean(a, b).matrix(), op_log_mean(b, a).matrix());
}

// Diagonal inputs reduce to scalar means; general inputs match the
// congruence forms A^{1/2} m(I, C) A^{1/2}, C = A^{-1/2} B A^{-1/2}.
void definitions(TrialContext& ctx) {
  const std::size_t d = ctx.dimension();
  std::vector<double> da(d), db(d);
  for (double& x : da) x = std::exp(ctx.uniform(-2.0, 2.0));
  for (double& x : db) x = std::exp(ctx.uniform(-2.0, 2.0));
  const double l = ctx.uniform(0.05, 0.95);
  const SpdMatrix a(Matrix::diagonal(da)), b(Matrix::diagonal(db));
  auto diag_of = [&](MeanKind kind) {
    std::vector<double> v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = scalar_mean(kind, da[i], db[i], l);
    return Matrix::diagonal(v);
  };
  ctx.rel_close(op_harm(a, b, l).matrix(), diag_of(MeanKind::Harmonic));
  ctx.rel_close(op_geom(a, b, l).matrix(), diag_of(MeanKind::Geometric));
  ctx.rel_close(op_log_mean(a, b).matrix(), diag_of(MeanKind::Log));
  ctx.rel_close(op_arith(a, b, l).matrix(), diag_of(MeanKind::Arith));

  auto [x, y] = ctx.matrices(d);
  const SpdMatrix root = spd_power(x, 0.5), inv_root = spd_power(x, -0.5);
  const SpdMatrix c(inv_root.matrix() * y.matrix() * inv_root.matrix());
  const SymmetricEigen e = sym_eig(c);
  std::vector<double> hv(d);
  for (std::size_t i = 0; i < d; ++i) hv[i] = 1.0 / ((1.0 - l) + l / e.values[i]);
  ctx.rel_close(op_harm(x, y, l).matrix(), root.matrix() * from_eigen(e.vectors, hv) * root.matrix());
  ctx.rel_close(parallel_sum(x, y).matrix() * 2.0, op_harm(x, y, 0.5).matrix());
}

void log_519(TrialContext& ctx) {
  auto [a, b] = ctx.matrices(ctx.dimension());
  static const QuadRule leb = gauss_legendre(64);
  ctx.rel_close(op_log_mean_geo(a, b, leb).matrix(), op_log_mean(a, b).matrix());
}

void log_540(TrialContext& ctx) {
  auto [a, b] = ctx.matrices(ctx.dimension());
  ctx.rel_close(op_log_mean_harm(a, b, mu64()).matrix(), op_log_mean(a, b).matrix());
}

void refine_625(TrialContext& ctx) {
  auto [a, b] = ctx.matrices(ctx.dimension());
  const Matrix h = op_harm(a, b, 0.5).matrix(), l = op_log_mean_harm(a, b, mu64()).matrix();
  for (double s : {0.25, 0.5, 0.75}) {
    const Matrix u = op_family_U(a, b, s, mu64()).matrix();
    const Matrix mid = h * (1.0 - s) + l * s;
    ctx.loewner(h, u);
    ctx.loewner(u, mid);
    ctx.loewner(mid, l);
  }
  ctx.rel_close(op_family_U(a, a, ctx.uniform(0.0, 1.0), mu64()).matrix(), a.matrix());
}

void quadratic_order(TrialContext& ctx) {
  const std::size_t d = ctx.dimension();
  auto [a, b] = ctx.matrices(d);
  const auto seed = static_cast<std::uint64_t>(ctx.rng()());
  for (const auto& [lo, hi] : {std::pair{op_geom(a, b, 0.5).matrix(), op_arith(a, b, 0.5).matrix()},
                               std::pair{a.matrix(), b.matrix()}}) {
    const VectorBridgeReport r = bridge_check_vectors(lo, hi, seed);
    ctx.margin(r.consistent ? 0.0 : -1.0);
  }
  // Q_A + Q_B = Q_{A+B} and alpha Q_A = Q_{alpha A} at random points.
  std::vector<double> x(d);
  for (double& v : x) v = ctx.uniform(-1.0, 1.0);
  const double alpha = ctx.uniform(0.1, 10.0);
  const double qa = eval_quadratic(QuadraticFn{a}, x), qb = eval_quadratic(QuadraticFn{b}, x);
  const double qab = eval_quadratic(QuadraticFn{SpdMatrix(a.matrix() + b.matrix())}, x);
  const double qalpha = eval_quadratic(QuadraticFn{SpdMatrix(a.matrix() * alpha)}, x);
  ctx.margin(-std::abs(qa + qb - qab) / qab);
  ctx.margin(-std::abs(alpha * qa - qalpha) / qalpha);
}

void bridge_run(TrialContext& ctx, MeanKind kind) {
  const double a = std::exp(ctx.uniform(std::log(0.25), std::log(4.0)));
  const double b = std::exp(ctx.uniform(std::log(0.25), std::log(4.0)));
  const double l = pick(ctx, {0.25, 0.5, 0.75});
  const BridgeReport r = bridge_check_1d(a, b, kind, l, GridSpec{-2.0, 2.0, 513});
  ctx.margin(-r.max_error);
}

}  // namespace

std::vector<SuiteInfo> operators() {
  const auto O = SuiteFamily::Operator;
  return {
      {"operator-460", {"460"}, O, "A !_l B <= A #_l B <= A nabla_l B", 1e-10, 100, chain_460},
      {"operator-513", {"513"}, O, "A ! B <= L(A, B) <= A nabla B", 1e-10, 100, chain_513},
      {"operator-620", {"620"}, O, "0 <= A nabla B - L(A, B) <= (1/6)((AB^-1A) nabla (BA^-1B) - A nabla B)", 1e-10,
       100, corollary_620},
      {"operator-inverse", {"inv-monotone", "inv-convex"}, O, "A <= B gives B^-1 <= A^-1; inversion is convex",
       1e-10, 100, inverse},
      {"prdiamond", {"prdiamond", "prdiamond-iv"}, O, "B - (2A - AB^-1A) is PSD", 1e-10, 100, diamond},
      {"operator-symmetry", {"435", "L-symmetry"}, O, "m(A, B, l) = m(B, A, 1 - l); L(A, B) = L(B, A)", 1e-10, 100,
       symmetry},
      {"operator-455", {"455", "commuting"}, O, "diagonal inputs give scalar means; congruence forms agree", 1e-10, 100,
       definitions},
      {"operator-log-519", {"519", "510"}, O, "closed form L(A, B) vs int_0^1 A #_t B dt (64 nodes)", 1e-8, 100,
       log_519},
      {"operator-log-540", {"540"}, O, "closed form L(A, B) vs int_0^1 A !_t B dmu (64 nodes)", 1e-8, 100, log_540},
      {"operator-625", {"625", "622"}, O, "A ! B <= U_s(A, B) <= (A ! B) nabla_s L <= L; U_s(A, A) = A", 1e-10, 100,
       refine_625},
      {"prEl", {"prEl"}, O, "Loewner order agrees with the order of quadratic forms; Q is linear in A", 1e-10, 100,
       quadratic_order},
  };
}

std::vector<SuiteInfo> bridge() {
  const auto B = SuiteFamily::Bridge;
  return {
      {"bridge-450", {"450", "thF"}, B, "geometric mean of parabolas vs Q of the scalar mean", 1e-3, 50,
       [](TrialContext& ctx) { bridge_run(ctx, MeanKind::Geometric); }},
      {"bridge-harmonic", {"455-bridge"}, B, "harmonic mean of parabolas vs Q of the scalar mean", 1e-4, 50,
       [](TrialContext& ctx) { bridge_run(ctx, MeanKind::Harmonic); }},
      {"bridge-517", {"517"}, B, "logarithmic mean of parabolas vs Q of the scalar mean", 1e-3, 50,
       [](TrialContext& ctx) { bridge_run(ctx, MeanKind::Log); }},
  };
}

}  // namespace funmean::suites
