#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "funmean/fenchel.hpp"
#include "funmean/functional_means.hpp"
#include "funmean/quadrature.hpp"
#include "suites.hpp"

namespace funmean::suites {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const GenConfig kDefault{};
const double kSlack = grid_slack(kDefault.grid.step());

double pick(TrialContext& ctx, std::initializer_list<double> values) {
  const auto k = std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(ctx.rng());
  return values.begin()[k];
}

using Values = std::vector<double>;

// upper - lower nodewise, +inf where either side is infinite. Not convex in
// general, so kept as plain values.
Values gap(const GridFn& upper, const GridFn& lower) {
  Values v(upper.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = upper.values()[i], h = lower.values()[i];
    v[i] = (std::isinf(a) || std::isinf(h)) ? kInf : a - h;
  }
  return v;
}

Values scaled(double c, Values v) {
  for (double& x : v) x *= c;
  return v;
}

// Nodewise x <= y for plain value arrays on finite nodes; records one margin.
void leq_values(TrialContext& ctx, const Values& x, const Values& y) {
  double m = kInf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isinf(x[i]) || std::isinf(y[i])) {
      if (std::isinf(x[i]) != std::isinf(y[i])) ctx.skip(1);
      continue;
    }
    m = std::min(m, y[i] - x[i]);
  }
  ctx.margin(m);
}

Estimate cached_refinement(double s) {
  static std::mutex mutex;
  static std::map<double, Estimate> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(s);
  if (it == cache.end()) it = cache.emplace(s, refinement_integral(s)).first;
  return it->second;
}

void endpoints(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const GridFn r = gen_convex_gridfn(ctx.rng(), GenConfig{kDefault.grid, Shape::Restricted});
  for (const GridFn& other : {g, r}) {
    for (const GridFn& m : {arith(f, other, 0.0), harmonic(f, other, 0.0), geometric(f, other, 0.0)})
      ctx.same(m, f, true);
    for (const GridFn& m : {arith(other, f, 1.0), harmonic(other, f, 1.0), geometric(other, f, 1.0)})
      ctx.same(m, f, true);
  }
}

void symmetry(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const double l = pick(ctx, {0.25, 0.5, 0.75});
  ctx.same(arith(f, g, l), arith(g, f, 1.0 - l), true);
  ctx.same(harmonic(f, g, l), harmonic(g, f, 1.0 - l), true);
  ctx.same(geometric(f, g, l), geometric(g, f, 1.0 - l), true);
}

void chain_440(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  for (double l : {0.25, 0.5, 0.75}) {
    const GridFn h = harmonic(f, g, l), m = geometric(f, g, l), a = arith(f, g, l);
    ctx.leq(h, m);
    ctx.leq(m, a);
  }
}

void homogeneity(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const double l = pick(ctx, {0.25, 0.5, 0.75});
  using Mean = GridFn (*)(const GridFn&, const GridFn&, double);
  const Mean means[] = {arith, harmonic, [](const GridFn& x, const GridFn& y, double t) { return geometric(x, y, t); }};
  for (double alpha : {0.5, 2.0}) {
    for (Mean m : means) {
      const GridFn base = m(f, g, l);
      ctx.same(m(scalar_multiply(alpha, f), scalar_multiply(alpha, g), l), scalar_multiply(alpha, base), true);
      const GridFn lhs = m(epi_scale(f, alpha), epi_scale(g, alpha), l);
      ctx.same(lhs, on_nodes_of(lhs, epi_scale(base, alpha)), true);
    }
  }
}

void harmonic_infconv(TrialContext& ctx) {
  auto [f, g] = ctx.functions(GenConfig{{-1.0, 1.0, 257}});
  const double l = ctx.uniform(0.05, 0.95);
  const GridFn h = harmonic(f, g, l);
  const GridFn brute = inf_conv_brute(epi_scale(f, 1.0 - l), epi_scale(g, l), h.grid());
  ctx.same(h, brute);
}

// dom f cap dom g within dom(f #_l g) within (1-l) dom f + l dom g.
void domains(TrialContext& ctx) {
  const GenConfig cfg{kDefault.grid, Shape::Restricted};
  const GridFn f = gen_convex_gridfn(ctx.rng(), cfg), g = gen_convex_gridfn(ctx.rng(), cfg);
  const double l = ctx.uniform(0.1, 0.9), h = f.step();
  const double lo = (1.0 - l) * f.dom_lo() + l * g.dom_lo(), hi = (1.0 - l) * f.dom_hi() + l * g.dom_hi();
  for (const GridFn& m : {geometric(f, g, l), harmonic(f, g, l)}) {
    bool inner = true;
    double outer = kInf;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const bool finite = m.in_domain(i);
      if (f.in_domain(i) && g.in_domain(i) && !finite) inner = false;
      if (finite) outer = std::min({outer, m.node(i) - lo + h, hi - m.node(i) + h});
    }
    ctx.margin(inner ? 0.0 : -kInf);
    ctx.margin(outer);
  }
}

void chain_513(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const GridFn l = log_mean_harm(f, g);
  ctx.leq(harmonic(f, g, 0.5), l);
  ctx.leq(l, arith(f, g, 0.5));
}

// Both integral forms of L on a coarser grid; the dt form costs one
// geometric mean per Lebesgue node.
void log_forms(TrialContext& ctx) {
  auto [f, g] = ctx.functions(GenConfig{{-1.0, 1.0, 129}});
  ctx.same(log_mean_geo(f, g), log_mean_harm(f, g), true);
}

void refine_485(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const double l = pick(ctx, {0.25, 0.5, 0.75});
  const GridFn h = harmonic(f, g, l), m = geometric(f, g, l);
  for (double s : {0.25, 0.5, 0.75}) {
    const GridFn gs = family_G(f, g, l, s);
    const GridFn mid = arith(h, m, s);
    ctx.leq(h, gs);
    ctx.leq(gs, mid);
    ctx.leq(mid, m);
  }
  ctx.leq(m, arith(f, g, l));
}

void extremes_487(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const double l = pick(ctx, {0.25, 0.5, 0.75});
  const GridFn h = harmonic(f, g, l), m = geometric(f, g, l);
  ctx.same(family_G(f, g, l, 0.0), h, true);
  ctx.same(family_G(f, g, l, 1.0), m, true);
  ctx.same(family_G(f, g, l, 1e-7), h);
  ctx.same(family_G(f, g, l, 1.0 - 1e-7), m);
  ctx.leq(h, family_G(f, g, l, 0.5));
  ctx.leq(family_G(f, g, l, 0.5), m);
}

void lemma_610(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  for (int k = 0; k < 5; ++k) {
    const double t = ctx.uniform(0.02, 0.98), s = ctx.uniform(0.02, 0.98);
    const double r = std::min(t / s, (1.0 - t) / (1.0 - s)), big = std::max(t / s, (1.0 - t) / (1.0 - s));
    const Values dt = gap(arith(f, g, t), harmonic(f, g, t));
    const Values ds = gap(arith(f, g, s), harmonic(f, g, s));
    leq_values(ctx, scaled(r, ds), dt);
    leq_values(ctx, dt, scaled(big, ds));
  }
}

void theorem_612(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const Values lhs = gap(arith(f, g, 0.5), log_mean_harm(f, g));
  for (double s : {0.3, 0.5, 0.7}) {
    const double is = cached_refinement(s).value;
    const Values ds = gap(arith(f, g, s), harmonic(f, g, s));
    const double scale = 1.0 / (s * (1.0 - s));
    ctx.margin(0.5 - is);
    leq_values(ctx, scaled((0.5 - is) * scale, ds), lhs);
    leq_values(ctx, lhs, scaled(is * scale, ds));
  }
}

void corollary_rr(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const double big = 4.0 * cached_refinement(0.5).value;
  const GridFn a = arith(f, g, 0.5), h = harmonic(f, g, 0.5);
  std::vector<double> bound(a.size());
  for (std::size_t i = 0; i < bound.size(); ++i) {
    const double av = a.values()[i], hv = h.values()[i];
    bound[i] = (std::isinf(av) || std::isinf(hv)) ? kInf : (big - 1.0) * av + (2.0 - big) * hv;
  }
  const GridFn b(a.grid(), std::move(bound));
  ctx.leq(log_mean_harm(f, g), b);
  ctx.leq(b, a);
}

// f nabla g - L <= (1/6)(F_g(x, x*) + F_f(x, z*))/2 and, before integrating,
// f nabla_t g - f #_t g <= t(1-t)(F_g + F_f)/2 with x* in df(x), z* in dg(x).
void theorem_615(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  Values fenchel_mean(f.size(), kInf);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto sf = subdifferential(f, i), sg = subdifferential(g, i);
    if (!sf || !sg) continue;
    const double x = f.node(i), xs = sf->pick(), zs = sg->pick();
    const ExtReal fg = fenchel_gap(g, x, xs), ff = fenchel_gap(f, x, zs);
    if (fg.is_finite() && ff.is_finite()) fenchel_mean[i] = 0.5 * (fg.value() + ff.value());
  }
  leq_values(ctx, gap(arith(f, g, 0.5), log_mean_harm(f, g)), scaled(1.0 / 6.0, fenchel_mean));
  for (double t : {0.25, 0.5, 0.75})
    leq_values(ctx, gap(arith(f, g, t), geometric(f, g, t)), scaled(t * (1.0 - t), fenchel_mean));
}

void diamond_below(TrialContext& ctx) {
  auto [f, g] = ctx.functions(GenConfig{{-1.0, 1.0, 129}});
  double m = kInf;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!g.in_domain(i)) continue;
    const ExtReal v = diamond(f, g, f.node(i));
    if (v.is_neg_inf()) continue;
    m = std::min(m, g.values()[i] - v.value());
  }
  ctx.margin(m);
}

void family_u(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const double s = ctx.uniform(0.0, 1.0);
  ctx.same(family_U(f, f, s), f);
  ctx.same(family_U(f, g, 0.0), harmonic(f, g, 0.5), true);
  ctx.same(family_U(f, g, 1.0), log_mean_harm(f, g), true);
}

void refine_625(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const GridFn h = harmonic(f, g, 0.5), l = log_mean_harm(f, g);
  for (double s : {0.25, 0.5, 0.75}) {
    const GridFn us = family_U(f, g, s);
    const GridFn mid = arith(h, l, s);
    ctx.leq(h, us);
    ctx.leq(us, mid);
    ctx.leq(mid, l);
  }
}

void extremes_627(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const GridFn h = harmonic(f, g, 0.5), l = log_mean_harm(f, g);
  ctx.same(family_U(f, g, 1e-7), h);
  ctx.same(family_U(f, g, 1.0 - 1e-7), l);
  const GridFn mid = family_U(f, g, 0.5);
  ctx.leq(h, mid);
  ctx.leq(mid, l);
}

void operand_monotone(TrialContext& ctx) {
  auto [f1, g] = ctx.functions();
  const double c = ctx.uniform(-1.0, 1.0), w = ctx.uniform(0.0, 2.0), shift = ctx.uniform(0.0, 0.5);
  std::vector<double> v(f1.values().begin(), f1.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += w * std::max(0.0, f1.node(i) - c) + shift;
  const GridFn f2(f1.grid(), std::move(v));
  const double l = pick(ctx, {0.25, 0.5, 0.75});
  ctx.leq(harmonic(f1, g, l), harmonic(f2, g, l));
  ctx.leq(geometric(f1, g, l), geometric(f2, g, l));
  ctx.leq(harmonic(g, f1, l), harmonic(g, f2, l));
}

void harmonic_convex_in_t(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  for (int k = 0; k < 3; ++k) {
    double t1 = ctx.uniform(0.0, 1.0), t2 = ctx.uniform(0.0, 1.0);
    if (t1 > t2) std::swap(t1, t2);
    ctx.leq(harmonic(f, g, 0.5 * (t1 + t2)), arith(harmonic(f, g, t1), harmonic(f, g, t2), 0.5));
  }
}

void operand_concave(TrialContext& ctx) {
  auto [f1, g1] = ctx.functions();
  auto [f2, g2] = ctx.functions();
  const double l = pick(ctx, {0.25, 0.5, 0.75});
  const GridFn f = arith(f1, f2, 0.5), g = arith(g1, g2, 0.5);
  ctx.leq(arith(harmonic(f1, g1, l), harmonic(f2, g2, l), 0.5), harmonic(f, g, l));
  ctx.leq(arith(geometric(f1, g1, l), geometric(f2, g2, l), 0.5), geometric(f, g, l));
}

void family_g_shape(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  const double l = pick(ctx, {0.25, 0.5, 0.75});
  double s1 = ctx.uniform(0.0, 1.0), s2 = ctx.uniform(0.0, 1.0);
  if (s1 > s2) std::swap(s1, s2);
  const GridFn a = family_G(f, g, l, s1), b = family_G(f, g, l, s2);
  ctx.leq(a, b);
  ctx.leq(family_G(f, g, l, 0.5 * (s1 + s2)), arith(a, b, 0.5));
}

void family_u_shape(TrialContext& ctx) {
  auto [f, g] = ctx.functions();
  double s1 = ctx.uniform(0.0, 1.0), s2 = ctx.uniform(0.0, 1.0);
  if (s1 > s2) std::swap(s1, s2);
  const GridFn a = family_U(f, g, s1), b = family_U(f, g, s2);
  ctx.leq(a, b);
  ctx.leq(family_U(f, g, 0.5 * (s1 + s2)), arith(a, b, 0.5));
}

}  // namespace

std::vector<SuiteInfo> functional() {
  const auto F = SuiteFamily::Functional;
  return {
      {"endpoints-430", {"430"}, F, "lambda in {0, 1} returns the operand exactly, +inf nodes included", 0.0, 50,
       endpoints},
      {"symmetry-435", {"435"}, F, "m(f, g, l) = m(g, f, 1 - l) for arith, harmonic, geometric", 1e-8, 100, symmetry},
      {"chain-440", {"440"}, F, "f !_l g <= f #_l g <= f nabla_l g", kSlack, 200, chain_440},
      {"homogeneity-445", {"445"}, F, "means commute with a.f and f.a, a in {0.5, 2}", kSlack, 50, homogeneity},
      {"harmonic-infconv-472", {"472"}, F, "f !_l g = f.(1-l) box g.l by brute force", 1e-5, 50, harmonic_infconv},
      {"domain-475", {"475"}, F, "dom f cap dom g within dom(f #_l g) within (1-l) dom f + l dom g", 0.0, 100,
       domains},
      {"chain-513", {"513"}, F, "f ! g <= L(f, g) <= f nabla g", kSlack, 200, chain_513},
      {"log-forms-530", {"510", "530"}, F, "dt form of L equals the mu form (n = 129)", grid_slack(2.0 / 128), 5,
       log_forms},
      {"refine-485", {"485"}, F, "f !_l g <= G_s <= (f !_l g) nabla_s (f #_l g) <= f #_l g", kSlack, 200,
       refine_485},
      {"extremes-487", {"487"}, F, "G_0 = f !_l g, G_1 = f #_l g, limits s -> 0, 1", kSlack, 100, extremes_487},
      {"lemma-610", {"610"}, F, "r_{t,s} D_s <= D_t <= R_{t,s} D_s with D_t = f nabla_t g - f !_t g", kSlack, 200,
       lemma_610},
      {"thRR-612", {"612", "thRR"}, F, "(1/2 - I_s) D_s / (s(1-s)) <= f nabla g - L <= I_s D_s / (s(1-s))", kSlack,
       200, theorem_612},
      {"corRR", {"corRR"}, F, "L <= (I - 1) f nabla g + (2 - I) f ! g <= f nabla g", kSlack, 200, corollary_rr},
      {"thD-615", {"615", "613", "thD"}, F, "f nabla g - L <= (1/6) mean of Fenchel gaps at subgradients", kSlack, 200,
       theorem_615},
      {"diamond-614", {"614", "prdiamond-iv"}, F, "f diamond g <= g on dom g", kSlack, 50, diamond_below},
      {"family-U-622", {"622"}, F, "U_s(f, f) = f, U_0 = f ! g, U_1 = L", kSlack, 50, family_u},
      {"refine-625", {"625", "thU-ii"}, F, "f ! g <= U_s <= (f ! g) nabla_s L <= L", kSlack, 200, refine_625},
      {"extremes-627", {"627"}, F, "inf_s U_s = f ! g and sup_s U_s = L", kSlack, 100, extremes_627},
      {"prPM", {"prPM"}, F, "harmonic and geometric means increase with each operand", kSlack, 200, operand_monotone},
      {"prchm", {"prchm"}, F, "t -> f !_t g is convex", kSlack, 200, harmonic_convex_in_t},
      {"thPC", {"thPC"}, F, "harmonic and geometric means are jointly concave", kSlack, 200, operand_concave},
      {"thG", {"thG"}, F, "s -> G_s increasing and convex", kSlack, 200, family_g_shape},
      {"thU", {"thU"}, F, "s -> U_s increasing and convex", kSlack, 200, family_u_shape},
  };
}

}  // namespace funmean::suites
