#include "funmean/fenchel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "funmean/error.hpp"

namespace funmean {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SlopeRange {
  double lo;
  double hi;
  bool any;
};

SlopeRange finite_slopes(const ConvexPL& p) {
  SlopeRange r{kInf, -kInf, false};
  for (double s : p.slopes())
    if (std::isfinite(s)) {
      r.lo = std::min(r.lo, s);
      r.hi = std::max(r.hi, s);
      r.any = true;
    }
  return r;
}

}  // namespace

GridSpec default_dual_grid(const GridFn& f, std::size_t n) {
  const SlopeRange r = finite_slopes(ConvexPL::from_grid(f));
  const std::size_t nodes = n == 0 ? f.size() : n;
  if (!r.any) return GridSpec{-1.0, 1.0, nodes};
  const double width = r.hi - r.lo;
  const double pad = width > 0.0 ? 0.1 * width : 1.0;
  return GridSpec{r.lo - pad, r.hi + pad, nodes};
}

GridFn conjugate(const GridFn& f, std::optional<GridSpec> dual_grid) {
  const GridSpec grid = dual_grid ? *dual_grid : default_dual_grid(f);
  grid.validate();
  return GridFn(grid, legendre(ConvexPL::from_grid(f)).sample(grid));
}

ExtReal conjugate_at(const GridFn& f, double s) {
  const auto v = f.values();
  double best = -kInf;
  for (std::size_t i = f.dom_first(); i <= f.dom_last(); ++i) best = std::max(best, s * f.node(i) - v[i]);
  return ExtReal(best);
}

QuadraticFn conjugate_quadratic(const QuadraticFn& q) { return QuadraticFn{spd_inverse(q.matrix)}; }

GridFn biconjugate(const GridFn& f) {
  const ConvexPL p = ConvexPL::from_grid(f);
  return GridFn(f.grid(), legendre(legendre(p)).sample(f.grid()));
}

GridSpec inf_conv_grid(const GridFn& f, const GridFn& g) {
  const double step = std::min(f.step(), g.step());
  const double lo = f.dom_lo() + g.dom_lo();
  const double hi = f.dom_hi() + g.dom_hi();
  if (hi - lo < 0.5 * step) return GridSpec{lo - step, lo + step, 3};
  const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  return GridSpec{lo, hi, intervals + 1};
}

GridFn inf_conv_brute(const GridFn& f, const GridFn& g, std::optional<GridSpec> out) {
  const GridSpec grid = out ? *out : inf_conv_grid(f, g);
  grid.validate();
  std::vector<double> values(grid.n, kInf);
  const auto fv = f.values();
  const auto gv = g.values();
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.node(i);
    double best = kInf;
    for (std::size_t j = f.dom_first(); j <= f.dom_last(); ++j) {
      const ExtReal gx = eval(g, x - f.node(j));
      if (gx.is_finite()) best = std::min(best, fv[j] + gx.value());
    }
    for (std::size_t j = g.dom_first(); j <= g.dom_last(); ++j) {
      const ExtReal fx = eval(f, x - g.node(j));
      if (fx.is_finite()) best = std::min(best, fx.value() + gv[j]);
    }
    values[i] = best;
  }
  return GridFn(grid, std::move(values));
}

GridFn inf_conv_dual(const GridFn& f, const GridFn& g, std::optional<GridSpec> dual_grid) {
  const GridSpec out = inf_conv_grid(f, g);
  const ConvexPL pf = ConvexPL::from_grid(f);
  const ConvexPL pg = ConvexPL::from_grid(g);
  const ConvexPL cf = legendre(pf);
  const ConvexPL cg = legendre(pg);
  if (!dual_grid) {
    const WeightedPL terms[] = {{1.0, &cf}, {1.0, &cg}};
    return GridFn(out, legendre(weighted_sum(terms)).sample(out));
  }
  dual_grid->validate();
  for (const ConvexPL* p : {&pf, &pg}) {
    const SlopeRange r = finite_slopes(*p);
    if (r.any && (r.lo < dual_grid->lo || r.hi > dual_grid->hi))
      throw ConfigurationError("inf_conv_dual: dual grid does not cover the slope range of the operands");
  }
  const auto sf = cf.sample(*dual_grid);
  const auto sg = cg.sample(*dual_grid);
  std::vector<double> sum(dual_grid->n);
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = sf[i] + sg[i];
  const GridFn conj_sum(*dual_grid, std::move(sum));
  return GridFn(out, legendre(ConvexPL::from_grid(conj_sum)).sample(out));
}

ExtReal fenchel_gap(const GridFn& f, double x, double x_star) {
  const ExtReal fx = eval(f, x);
  if (fx.is_pos_inf()) return fx;
  return ExtReal(fx.value() + conjugate_at(f, x_star).value() - x_star * x);
}

double fenchel_gap(const QuadraticFn& q, std::span<const double> x, std::span<const double> x_star) {
  const QuadraticFn conj = conjugate_quadratic(q);
  return eval_quadratic(q, x) + eval_quadratic(conj, x_star) - dot(x_star, x);
}

}  // namespace funmean
