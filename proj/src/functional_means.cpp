#include "funmean/functional_means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "funmean/error.hpp"

namespace funmean {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_parameter(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
}

GridFn on_grid(const GridFn& f, const GridSpec& grid) {
  if (f.grid() == grid) return f;
  return GridFn(grid, resample(f, grid));
}

GridFn finish(const GridSpec& grid, std::vector<double> values, const char* what) {
  if (std::none_of(values.begin(), values.end(), [](double v) { return v < kInf; }))
    throw ImproperFunction(std::string(what) + ": result has empty domain (operand domains do not meet)");
  return GridFn(grid, std::move(values));
}

void check_rule(const QuadRule& rule, MeasureKind kind, const char* what) {
  if (rule.measure != kind || rule.size() == 0)
    throw InvalidArgument(std::string(what) + ": quadrature rule is for a different measure");
}

}  // namespace

GridSpec common_grid(const GridFn& f, const GridFn& g) {
  if (f.grid() == g.grid()) return f.grid();
  const double lo = std::min(f.lo(), g.lo());
  const double hi = std::max(f.hi(), g.hi());
  const double step = std::min(f.step(), g.step());
  const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  return GridSpec{lo, hi, intervals + 1};
}

HarmonicPencil::HarmonicPencil(const GridFn& f, const GridFn& g) : HarmonicPencil(f, g, common_grid(f, g)) {}

HarmonicPencil::HarmonicPencil(const GridFn& f, const GridFn& g, GridSpec out)
    : out_(out),
      f_conj_(legendre(ConvexPL::from_grid(f))),
      g_conj_(legendre(ConvexPL::from_grid(g))),
      f_out_(resample(f, out)),
      g_out_(resample(g, out)) {}

ConvexPL HarmonicPencil::exact(double t) const {
  if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("HarmonicPencil::exact: need 0 < t < 1");
  const WeightedPL terms[] = {{1.0 - t, &f_conj_}, {t, &g_conj_}};
  return legendre(weighted_sum(terms));
}

std::vector<double> HarmonicPencil::at(double t) const {
  check_parameter(t, "harmonic parameter");
  if (t == 0.0) return f_out_;
  if (t == 1.0) return g_out_;
  return exact(t).sample(out_);
}

void HarmonicPencil::accumulate(double t, double w, std::vector<double>& acc) const {
  const auto v = at(t);
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = (v[i] == kInf || acc[i] == kInf) ? kInf : acc[i] + w * v[i];
}

GridFn arith(const GridFn& f, const GridFn& g, double lambda) {
  check_parameter(lambda, "lambda");
  const GridSpec out = common_grid(f, g);
  if (lambda == 0.0) return on_grid(f, out);
  if (lambda == 1.0) return on_grid(g, out);
  const auto fv = resample(f, out);
  const auto gv = resample(g, out);
  std::vector<double> v(out.n);
  for (std::size_t i = 0; i < out.n; ++i)
    v[i] = (fv[i] == kInf || gv[i] == kInf) ? kInf : (1.0 - lambda) * fv[i] + lambda * gv[i];
  return finish(out, std::move(v), "arith");
}

GridFn harmonic(const GridFn& f, const GridFn& g, double lambda) {
  check_parameter(lambda, "lambda");
  const GridSpec out = common_grid(f, g);
  if (lambda == 0.0) return on_grid(f, out);
  if (lambda == 1.0) return on_grid(g, out);
  return finish(out, HarmonicPencil(f, g, out).at(lambda), "harmonic");
}

GridFn geometric(const GridFn& f, const GridFn& g, double lambda, const QuadRule& rule) {
  check_parameter(lambda, "lambda");
  const GridSpec out = common_grid(f, g);
  if (lambda == 0.0) return on_grid(f, out);
  if (lambda == 1.0) return on_grid(g, out);
  check_rule(rule, MeasureKind::Nu, "geometric");
  if (rule.lambda != lambda) throw InvalidArgument("geometric: rule was built for another lambda");
  const HarmonicPencil pencil(f, g, out);
  std::vector<double> acc(out.n, 0.0);
  for (std::size_t k = 0; k < rule.size(); ++k) pencil.accumulate(rule.nodes[k], rule.weights[k], acc);
  return finish(out, std::move(acc), "geometric");
}

GridFn geometric(const GridFn& f, const GridFn& g, double lambda) {
  if (lambda == 0.0 || lambda == 1.0) return arith(f, g, lambda);
  check_parameter(lambda, "lambda");
  return geometric(f, g, lambda, *cached_nu(lambda, quadrature_defaults().nu));
}

GridFn log_mean_geo(const GridFn& f, const GridFn& g, const QuadRule& lebesgue, std::size_t nu_nodes) {
  check_rule(lebesgue, MeasureKind::Lebesgue, "log_mean_geo");
  const GridSpec out = common_grid(f, g);
  const HarmonicPencil pencil(f, g, out);
  std::vector<double> acc(out.n, 0.0);
  for (std::size_t j = 0; j < lebesgue.size(); ++j) {
    const auto nu = cached_nu(lebesgue.nodes[j], nu_nodes);
    for (std::size_t k = 0; k < nu->size(); ++k)
      pencil.accumulate(nu->nodes[k], lebesgue.weights[j] * nu->weights[k], acc);
  }
  return finish(out, std::move(acc), "log_mean_geo");
}

GridFn log_mean_geo(const GridFn& f, const GridFn& g) {
  const auto d = quadrature_defaults();
  return log_mean_geo(f, g, *cached_legendre(d.lebesgue), d.nu);
}

GridFn log_mean_harm(const GridFn& f, const GridFn& g, const QuadRule& mu) {
  check_rule(mu, MeasureKind::Mu, "log_mean_harm");
  const GridSpec out = common_grid(f, g);
  const HarmonicPencil pencil(f, g, out);
  std::vector<double> acc(out.n, 0.0);
  for (std::size_t k = 0; k < mu.size(); ++k) pencil.accumulate(mu.nodes[k], mu.weights[k], acc);
  return finish(out, std::move(acc), "log_mean_harm");
}

GridFn log_mean_harm(const GridFn& f, const GridFn& g) {
  return log_mean_harm(f, g, *cached_mu(quadrature_defaults().mu));
}

GridFn family_G(const GridFn& f, const GridFn& g, double lambda, double s, const QuadRule& rule) {
  check_parameter(s, "s");
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("family_G: need 0 < lambda < 1");
  if (s == 0.0) return harmonic(f, g, lambda);
  if (s == 1.0) return geometric(f, g, lambda, rule);
  check_rule(rule, MeasureKind::Nu, "family_G");
  if (rule.lambda != lambda) throw InvalidArgument("family_G: rule was built for another lambda");
  const GridSpec out = common_grid(f, g);
  const HarmonicPencil pencil(f, g, out);
  std::vector<double> acc(out.n, 0.0);
  for (std::size_t k = 0; k < rule.size(); ++k)
    pencil.accumulate(s * rule.nodes[k] + (1.0 - s) * lambda, rule.weights[k], acc);
  return finish(out, std::move(acc), "family_G");
}

GridFn family_G(const GridFn& f, const GridFn& g, double lambda, double s) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("family_G: need 0 < lambda < 1");
  return family_G(f, g, lambda, s, *cached_nu(lambda, quadrature_defaults().nu));
}

GridFn family_U(const GridFn& f, const GridFn& g, double s, const QuadRule& mu) {
  check_parameter(s, "s");
  if (s == 0.0) return harmonic(f, g, 0.5);
  if (s == 1.0) return log_mean_harm(f, g, mu);
  check_rule(mu, MeasureKind::Mu, "family_U");
  const GridSpec out = common_grid(f, g);
  const HarmonicPencil pencil(f, g, out);
  std::vector<double> acc(out.n, 0.0);
  for (std::size_t k = 0; k < mu.size(); ++k) pencil.accumulate(s * mu.nodes[k] + 0.5 * (1.0 - s), mu.weights[k], acc);
  return finish(out, std::move(acc), "family_U");
}

GridFn family_U(const GridFn& f, const GridFn& g, double s) {
  return family_U(f, g, s, *cached_mu(quadrature_defaults().mu));
}

ExtReal diamond(const GridFn& f, const GridFn& g, double x) {
  const auto sub = ConvexPL::from_grid(f).subdifferential(x);
  if (!sub) return ExtReal::neg_inf();
  const ConvexPL gc = legendre(ConvexPL::from_grid(g));
  const auto slopes = gc.slopes();
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  // s x - g*(s) grows without bound along an unbounded slope interval exactly
  // when x lies outside dom g on that side.
  if (sub->lo_slope.is_neg_inf() && x < slopes.front() - tol) return ExtReal::inf();
  if (sub->hi_slope.is_pos_inf() && x > slopes.back() + tol) return ExtReal::inf();
  double best = -kInf;
  auto consider = [&](double s) { best = std::max(best, s * x - gc(s).value()); };
  if (sub->lo_slope.is_finite()) consider(sub->lo_slope.value());
  if (sub->hi_slope.is_finite()) consider(sub->hi_slope.value());
  for (double k : gc.knots())
    if (sub->contains(k)) consider(k);
  if (best == -kInf) consider(gc.knots().front());
  return ExtReal(best);
}

}  // namespace funmean
