#include "funmean/grid_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "funmean/error.hpp"

namespace funmean {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rounding-level slack for "already convex" in convexify; hull output only
// violates discrete convexity by a few ulps.
constexpr double kRoundingSlack = 64.0 * std::numeric_limits<double>::epsilon();

double max_abs_finite(std::span<const double> v) {
  double m = 0.0;
  for (double x : v)
    if (std::isfinite(x)) m = std::max(m, std::abs(x));
  return m;
}

double min_second_difference(std::span<const double> v, std::size_t first, std::size_t last) {
  double worst = kInf;
  for (std::size_t i = first + 1; i + 1 <= last; ++i)
    worst = std::min(worst, v[i - 1] - 2.0 * v[i] + v[i + 1]);
  return worst;
}

struct FiniteRange {
  std::size_t first;
  std::size_t last;
  bool contiguous;
};

FiniteRange finite_range(std::span<const double> v) {
  std::size_t first = v.size();
  std::size_t last = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::isnan(v[i])) throw InvalidArgument("GridFn: NaN value at node " + std::to_string(i));
    if (v[i] == -kInf) throw ImproperFunction("GridFn: -inf value at node " + std::to_string(i));
    if (std::isfinite(v[i])) {
      first = std::min(first, i);
      last = i;
      ++count;
    }
  }
  if (count == 0) throw ImproperFunction("GridFn: no finite value (empty domain)");
  return {first, last, count == last - first + 1};
}

// Lower hull of points sorted by x (Andrew's monotone chain); keeps only
// strict corners.
std::vector<SamplePoint> lower_hull(std::span<const SamplePoint> pts) {
  std::vector<SamplePoint> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.x - a.x) * (p.value - a.value) - (b.value - a.value) * (p.x - a.x);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  return hull;
}

std::vector<double> resample_hull(const GridSpec& grid, const std::vector<SamplePoint>& hull) {
  std::vector<double> out(grid.n, kInf);
  const double h = grid.step();
  const double tol = 1e-12 * std::max(1.0, std::max(std::abs(grid.lo), std::abs(grid.hi)));
  std::size_t seg = 0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.lo + static_cast<double>(i) * h;
    if (x < hull.front().x - tol || x > hull.back().x + tol) continue;
    while (seg + 1 < hull.size() && hull[seg + 1].x < x - tol) ++seg;
    if (std::abs(x - hull[seg].x) <= tol) {
      out[i] = hull[seg].value;
    } else if (seg + 1 < hull.size() && std::abs(x - hull[seg + 1].x) <= tol) {
      out[i] = hull[seg + 1].value;
    } else if (seg + 1 < hull.size()) {
      const auto& a = hull[seg];
      const auto& b = hull[seg + 1];
      out[i] = a.value + (b.value - a.value) * ((x - a.x) / (b.x - a.x));
    } else {
      out[i] = hull[seg].value;
    }
  }
  return out;
}

std::vector<SamplePoint> finite_points(const GridSpec& grid, std::span<const double> values) {
  std::vector<SamplePoint> pts;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::isfinite(values[i])) pts.push_back({grid.node(i), values[i]});
  return pts;
}

}  // namespace

double GridSpec::node(std::size_t i) const {
  if (i + 1 == n) return hi;
  return lo + static_cast<double>(i) * step();
}

void GridSpec::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw InvalidArgument("grid: need finite lo < hi");
  if (n < 2) throw InvalidArgument("grid: need at least 2 nodes");
}

double SlopeInterval::pick() const {
  if (lo_slope.is_finite() && hi_slope.is_finite()) return 0.5 * (lo_slope.value() + hi_slope.value());
  if (lo_slope.is_finite()) return lo_slope.value();
  if (hi_slope.is_finite()) return hi_slope.value();
  return 0.0;
}

GridFn::GridFn(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.n)
    throw InvalidArgument("GridFn: expected " + std::to_string(grid_.n) + " values, got " +
                          std::to_string(values_.size()));
  const FiniteRange r = finite_range(values_);
  if (!r.contiguous) throw NotConvex("GridFn: finite nodes are not contiguous (domain is not an interval)");
  first_ = r.first;
  last_ = r.last;
  const double scale = std::max(1.0, max_abs_finite(values_));
  const double worst = min_second_difference(values_, first_, last_);
  if (worst < -kConvexTolerance * scale)
    throw NotConvex("GridFn: second difference " + std::to_string(worst) + " below tolerance");
  if (worst < -kRoundingSlack * scale) {
    auto hull = lower_hull(finite_points(grid_, values_));
    values_ = resample_hull(grid_, hull);
  }
}

GridFn::GridFn(double lo, double hi, std::vector<double> values)
    : GridFn(GridSpec{lo, hi, values.size()}, std::vector<double>(values)) {}

GridFn GridFn::sample(GridSpec grid, const std::function<double(double)>& fn) {
  grid.validate();
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) v[i] = fn(grid.node(i));
  return GridFn(grid, std::move(v));
}

ExtReal eval(const GridFn& f, double x) {
  if (std::isnan(x)) throw InvalidArgument("eval: NaN abscissa");
  const GridSpec& g = f.grid();
  const double edge = 1e-12 * std::max(1.0, std::max(std::abs(g.lo), std::abs(g.hi)));
  if (x < g.lo - edge || x > g.hi + edge) return ExtReal::inf();
  const double pos = std::max(0.0, (x - g.lo) / g.step());
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i >= g.n - 1) return f.at(g.n - 1);
  const double t = pos - static_cast<double>(i);
  const auto v = f.values();
  if (t <= 1e-12) return f.at(i);
  if (t >= 1.0 - 1e-12) return f.at(i + 1);
  if (!std::isfinite(v[i]) || !std::isfinite(v[i + 1])) return ExtReal::inf();
  return ExtReal(v[i] + (v[i + 1] - v[i]) * t);
}

GridFn convexify(GridSpec grid, std::span<const double> values) {
  grid.validate();
  if (values.size() != grid.n) throw InvalidArgument("convexify: value count does not match grid");
  const FiniteRange r = finite_range(values);
  if (r.contiguous) {
    const double scale = std::max(1.0, max_abs_finite(values));
    if (min_second_difference(values, r.first, r.last) >= -kRoundingSlack * scale)
      return GridFn(grid, std::vector<double>(values.begin(), values.end()));
  }
  auto hull = lower_hull(finite_points(grid, values));
  return GridFn(grid, resample_hull(grid, hull));
}

GridFn convexify(GridSpec grid, std::span<const SamplePoint> points) {
  grid.validate();
  std::vector<SamplePoint> pts;
  for (const auto& p : points) {
    if (std::isnan(p.x) || std::isnan(p.value)) throw InvalidArgument("convexify: NaN sample");
    if (p.value == -kInf) throw ImproperFunction("convexify: -inf sample");
    if (std::isfinite(p.value) && std::isfinite(p.x)) pts.push_back(p);
  }
  if (pts.size() < 2) throw ImproperFunction("convexify: need at least 2 finite samples");
  std::sort(pts.begin(), pts.end(), [](const SamplePoint& a, const SamplePoint& b) {
    return a.x < b.x || (a.x == b.x && a.value < b.value);
  });
  // Keep the lowest value per abscissa.
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const SamplePoint& a, const SamplePoint& b) { return a.x == b.x; }),
            pts.end());
  auto hull = lower_hull(pts);
  auto values = resample_hull(grid, hull);
  if (std::none_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }))
    throw ImproperFunction("convexify: no grid node inside the sample range");
  return GridFn(grid, std::move(values));
}

GridFn scalar_multiply(double alpha, const GridFn& f) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("scalar_multiply: alpha must be > 0");
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x *= alpha;
  return GridFn(f.grid(), std::move(v));
}

GridFn epi_scale(const GridFn& f, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("epi_scale: alpha must be > 0");
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x *= alpha;
  return GridFn(GridSpec{alpha * f.lo(), alpha * f.hi(), f.size()}, std::move(v));
}

std::optional<SlopeInterval> subdifferential(const GridFn& f, std::size_t i) {
  if (i >= f.size() || !f.in_domain(i)) return std::nullopt;
  const auto v = f.values();
  const double h = f.step();
  ExtReal left = ExtReal::neg_inf();
  ExtReal right = ExtReal::inf();
  if (i > f.dom_first()) left = ExtReal((v[i] - v[i - 1]) / h);
  if (i < f.dom_last()) right = ExtReal((v[i + 1] - v[i]) / h);
  return SlopeInterval{left, right};
}

std::vector<double> weighted_values(std::span<const double> weights,
                                    std::span<const std::span<const double>> operands) {
  if (weights.size() != operands.size() || operands.empty())
    throw InvalidArgument("weighted_values: weights and operands differ in length");
  const std::size_t n = operands.front().size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < operands.size(); ++k) {
    if (operands[k].size() != n) throw InvalidArgument("weighted_values: operands on different grids");
    const double w = weights[k];
    for (std::size_t i = 0; i < n; ++i) {
      const double x = operands[k][i];
      out[i] = (x == kInf || out[i] == kInf) ? kInf : out[i] + w * x;
    }
  }
  return out;
}

std::vector<double> resample(const GridFn& f, const GridSpec& grid) {
  if (f.grid() == grid) return {f.values().begin(), f.values().end()};
  std::vector<double> out(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) out[i] = eval(f, grid.node(i)).value();
  return out;
}

}  // namespace funmean
