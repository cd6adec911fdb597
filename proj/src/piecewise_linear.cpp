#include "funmean/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "funmean/error.hpp"

namespace funmean {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKnotRelTol = 1e-13;

double scale_of(std::span<const double> xs) {
  double m = 1.0;
  for (double x : xs)
    if (std::isfinite(x)) m = std::max(m, std::abs(x));
  return m;
}

// Drops knots closer than tol to their left neighbour. The surviving knot
// keeps its value and left slope; it inherits the right slope of the dropped
// knot.
void merge_close_knots(std::vector<double>& knots, std::vector<double>& values,
                       std::vector<double>& slopes, double tol) {
  std::vector<double> k2, v2, s2;
  k2.reserve(knots.size());
  v2.reserve(knots.size());
  s2.reserve(slopes.size());
  s2.push_back(slopes[0]);
  for (std::size_t j = 0; j < knots.size(); ++j) {
    if (!k2.empty() && knots[j] - k2.back() <= tol) {
      s2.back() = slopes[j + 1];
      continue;
    }
    k2.push_back(knots[j]);
    v2.push_back(values[j]);
    s2.push_back(slopes[j + 1]);
  }
  knots = std::move(k2);
  values = std::move(v2);
  slopes = std::move(s2);
}

}  // namespace

ConvexPL::ConvexPL(std::vector<double> knots, std::vector<double> values, std::vector<double> slopes)
    : knots_(std::move(knots)), values_(std::move(values)), slopes_(std::move(slopes)) {
  const std::size_t m = knots_.size();
  if (m == 0 || values_.size() != m || slopes_.size() != m + 1)
    throw InvalidArgument("ConvexPL: need m >= 1 knots, m values and m + 1 slopes");
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::isfinite(knots_[j]) || !std::isfinite(values_[j]))
      throw InvalidArgument("ConvexPL: knots and values must be finite");
    if (j > 0 && !(knots_[j] > knots_[j - 1])) throw InvalidArgument("ConvexPL: knots must increase");
  }
  if (std::isnan(slopes_[0]) || slopes_[0] == kInf || std::isnan(slopes_[m]) || slopes_[m] == -kInf)
    throw InvalidArgument("ConvexPL: invalid tail slope");
  for (std::size_t j = 1; j < m; ++j)
    if (!std::isfinite(slopes_[j])) throw InvalidArgument("ConvexPL: interior slopes must be finite");
  const double sscale = scale_of(slopes_);
  for (std::size_t j = 1; j <= m; ++j)
    if (slopes_[j] < slopes_[j - 1] - 1e-9 * sscale) throw NotConvex("ConvexPL: slopes must not decrease");
}

ConvexPL ConvexPL::affine(double slope, double intercept) {
  return ConvexPL({0.0}, {intercept}, {slope, slope});
}

ConvexPL ConvexPL::from_grid(const GridFn& f) {
  std::vector<double> xs, vs;
  const auto v = f.values();
  for (std::size_t i = f.dom_first(); i <= f.dom_last(); ++i) {
    const double x = f.node(i);
    while (xs.size() >= 2) {
      const std::size_t b = xs.size() - 1;
      const double cross = (xs[b] - xs[b - 1]) * (v[i] - vs[b - 1]) - (vs[b] - vs[b - 1]) * (x - xs[b - 1]);
      if (cross <= 0.0) {
        xs.pop_back();
        vs.pop_back();
      } else {
        break;
      }
    }
    xs.push_back(x);
    vs.push_back(v[i]);
  }
  std::vector<double> slopes(xs.size() + 1);
  slopes.front() = -kInf;
  slopes.back() = kInf;
  for (std::size_t j = 1; j < xs.size(); ++j) slopes[j] = (vs[j] - vs[j - 1]) / (xs[j] - xs[j - 1]);
  return ConvexPL(std::move(xs), std::move(vs), std::move(slopes));
}

bool ConvexPL::left_wall() const { return slopes_.front() == -kInf; }
bool ConvexPL::right_wall() const { return slopes_.back() == kInf; }
ExtReal ConvexPL::dom_lo() const { return left_wall() ? ExtReal(knots_.front()) : ExtReal::neg_inf(); }
ExtReal ConvexPL::dom_hi() const { return right_wall() ? ExtReal(knots_.back()) : ExtReal::inf(); }

double ConvexPL::knot_tolerance() const { return kKnotRelTol * scale_of(knots_); }

ExtReal ConvexPL::operator()(double x) const {
  if (std::isnan(x)) throw InvalidArgument("ConvexPL: NaN abscissa");
  if (x <= knots_.front()) {
    const double d = x - knots_.front();
    if (d == 0.0) return ExtReal(values_.front());
    if (left_wall()) return -d <= knot_tolerance() ? ExtReal(values_.front()) : ExtReal::inf();
    return ExtReal(values_.front() + slopes_.front() * d);
  }
  if (x >= knots_.back()) {
    const double d = x - knots_.back();
    if (d == 0.0) return ExtReal(values_.back());
    if (right_wall()) return d <= knot_tolerance() ? ExtReal(values_.back()) : ExtReal::inf();
    return ExtReal(values_.back() + slopes_.back() * d);
  }
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const auto j = static_cast<std::size_t>(it - knots_.begin()) - 1;  // k_j <= x < k_{j+1}
  return ExtReal(values_[j] + slopes_[j + 1] * (x - knots_[j]));
}

double ConvexPL::slope_at(double x) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  return slopes_[static_cast<std::size_t>(it - knots_.begin())];
}

std::optional<SlopeInterval> ConvexPL::subdifferential(double x) const {
  if ((*this)(x).is_pos_inf()) return std::nullopt;
  const double tol = knot_tolerance();
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x - tol);
  if (it != knots_.end() && std::abs(*it - x) <= tol) {
    const auto j = static_cast<std::size_t>(it - knots_.begin());
    return SlopeInterval{ExtReal(slopes_[j]), ExtReal(slopes_[j + 1])};
  }
  const double s = slope_at(x);
  return SlopeInterval{ExtReal(s), ExtReal(s)};
}

std::vector<double> ConvexPL::sample(const GridSpec& grid) const {
  std::vector<double> out(grid.n);
  const std::size_t m = knots_.size();
  std::size_t j = 0;  // first knot index with knots_[j] > x
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.node(i);
    if (x <= knots_.front() || x >= knots_.back()) {
      out[i] = (*this)(x).value();
      continue;
    }
    while (j < m && knots_[j] <= x) ++j;
    out[i] = values_[j - 1] + slopes_[j] * (x - knots_[j - 1]);
  }
  return out;
}

ConvexPL legendre(const ConvexPL& p) {
  const auto k = p.knots();
  const auto v = p.values();
  const auto s = p.slopes();
  const std::size_t m = k.size();
  const std::size_t jlo = std::isinf(s[0]) ? 1 : 0;
  const std::size_t jhi = std::isinf(s[m]) ? m - 1 : m;
  if (jlo > jhi) {
    // Single point domain {k_0}: the conjugate is affine.
    return ConvexPL::affine(k[0], -v[0]);
  }
  std::vector<double> knots, values, slopes;
  knots.reserve(jhi - jlo + 1);
  values.reserve(jhi - jlo + 1);
  slopes.reserve(jhi - jlo + 2);
  slopes.push_back(jlo == 0 ? -kInf : k[jlo - 1]);
  for (std::size_t j = jlo; j <= jhi; ++j) {
    knots.push_back(s[j]);
    // The sup at slope s_j is attained on the piece [k_{j-1}, k_j].
    const std::size_t at = j == 0 ? 0 : j - 1;
    values.push_back(s[j] * k[at] - v[at]);
    slopes.push_back(j == m ? kInf : k[j]);
  }
  const double tol = kKnotRelTol * scale_of(knots);
  merge_close_knots(knots, values, slopes, tol);
  return ConvexPL(std::move(knots), std::move(values), std::move(slopes));
}

ConvexPL weighted_sum(std::span<const WeightedPL> terms) {
  if (terms.empty()) throw InvalidArgument("weighted_sum: no terms");
  double lo = -kInf;
  double hi = kInf;
  double kscale = 1.0;
  for (const auto& t : terms) {
    if (!(t.weight > 0.0) || !std::isfinite(t.weight)) throw InvalidArgument("weighted_sum: weights must be > 0");
    if (t.fn->left_wall()) lo = std::max(lo, t.fn->knots().front());
    if (t.fn->right_wall()) hi = std::min(hi, t.fn->knots().back());
    kscale = std::max(kscale, scale_of(t.fn->knots()));
  }
  const double tol = kKnotRelTol * kscale;
  if (lo > hi + tol) throw ImproperFunction("weighted_sum: domains do not intersect");
  if (lo > hi) hi = lo;

  std::vector<double> knots;
  for (const auto& t : terms)
    for (double x : t.fn->knots())
      if (x >= lo && x <= hi) knots.push_back(x);
  if (std::isfinite(lo)) knots.push_back(lo);
  if (std::isfinite(hi)) knots.push_back(hi);
  std::sort(knots.begin(), knots.end());
  std::vector<double> merged;
  merged.reserve(knots.size());
  for (double x : knots)
    if (merged.empty() || x - merged.back() > tol) merged.push_back(x);
  knots = std::move(merged);

  const std::size_t m = knots.size();
  std::vector<double> values(m, 0.0);
  std::vector<double> slopes(m + 1, 0.0);
  for (const auto& t : terms) {
    const ConvexPL& f = *t.fn;
    for (std::size_t j = 0; j < m; ++j) values[j] += t.weight * f(knots[j]).value();
    for (std::size_t j = 1; j < m; ++j) slopes[j] += t.weight * f.slope_at(0.5 * (knots[j - 1] + knots[j]));
    slopes[0] += t.weight * f.slopes().front();
    slopes[m] += t.weight * f.slopes().back();
  }
  if (std::isfinite(lo)) slopes[0] = -kInf;
  if (std::isfinite(hi)) slopes[m] = kInf;
  return ConvexPL(std::move(knots), std::move(values), std::move(slopes));
}

}  // namespace funmean
