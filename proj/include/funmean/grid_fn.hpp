#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "funmean/extreal.hpp"

namespace funmean {

inline constexpr std::size_t kDefaultGridNodes = 513;

/// Relative tolerance on negative second differences. Sampled data within this
/// tolerance is repaired by taking its lower hull; anything worse is rejected.
inline constexpr double kConvexTolerance = 1e-9;

/// Uniform grid lo = x_0 < x_1 < ... < x_{n-1} = hi.
struct GridSpec {
  double lo = -1.0;
  double hi = 1.0;
  std::size_t n = kDefaultGridNodes;

  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  double node(std::size_t i) const;
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Closed interval of slopes; either end may be infinite.
struct SlopeInterval {
  ExtReal lo_slope;
  ExtReal hi_slope;

  bool contains(double s) const { return leq(lo_slope, s) && leq(ExtReal(s), hi_slope); }
  /// A finite representative: the midpoint when bounded, else the finite end.
  double pick() const;
};

/// A proper convex function of one variable sampled on a uniform grid and
/// equal to +inf outside [lo, hi].
///
/// Results computed from a GridFn approximate f + indicator([lo, hi]), not f
/// itself; functions with unbounded domain are truncated to the box.
///
/// Invariants checked on construction: no NaN and no -inf values, at least one
/// finite node, the finite nodes form one contiguous index range, and the
/// finite values are convex as a sequence up to kConvexTolerance.
class GridFn {
 public:
  GridFn(GridSpec grid, std::vector<double> values);
  GridFn(double lo, double hi, std::vector<double> values);

  static GridFn sample(GridSpec grid, const std::function<double(double)>& fn);

  const GridSpec& grid() const { return grid_; }
  double lo() const { return grid_.lo; }
  double hi() const { return grid_.hi; }
  std::size_t size() const { return values_.size(); }
  double step() const { return grid_.step(); }
  double node(std::size_t i) const { return grid_.node(i); }

  ExtReal at(std::size_t i) const { return ExtReal(values_[i]); }
  std::span<const double> values() const { return values_; }

  bool in_domain(std::size_t i) const { return i >= first_ && i <= last_; }
  std::size_t dom_first() const { return first_; }
  std::size_t dom_last() const { return last_; }
  double dom_lo() const { return node(first_); }
  double dom_hi() const { return node(last_); }

 private:
  GridSpec grid_;
  std::vector<double> values_;
  std::size_t first_ = 0;
  std::size_t last_ = 0;
};

/// +inf outside [lo, hi] or where a bracketing node is +inf; linear
/// interpolation between finite nodes; exact at nodes.
ExtReal eval(const GridFn& f, double x);

/// Lower convex hull of the finite samples, resampled on the grid. Values that
/// are +inf between finite samples are filled by the hull.
GridFn convexify(GridSpec grid, std::span<const double> values);

struct SamplePoint {
  double x;
  double value;
};

/// Hull of scattered (x, value) samples resampled on `grid`; +inf outside the
/// sample range.
GridFn convexify(GridSpec grid, std::span<const SamplePoint> points);

/// alpha . f : x -> alpha f(x), alpha > 0.
GridFn scalar_multiply(double alpha, const GridFn& f);

/// f . alpha : y -> alpha f(y / alpha), alpha > 0, on the grid [alpha lo, alpha hi].
GridFn epi_scale(const GridFn& f, double alpha);

/// Difference quotients around node i. nullopt when i is outside dom f. At the
/// ends of dom f the interval is unbounded on the outer side.
std::optional<SlopeInterval> subdifferential(const GridFn& f, std::size_t i);

/// Nodewise weighted sum sum_k w_k f_k with +inf absorbing; all operands must
/// share one grid.
std::vector<double> weighted_values(std::span<const double> weights,
                                    std::span<const std::span<const double>> operands);

/// Resample f onto `grid` through eval().
std::vector<double> resample(const GridFn& f, const GridSpec& grid);

}  // namespace funmean
