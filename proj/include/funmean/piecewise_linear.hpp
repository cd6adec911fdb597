#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "funmean/extreal.hpp"
#include "funmean/grid_fn.hpp"

namespace funmean {

/// Convex piecewise-linear function on the real line, stored as knots
/// k_0 < ... < k_{m-1}, values v_j = P(k_j) and m + 1 piece slopes.
///
/// slopes[0] is the slope left of k_0 and slopes[m] the slope right of
/// k_{m-1}; slopes[j] for 0 < j < m is the slope on (k_{j-1}, k_j). An
/// infinite outer slope is a wall: the function is +inf beyond that knot.
/// Slopes are kept explicitly instead of being recomputed from values, so
/// conjugation does not lose precision to cancellation.
class ConvexPL {
 public:
  ConvexPL(std::vector<double> knots, std::vector<double> values, std::vector<double> slopes);

  /// Affine function x -> slope * x + intercept (no walls).
  static ConvexPL affine(double slope, double intercept);

  /// Lower hull of the finite nodes of f with walls at the ends of dom f.
  static ConvexPL from_grid(const GridFn& f);

  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> slopes() const { return slopes_; }

  bool left_wall() const;
  bool right_wall() const;
  ExtReal dom_lo() const;
  ExtReal dom_hi() const;

  ExtReal operator()(double x) const;

  /// Slope of the piece containing x; x must not be a knot.
  double slope_at(double x) const;

  /// nullopt outside the domain.
  std::optional<SlopeInterval> subdifferential(double x) const;

  /// Finite values on every node of `grid`, +inf outside the domain.
  std::vector<double> sample(const GridSpec& grid) const;

  /// Knot distance below which knots are treated as equal, and the slack
  /// granted at walls.
  double knot_tolerance() const;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// Exact Legendre transform P*(s) = sup_x (s x - P(x)). Knots and slopes
/// trade places.
ConvexPL legendre(const ConvexPL& p);

struct WeightedPL {
  double weight;
  const ConvexPL* fn;
};

/// sum_k w_k P_k with w_k > 0. Throws ImproperFunction when the domains do not
/// intersect.
ConvexPL weighted_sum(std::span<const WeightedPL> terms);

}  // namespace funmean
