#pragma once

#include <optional>
#include <span>

#include "funmean/extreal.hpp"
#include "funmean/grid_fn.hpp"
#include "funmean/piecewise_linear.hpp"
#include "funmean/quadratic.hpp"

namespace funmean {

/// Slope range of the hull of f padded by 10% on each side (1 when the range
/// is a single slope), with `n` nodes.
GridSpec default_dual_grid(const GridFn& f, std::size_t n = 0);

/// f*(s) = max_i (s x_i - f(x_i)) over the finite nodes, sampled on
/// `dual_grid` (default_dual_grid(f) when absent). Exact for the
/// piecewise-linear extension of f.
GridFn conjugate(const GridFn& f, std::optional<GridSpec> dual_grid = std::nullopt);

/// f*(s) without sampling.
ExtReal conjugate_at(const GridFn& f, double s);

/// Q_A^* = Q_{A^{-1}}. Throws ConditioningError for cond(A) > 1e12.
QuadraticFn conjugate_quadratic(const QuadraticFn& q);

/// f** on the primal grid; equals the lower hull of the finite samples.
GridFn biconjugate(const GridFn& f);

/// Grid covering dom f + dom g with the finer of the two steps.
GridSpec inf_conv_grid(const GridFn& f, const GridFn& g);

/// (f □ g)(x) = min_z f(z) + g(x - z) by direct search over grid pairs. The
/// minimum of two piecewise-linear convex functions is attained where z is a
/// node of f or x - z is a node of g, so both families are scanned.
GridFn inf_conv_brute(const GridFn& f, const GridFn& g, std::optional<GridSpec> out = std::nullopt);

/// (f* + g*)* sampled on inf_conv_grid(f, g). With `dual_grid` the conjugates
/// are sampled on that shared grid before adding; it must contain every hull
/// slope of f and g, else ConfigurationError.
GridFn inf_conv_dual(const GridFn& f, const GridFn& g, std::optional<GridSpec> dual_grid = std::nullopt);

/// f(x) + f*(x*) - x* x, +inf when x is outside dom f.
ExtReal fenchel_gap(const GridFn& f, double x, double x_star);

double fenchel_gap(const QuadraticFn& q, std::span<const double> x, std::span<const double> x_star);

}  // namespace funmean
