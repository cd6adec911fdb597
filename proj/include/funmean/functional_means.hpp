#pragma once

#include <vector>

#include "funmean/extreal.hpp"
#include "funmean/grid_fn.hpp"
#include "funmean/piecewise_linear.hpp"
#include "funmean/quadrature.hpp"

namespace funmean {

/// Output grid shared by every mean of f and g: the grid of f when both
/// operands share it, otherwise the union of the two boxes at the finer step.
GridSpec common_grid(const GridFn& f, const GridFn& g);

/// t -> f !_t g = ((1-t) f* + t g*)* sampled on one output grid. The
/// conjugates are built once, so integral means cost one weighted sum and one
/// Legendre transform per quadrature node.
class HarmonicPencil {
 public:
  HarmonicPencil(const GridFn& f, const GridFn& g);
  HarmonicPencil(const GridFn& f, const GridFn& g, GridSpec out);

  const GridSpec& grid() const { return out_; }

  /// Values of f !_t g on grid(); t = 0 and t = 1 return the operands.
  std::vector<double> at(double t) const;

  /// acc += w * (f !_t g) with +inf absorbing.
  void accumulate(double t, double w, std::vector<double>& acc) const;

  /// Exact piecewise-linear f !_t g for 0 < t < 1.
  ConvexPL exact(double t) const;

 private:
  GridSpec out_;
  ConvexPL f_conj_;
  ConvexPL g_conj_;
  std::vector<double> f_out_;
  std::vector<double> g_out_;
};

/// (1 - lambda) f + lambda g, exactly f at lambda = 0 and g at lambda = 1.
GridFn arith(const GridFn& f, const GridFn& g, double lambda);

/// ((1 - lambda) f* + lambda g*)*.
GridFn harmonic(const GridFn& f, const GridFn& g, double lambda);

/// int_0^1 f !_t g dnu_lambda(t); `rule` must be the nu rule of this lambda.
GridFn geometric(const GridFn& f, const GridFn& g, double lambda, const QuadRule& rule);
GridFn geometric(const GridFn& f, const GridFn& g, double lambda);

/// int_0^1 f #_t g dt with Gauss-Legendre in t and nu_t rules of
/// `nu_nodes` nodes.
GridFn log_mean_geo(const GridFn& f, const GridFn& g, const QuadRule& lebesgue, std::size_t nu_nodes);
GridFn log_mean_geo(const GridFn& f, const GridFn& g);

/// int_0^1 f !_t g dmu(t).
GridFn log_mean_harm(const GridFn& f, const GridFn& g, const QuadRule& mu);
GridFn log_mean_harm(const GridFn& f, const GridFn& g);

/// int_0^1 f !_{s t + (1-s) lambda} g dnu_lambda(t); harmonic at s = 0,
/// geometric at s = 1.
GridFn family_G(const GridFn& f, const GridFn& g, double lambda, double s, const QuadRule& rule);
GridFn family_G(const GridFn& f, const GridFn& g, double lambda, double s);

/// int_0^1 f !_{s t + (1-s)/2} g dmu(t); harmonic(., ., 1/2) at s = 0,
/// log_mean_harm at s = 1.
GridFn family_U(const GridFn& f, const GridFn& g, double s, const QuadRule& mu);
GridFn family_U(const GridFn& f, const GridFn& g, double s);

/// sup over x* in the subdifferential of f at x of x* x - g*(x*); -inf when
/// that subdifferential is empty.
ExtReal diamond(const GridFn& f, const GridFn& g, double x);

}  // namespace funmean
