#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "funmean/grid_fn.hpp"
#include "funmean/matrix.hpp"

namespace testsupport {

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

/// Positive combination of |x - c|, (x - c)^2, exp(b x) and max(0, x - c).
inline funmean::GridFn random_convex(std::mt19937_64& rng, funmean::GridSpec grid = {-1.0, 1.0, 257}) {
  const double c1 = uniform(rng, -0.8, 0.8), w1 = uniform(rng, 0.0, 2.0);
  const double c2 = uniform(rng, -0.8, 0.8), w2 = uniform(rng, 0.1, 3.0);
  const double b3 = uniform(rng, -2.0, 2.0), w3 = uniform(rng, 0.0, 1.0);
  const double c4 = uniform(rng, -0.8, 0.8), w4 = uniform(rng, 0.0, 2.0);
  const double shift = uniform(rng, -1.0, 1.0);
  return funmean::GridFn::sample(grid, [=](double x) {
    return w1 * std::abs(x - c1) + w2 * (x - c2) * (x - c2) + w3 * std::exp(b3 * x) +
           w4 * std::max(0.0, x - c4) + shift;
  });
}

inline funmean::Matrix random_spd(std::mt19937_64& rng, std::size_t d, double cond = 100.0) {
  funmean::Matrix q = funmean::Matrix::identity(d);
  for (int r = 0; r < 3; ++r) {
    std::vector<double> v(d);
    double nn = 0.0;
    for (double& x : v) {
      x = uniform(rng, -1.0, 1.0);
      nn += x * x;
    }
    funmean::Matrix h = funmean::Matrix::identity(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) h(i, j) -= 2.0 * v[i] * v[j] / nn;
    q = q * h;
  }
  std::vector<double> lam(d);
  for (double& l : lam) l = std::exp(uniform(rng, -0.5, 0.5) * std::log(cond));
  return funmean::from_eigen(q, lam);
}

}  // namespace testsupport
