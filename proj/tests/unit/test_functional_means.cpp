#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "funmean/error.hpp"
#include "funmean/fenchel.hpp"
#include "funmean/functional_means.hpp"
#include "support.hpp"

using namespace funmean;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridFn parabola(double a, double box = 1.0, std::size_t n = 513) {
  return GridFn::sample({-box, box, n}, [a](double x) { return 0.5 * a * x * x; });
}

// Max deviation from x -> c x^2 / 2 over |x| <= reach.
double parabola_error(const GridFn& r, double c, double reach) {
  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double x = r.node(i);
    if (std::abs(x) <= reach) worst = std::max(worst, std::abs(r.values()[i] - 0.5 * c * x * x));
  }
  return worst;
}

double max_diff(const GridFn& a, const GridFn& b) {
  REQUIRE(a.grid() == b.grid());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a.values()[i], y = b.values()[i];
    if (x == kInf && y == kInf) continue;
    worst = std::max(worst, std::abs(x - y));
  }
  return worst;
}

}  // namespace

TEST_SUITE("functional_means") {
  TEST_CASE("arithmetic mean") {
    const GridSpec grid{-1.0, 1.0, 65};
    const GridFn f = GridFn::sample(grid, [](double x) { return x * x; });
    const GridFn g = GridFn::sample(grid, [](double x) { return x * x + 2.0; });
    const GridFn m = arith(f, g, 0.5);
    for (std::size_t i = 0; i < grid.n; ++i) CHECK(m.values()[i] == doctest::Approx(f.values()[i] + 1.0));
    for (double l : {0.0, 0.3, 1.0}) CHECK(max_diff(arith(f, f, l), f) <= 1e-15);

    std::vector<double> gv(grid.n, kInf);
    for (std::size_t i = 20; i < 40; ++i) gv[i] = 0.0;
    const GridFn walled(grid, gv);
    const GridFn at0 = arith(f, walled, 0.0);
    for (std::size_t i = 0; i < grid.n; ++i) CHECK(at0.values()[i] == f.values()[i]);
    const GridFn mid = arith(f, walled, 0.5);
    CHECK(mid.values()[0] == kInf);
    CHECK(mid.values()[30] == doctest::Approx(0.5 * f.values()[30]));

    const GridFn left = GridFn::sample({-1.0, -0.5, 9}, [](double) { return 0.0; });
    const GridFn right = GridFn::sample({0.5, 1.0, 9}, [](double) { return 0.0; });
    CHECK_THROWS_AS(arith(left, right, 0.5), ImproperFunction);
    CHECK_THROWS_AS(arith(f, g, 1.5), InvalidArgument);
  }

  TEST_CASE("harmonic mean of parabolas") {
    const GridFn r = harmonic(parabola(1.0), parabola(3.0), 0.5);
    CHECK(parabola_error(r, 1.5, 0.9 / 3.0) <= 1e-4);
    const GridFn f = parabola(2.0);
    CHECK(max_diff(harmonic(f, f, 0.3), f) <= 1e-12);
  }

  TEST_CASE("harmonic mean equals the epi-scaled inf-convolution") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 5; ++trial) {
      const GridFn f = testsupport::random_convex(rng, {-1.0, 1.0, 129});
      const GridFn g = testsupport::random_convex(rng, {-1.0, 1.0, 129});
      for (double l : {0.25, 0.5, 0.75}) {
        const GridFn h = harmonic(f, g, l);
        const GridFn brute = inf_conv_brute(epi_scale(f, 1.0 - l), epi_scale(g, l), h.grid());
        CHECK(max_diff(h, brute) <= 1e-5);
      }
    }
  }

  TEST_CASE("endpoints are exact") {
    std::mt19937_64 rng(103);
    const GridFn f = testsupport::random_convex(rng, {-1.0, 1.0, 65});
    std::vector<double> gv(65, kInf);
    for (std::size_t i = 10; i < 30; ++i) gv[i] = 1.0;
    const GridFn g({-1.0, 1.0, 65}, gv);
    for (const GridFn& r : {harmonic(f, g, 0.0), geometric(f, g, 0.0), arith(f, g, 0.0)})
      for (std::size_t i = 0; i < 65; ++i) CHECK(r.values()[i] == f.values()[i]);
    for (const GridFn& r : {harmonic(f, g, 1.0), geometric(f, g, 1.0), arith(f, g, 1.0)})
      for (std::size_t i = 0; i < 65; ++i) CHECK(r.values()[i] == g.values()[i]);
  }

  TEST_CASE("geometric mean") {
    const GridFn r = geometric(parabola(1.0), parabola(4.0), 0.5);
    CHECK(parabola_error(r, 2.0, 0.9 / 4.0) <= 1e-3);
    const GridFn f = parabola(3.0);
    CHECK(max_diff(geometric(f, f, 0.4), f) <= 1e-10);

    std::mt19937_64 rng(107);
    const GridFn a = testsupport::random_convex(rng), b = testsupport::random_convex(rng);
    CHECK(max_diff(geometric(a, b, 0.3), geometric(b, a, 0.7)) <= 1e-8);
    CHECK_THROWS_AS(geometric(a, b, 0.3, gauss_jacobi_nu(0.4, 16)), InvalidArgument);
    CHECK_THROWS_AS(geometric(a, b, 0.3, mu_rule(16)), InvalidArgument);
  }

  TEST_CASE("different grids share one output grid") {
    const GridFn f = GridFn::sample({-1.0, 1.0, 65}, [](double x) { return x * x; });
    const GridFn g = GridFn::sample({0.0, 2.0, 129}, [](double x) { return (x - 1.0) * (x - 1.0); });
    const GridSpec out = common_grid(f, g);
    CHECK(out.lo == -1.0);
    CHECK(out.hi == 2.0);
    CHECK(out.step() == doctest::Approx(g.step()));
    const GridFn h = harmonic(f, g, 0.5);
    CHECK(h.grid() == out);
    // The domain of the harmonic mean is (dom f + dom g) / 2 = [-0.5, 1.5].
    CHECK(eval(h, -0.6).is_pos_inf());
    CHECK(eval(h, -0.5).is_finite());
    CHECK(eval(h, 1.5).is_finite());
    CHECK(eval(h, 1.6).is_pos_inf());
  }

  TEST_CASE("logarithmic mean") {
    const double e2 = std::exp(2.0);
    const double c = (e2 - 1.0) / 2.0;
    const GridFn fa = parabola(1.0, 4.0), fb = parabola(e2, 4.0);
    const double reach = 0.9 * 4.0 / e2;
    CHECK(parabola_error(log_mean_harm(fa, fb), c, reach) <= 1e-3);
    CHECK(parabola_error(log_mean_geo(fa, fb, gauss_legendre(32), 32), c, reach) <= 1e-3);

    const GridFn f = parabola(5.0);
    CHECK(max_diff(log_mean_harm(f, f), f) <= 1e-10);

    std::mt19937_64 rng(109);
    const GridFn a = testsupport::random_convex(rng), b = testsupport::random_convex(rng);
    const GridFn lh = log_mean_harm(a, b);
    CHECK(max_diff(lh, log_mean_harm(b, a)) <= 1e-10);
    CHECK(max_diff(lh, log_mean_geo(a, b, gauss_legendre(32), 32)) <= 1e-3);

    std::vector<double> av(a.values().begin(), a.values().end()), bv(b.values().begin(), b.values().end());
    for (double& x : av) x += 0.7;
    for (double& x : bv) x -= 0.3;
    const GridFn shifted = log_mean_harm(GridFn(a.grid(), av), GridFn(b.grid(), bv));
    for (std::size_t i = 0; i < lh.size(); ++i) CHECK(shifted.values()[i] == doctest::Approx(lh.values()[i] + 0.2));
  }

  TEST_CASE("families G and U") {
    std::mt19937_64 rng(113);
    const GridFn f = testsupport::random_convex(rng), g = testsupport::random_convex(rng);
    const auto nu = gauss_jacobi_nu(0.4, 64);
    CHECK(max_diff(family_G(f, g, 0.4, 0.0, nu), harmonic(f, g, 0.4)) == 0.0);
    CHECK(max_diff(family_G(f, g, 0.4, 1.0, nu), geometric(f, g, 0.4, nu)) <= 1e-8);
    CHECK(max_diff(family_G(f, g, 0.4, 1e-9, nu), harmonic(f, g, 0.4)) <= 1e-6);
    CHECK(max_diff(family_G(f, f, 0.4, 0.6, nu), f) <= 1e-10);

    const auto mu = mu_rule(64);
    CHECK(max_diff(family_U(f, g, 0.0, mu), harmonic(f, g, 0.5)) == 0.0);
    CHECK(max_diff(family_U(f, g, 1.0, mu), log_mean_harm(f, g, mu)) <= 1e-12);
    CHECK(max_diff(family_U(f, g, 1.0 - 1e-9, mu), log_mean_harm(f, g, mu)) <= 1e-6);
    CHECK(max_diff(family_U(f, f, 0.3, mu), f) <= 1e-10);
  }

  TEST_CASE("diamond") {
    // The discrete subdifferential at a node has width a h, so the error is
    // about h / 4 here; h = 2.5e-4 meets 1e-4.
    const GridFn f = parabola(1.0, 1.5, 12001), g = parabola(2.0, 1.5, 12001);
    CHECK(std::abs(diamond(f, g, 1.0).value() - 0.75) <= 1e-4);
    CHECK(diamond(f, g, 2.5).is_neg_inf());
    std::mt19937_64 rng(127);
    for (int trial = 0; trial < 10; ++trial) {
      const GridFn a = testsupport::random_convex(rng, {-1.0, 1.0, 65});
      const GridFn b = testsupport::random_convex(rng, {-1.0, 1.0, 65});
      for (std::size_t i = 0; i < 65; ++i) CHECK(leq(diamond(a, b, a.node(i)), ExtReal(b.values()[i] + 1e-12)));
    }
    // At the wall of dom f the subdifferential is unbounded below; outside dom g
    // the objective is unbounded.
    const GridFn narrow = GridFn::sample({0.0, 1.0, 33}, [](double x) { return x * x; });
    const GridFn shifted = GridFn::sample({0.5, 1.5, 33}, [](double x) { return x; });
    CHECK(diamond(narrow, shifted, 0.0).is_pos_inf());
  }
}
