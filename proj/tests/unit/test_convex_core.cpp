#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "funmean/error.hpp"
#include "funmean/grid_fn.hpp"
#include "funmean/piecewise_linear.hpp"
#include "funmean/quadratic.hpp"
#include "support.hpp"

using namespace funmean;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("convex_core") {
  TEST_CASE("grid construction rules") {
    CHECK_THROWS_AS(GridFn(0.0, 1.0, {1.0, std::nan(""), 1.0}), InvalidArgument);
    CHECK_THROWS_AS(GridFn(0.0, 1.0, {1.0, -kInf, 1.0}), ImproperFunction);
    CHECK_THROWS_AS(GridFn(0.0, 1.0, {kInf, kInf, kInf}), ImproperFunction);
    CHECK_THROWS_AS(GridFn(0.0, 1.0, {0.0, kInf, 0.0}), NotConvex);
    CHECK_THROWS_AS(GridFn(0.0, 1.0, {0.0, 1.0, 0.0}), NotConvex);
    CHECK_THROWS_AS(GridFn(1.0, 1.0, {0.0, 1.0}), InvalidArgument);
    // A single finite node is a proper function: the indicator of a point.
    const GridFn point(-1.0, 1.0, {kInf, 0.0, kInf});
    CHECK(point.dom_first() == 1);
    CHECK(point.dom_last() == 1);
  }

  TEST_CASE("rounding-level non-convexity is repaired") {
    const double eps = 1e-12;
    const GridFn f(0.0, 1.0, {0.0, 0.5 + eps, 1.0});
    CHECK(f.values()[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.values()[1] <= 0.5 + 1e-15);
  }

  TEST_CASE("eval") {
    const GridFn abs = GridFn::sample({-1.0, 1.0, 5}, [](double x) { return std::abs(x); });
    CHECK(eval(abs, 0.5).value() == 0.5);
    CHECK(eval(abs, 1.0 + 1.0).is_pos_inf());
    CHECK(eval(abs, -1.5).is_pos_inf());
    const GridFn sq = GridFn::sample({-1.0, 1.0, 201}, [](double x) { return x * x; });
    const double h = sq.step();
    CHECK(std::abs(eval(sq, 0.105).value() - 0.011025) <= h * h / 4.0 + 1e-15);
    const GridFn ind(0.0, 1.0, {kInf, 0.0, 0.0});
    CHECK(eval(ind, 0.25).is_pos_inf());
    CHECK(eval(ind, 0.5).value() == 0.0);
    CHECK(eval(ind, 0.75).value() == 0.0);
  }

  TEST_CASE("eval is monotone in the values") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const GridFn f = testsupport::random_convex(rng, {-1.0, 1.0, 33});
      std::vector<double> v(f.values().begin(), f.values().end());
      for (double& x : v) x += 0.1;
      const GridFn g(f.grid(), v);
      for (int k = 0; k < 50; ++k) {
        const double x = testsupport::uniform(rng, -1.2, 1.2);
        CHECK(leq(eval(f, x), eval(g, x)));
      }
    }
  }

  TEST_CASE("convexify") {
    const GridSpec grid{-1.0, 1.0, 3};
    const std::vector<double> tent{0.0, 1.0, 0.0};
    const GridFn hull = convexify(grid, tent);
    CHECK(hull.values()[0] == 0.0);
    CHECK(hull.values()[1] == 0.0);
    CHECK(hull.values()[2] == 0.0);
    const std::vector<double> vee{0.0, -1.0, 0.0};
    const GridFn same = convexify(grid, vee);
    CHECK(same.values()[1] == -1.0);
    const std::vector<double> gap{1.0, kInf, 1.0};
    CHECK(convexify(grid, gap).values()[1] == 1.0);
    const std::vector<double> lonely{kInf, 2.0, kInf};
    CHECK(convexify(grid, lonely).values()[1] == 2.0);
  }

  TEST_CASE("convexify keeps convex samples and is idempotent") {
    std::mt19937_64 rng(5);
    const GridSpec grid{-1.0, 1.0, 65};
    for (int trial = 0; trial < 20; ++trial) {
      const GridFn f = testsupport::random_convex(rng, grid);
      const GridFn once = convexify(grid, f.values());
      for (std::size_t i = 0; i < grid.n; ++i) CHECK(once.values()[i] == doctest::Approx(f.values()[i]));
      std::vector<double> noisy(f.values().begin(), f.values().end());
      for (double& x : noisy) x += testsupport::uniform(rng, 0.0, 0.3);
      const GridFn a = convexify(grid, noisy);
      const GridFn b = convexify(grid, a.values());
      for (std::size_t i = 0; i < grid.n; ++i) CHECK(a.values()[i] == b.values()[i]);
      for (std::size_t i = 1; i + 1 < grid.n; ++i)
        CHECK(a.values()[i - 1] - 2.0 * a.values()[i] + a.values()[i + 1] >= -1e-14);
    }
  }

  TEST_CASE("convexify scattered points") {
    const std::vector<SamplePoint> pts{{0.0, 0.0}, {1.0, 1.0}, {-1.0, 1.0}, {0.5, 2.0}};
    const GridFn f = convexify(GridSpec{-2.0, 2.0, 9}, pts);
    CHECK(f.values()[0] == kInf);
    CHECK(f.values()[2] == 1.0);
    CHECK(f.values()[3] == doctest::Approx(0.5));
    CHECK(f.values()[4] == 0.0);
    CHECK(f.values()[5] == doctest::Approx(0.5));
    CHECK(f.values()[8] == kInf);
    const std::vector<SamplePoint> one{{0.0, 0.0}};
    CHECK_THROWS_AS(convexify(GridSpec{-1.0, 1.0, 3}, one), ImproperFunction);
  }

  TEST_CASE("scalar multiplication and epi-scaling") {
    const GridSpec grid{-1.0, 1.0, 9};
    const GridFn sq = GridFn::sample(grid, [](double x) { return x * x; });
    const GridFn two = scalar_multiply(2.0, sq);
    for (std::size_t i = 0; i < grid.n; ++i) CHECK(two.values()[i] == 2.0 * sq.values()[i]);
    const GridFn one = scalar_multiply(1.0, sq);
    for (std::size_t i = 0; i < grid.n; ++i) CHECK(one.values()[i] == sq.values()[i]);
    const GridFn walled(grid, {kInf, 1, 0.5, 0.25, 0, 0.25, 0.5, 1, kInf});
    CHECK(scalar_multiply(3.0, walled).values()[0] == kInf);
    CHECK_THROWS_AS(scalar_multiply(0.0, sq), InvalidArgument);

    const GridFn wide = epi_scale(sq, 2.0);
    CHECK(wide.lo() == -2.0);
    CHECK(wide.hi() == 2.0);
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double y = wide.node(i);
      CHECK(wide.values()[i] == doctest::Approx(y * y / 2.0).epsilon(1e-14));
    }
    const GridFn ind = GridFn::sample({0.0, 1.0, 5}, [](double) { return 0.0; });
    const GridFn ind3 = epi_scale(ind, 3.0);
    CHECK(ind3.lo() == 0.0);
    CHECK(ind3.hi() == 3.0);
    CHECK(eval(ind3, 3.0).value() == 0.0);
    CHECK(eval(ind3, 3.1).is_pos_inf());
    CHECK_THROWS_AS(epi_scale(sq, -1.0), InvalidArgument);
  }

  TEST_CASE("subdifferential") {
    const GridFn sq = GridFn::sample({-1.0, 1.0, 801}, [](double x) { return x * x; });
    const std::size_t mid = 600;  // x = 0.5
    CHECK(sq.node(mid) == doctest::Approx(0.5));
    const auto d = subdifferential(sq, mid);
    REQUIRE(d);
    CHECK(d->contains(1.0));
    CHECK(d->hi_slope.value() - d->lo_slope.value() <= 2.0 * sq.step() + 1e-12);

    const GridFn abs = GridFn::sample({-1.0, 1.0, 5}, [](double x) { return std::abs(x); });
    const auto k = subdifferential(abs, 2);
    REQUIRE(k);
    CHECK(k->lo_slope.value() == -1.0);
    CHECK(k->hi_slope.value() == 1.0);
    const auto left = subdifferential(abs, 0);
    REQUIRE(left);
    CHECK(left->lo_slope.is_neg_inf());
    CHECK(left->hi_slope.value() == -1.0);

    const GridFn ind(0.0, 1.0, {kInf, 0.0, 0.0});
    CHECK_FALSE(subdifferential(ind, 0).has_value());
  }

  TEST_CASE("subgradients are monotone") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const GridFn f = testsupport::random_convex(rng, {-1.0, 1.0, 65});
      for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        const auto a = subdifferential(f, i);
        const auto b = subdifferential(f, i + 1);
        REQUIRE(a);
        REQUIRE(b);
        CHECK(a->hi_slope.value() <= b->lo_slope.value() + 1e-12);
      }
    }
  }

  TEST_CASE("piecewise-linear representation") {
    const GridFn abs = GridFn::sample({-1.0, 1.0, 5}, [](double x) { return std::abs(x); });
    const ConvexPL p = ConvexPL::from_grid(abs);
    CHECK(p.knots().size() == 3);
    CHECK(p(0.3).value() == doctest::Approx(0.3));
    CHECK(p(1.5).is_pos_inf());
    CHECK(p.dom_lo().value() == -1.0);
    const auto sub = p.subdifferential(0.0);
    REQUIRE(sub);
    CHECK(sub->lo_slope.value() == -1.0);
    CHECK(sub->hi_slope.value() == 1.0);

    const ConvexPL a = ConvexPL::affine(2.0, 1.0);
    CHECK(a(3.0).value() == 7.0);
    const ConvexPL pa = legendre(a);
    CHECK(pa(2.0).value() == -1.0);
    CHECK(pa(2.5).is_pos_inf());

    const ConvexPL pp = legendre(p);
    CHECK(pp(0.5).value() == doctest::Approx(0.0));
    CHECK(pp(3.0).value() == doctest::Approx(2.0));
    CHECK(pp(-3.0).value() == doctest::Approx(2.0));
    const ConvexPL back = legendre(pp);
    for (double x : {-1.0, -0.7, 0.0, 0.2, 1.0}) CHECK(back(x).value() == doctest::Approx(std::abs(x)));
    CHECK(back(1.2).is_pos_inf());
  }

  TEST_CASE("weighted sums of piecewise-linear functions") {
    const ConvexPL f({0.0, 1.0}, {0.0, 0.0}, {-kInf, 0.0, kInf});
    const ConvexPL g({0.5, 2.0}, {1.0, 1.0}, {-kInf, 0.0, kInf});
    const WeightedPL terms[] = {{1.0, &f}, {2.0, &g}};
    const ConvexPL s = weighted_sum(terms);
    CHECK(s.dom_lo().value() == 0.5);
    CHECK(s.dom_hi().value() == 1.0);
    CHECK(s(0.75).value() == 2.0);
    const ConvexPL h({3.0, 4.0}, {0.0, 0.0}, {-kInf, 0.0, kInf});
    const WeightedPL apart[] = {{1.0, &f}, {1.0, &h}};
    CHECK_THROWS_AS(weighted_sum(apart), ImproperFunction);
  }

  TEST_CASE("quadratic functions") {
    const QuadraticFn id{SpdMatrix(Matrix::identity(2))};
    const std::vector<double> ones{1.0, 1.0};
    CHECK(eval_quadratic(id, ones) == 1.0);
    const double d24[] = {2.0, 4.0};
    const QuadraticFn q{SpdMatrix(Matrix::diagonal(d24))};
    CHECK(eval_quadratic(q, ones) == 3.0);
    const std::vector<double> zero{0.0, 0.0};
    CHECK(eval_quadratic(q, zero) == 0.0);
    const std::vector<double> three{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(eval_quadratic(q, three), InvalidArgument);
    CHECK_THROWS_AS(SpdMatrix(Matrix{{1.0, 2.0}, {0.0, 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(SpdMatrix(Matrix{{1.0, 0.0}, {0.0, -1.0}}), InvalidArgument);
    CHECK_THROWS_AS(SpdMatrix(Matrix{{1.0, 2.0}, {2.0, 1.0}}), InvalidArgument);
  }

  TEST_CASE("quadratic order matches the Loewner order") {
    std::mt19937_64 rng(23);
    int both = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t d = 1 + trial % 4;
      const Matrix a = testsupport::random_spd(rng, d, 10.0);
      Matrix b = testsupport::random_spd(rng, d, 10.0);
      if (trial % 2 == 0) b = a + b * 0.1;  // B >= A
      const bool psd = min_eigenvalue(b - a) >= -1e-10;
      bool dominated = true;
      const QuadraticFn qa{SpdMatrix(a)}, qb{SpdMatrix(b)};
      for (int k = 0; k < 100; ++k) {
        std::vector<double> x(d);
        double nn = 0.0;
        for (double& xi : x) {
          xi = testsupport::uniform(rng, -1.0, 1.0);
          nn += xi * xi;
        }
        for (double& xi : x) xi /= std::sqrt(nn);
        if (eval_quadratic(qa, x) > eval_quadratic(qb, x) + 1e-12) dominated = false;
      }
      if (psd) {
        ++both;
        CHECK(dominated);
      } else {
        // A failing direction exists: the eigenvector of the most negative eigenvalue.
        const auto e = symmetric_eigen(b - a);
        std::vector<double> v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = e.vectors(i, 0);
        CHECK(eval_quadratic(qa, v) > eval_quadratic(qb, v));
      }
    }
    CHECK(both >= 30);
  }

  TEST_CASE("quadratics add and scale with their matrices") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t d = 1 + trial % 5;
      const Matrix a = testsupport::random_spd(rng, d), b = testsupport::random_spd(rng, d);
      const QuadraticFn qa{SpdMatrix(a)}, qb{SpdMatrix(b)}, qs{SpdMatrix(a + b)}, q3{SpdMatrix(a * 3.0)};
      std::vector<double> x(d);
      for (double& xi : x) xi = testsupport::uniform(rng, -2.0, 2.0);
      const double sum = eval_quadratic(qa, x) + eval_quadratic(qb, x);
      CHECK(eval_quadratic(qs, x) == doctest::Approx(sum).epsilon(1e-13));
      CHECK(eval_quadratic(q3, x) == doctest::Approx(3.0 * eval_quadratic(qa, x)).epsilon(1e-13));
    }
  }

  TEST_CASE("symmetric eigensolver") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t d = 1 + trial % 8;
      const Matrix a = testsupport::random_spd(rng, d, 1e4);
      const auto e = symmetric_eigen(a);
      const Matrix back = from_eigen(e.vectors, e.values);
      CHECK((back - a).frobenius_norm() <= 1e-12 * a.frobenius_norm());
      const Matrix orth = e.vectors.transpose() * e.vectors - Matrix::identity(d);
      CHECK(orth.max_abs() <= 1e-13);
      for (std::size_t k = 1; k < d; ++k) CHECK(e.values[k - 1] <= e.values[k]);
    }
  }
}
