#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "funmean/error.hpp"
#include "funmean/functional_means.hpp"
#include "funmean/operator_means.hpp"
#include "funmean/verify.hpp"

using namespace funmean;

TEST_SUITE("verify") {
  TEST_CASE("convex generator") {
    for (Shape shape : {Shape::Mixed, Shape::Smooth, Shape::Quadratic, Shape::Restricted}) {
      const GenConfig cfg{{-1.0, 1.0, 129}, shape};
      const GridFn a = gen_convex_gridfn(std::uint64_t{5}, cfg);
      const GridFn b = gen_convex_gridfn(std::uint64_t{5}, cfg);
      CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end()));
      // Re-validating through the constructor must succeed.
      CHECK_NOTHROW(GridFn(a.grid(), std::vector<double>(a.values().begin(), a.values().end())));
    }
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const GridFn q = gen_convex_gridfn(seed, GenConfig{{-1.0, 1.0, 65}, Shape::Quadratic});
      const double a = 2.0 * q.values().back();
      CHECK(a >= 0.1);
      CHECK(a <= 10.0);
      CHECK(q.values()[32] == 0.0);
      const GridFn r = gen_convex_gridfn(seed, GenConfig{{-1.0, 1.0, 65}, Shape::Restricted});
      CHECK(r.in_domain(32));
    }
    CHECK_FALSE(std::equal(gen_convex_gridfn(std::uint64_t{1}).values().begin(),
                           gen_convex_gridfn(std::uint64_t{1}).values().end(),
                           gen_convex_gridfn(std::uint64_t{2}).values().begin()));
  }

  TEST_CASE("spd generator") {
    CHECK(gen_spd(std::uint64_t{3}, 1)(0, 0) > 0.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const std::size_t d = 1 + seed % 8;
      const double cond_max = 1.0 + 10.0 * static_cast<double>(seed);
      const SpdMatrix a = gen_spd(seed, d, cond_max);
      CHECK(condition_number(a) <= cond_max * (1.0 + 1e-8));
      const SpdMatrix b = gen_spd(seed, d, cond_max);
      CHECK((a.matrix() - b.matrix()).max_abs() == 0.0);
      CHECK(a.matrix().asymmetry() == 0.0);
    }
    CHECK_THROWS_AS(gen_spd(std::uint64_t{1}, 0), InvalidArgument);
    CHECK_THROWS_AS(gen_spd(std::uint64_t{1}, 2, 0.5), InvalidArgument);
  }

  TEST_CASE("margins and skipping") {
    TrialContext ctx(1, 0, 1e-3, false);
    const double inf = std::numeric_limits<double>::infinity();
    const GridFn x(-1.0, 1.0, {inf, 1.0, 2.0, inf});
    const GridFn y(-1.0, 1.0, {1.1, 1.5, 1.9995, inf});
    ctx.leq(x, y);
    CHECK(ctx.min_margin() == doctest::Approx(-5e-4));
    CHECK(ctx.skipped() == 1);
    CHECK(ctx.violations() == 0);
    ctx.same(x, y);
    CHECK(ctx.min_margin() == doctest::Approx(-0.5));
    CHECK(ctx.violations() == 1);
    ctx.same(x, y, true);
    CHECK(std::isinf(ctx.min_margin()));
    CHECK(ctx.checks() == 3);
  }

  TEST_CASE("registry") {
    std::set<std::string> names, tags;
    for (const SuiteInfo& s : suite_registry()) {
      CHECK(names.insert(s.name).second);
      CHECK(s.default_trials >= 1);
      CHECK(s.tolerance >= 0.0);
      tags.insert(s.tags.begin(), s.tags.end());
    }
    for (const char* tag : {"105", "110", "115", "425", "430", "435", "440", "445", "450", "455", "460", "472",
                            "475", "485", "487", "510", "513", "517", "519", "525", "530", "535", "540", "547",
                            "550", "610", "612", "615", "620", "622", "625", "627"}) {
      INFO(tag);
      CHECK(tags.count(tag) == 1);
    }
    for (const char* tag : {"prEl", "pc", "prdiamond", "prPM", "prchm", "thPC", "thG", "thU", "corRR"}) {
      INFO(tag);
      CHECK(tags.count(tag) == 1);
    }
    CHECK_THROWS_AS(find_suite("no-such-suite"), InvalidArgument);
    CHECK_THROWS_AS(run_suite("no-such-suite", 1, 1), InvalidArgument);
    CHECK_THROWS_AS(run_suite("chain-440", 0, 1), InvalidArgument);
  }

  TEST_CASE("runs are deterministic across thread counts") {
    RunOptions one, four;
    one.threads = 1;
    four.threads = 4;
    const TrialReport a = run_suite("operator-460", 30, 11, one);
    const TrialReport b = run_suite("operator-460", 30, 11, four);
    CHECK(a.min_margin == b.min_margin);
    CHECK(a.checks == b.checks);
    CHECK(a.suite_name == "operator-460");
    CHECK(a.seed == 11);
    CHECK(a.trials == 30);
    const TrialReport c = run_suite("operator-460", 30, 12, one);
    CHECK(c.min_margin != a.min_margin);
  }

  TEST_CASE("reference runs") {
    RunOptions tol;
    tol.tolerance = 1e-9;
    const TrialReport op = run_suite("operator-620", 100, 7, tol);
    CHECK(op.violations == 0);
    CHECK(op.tolerance == 1e-9);
    const TrialReport chain = run_suite("chain-440", 20, 42);
    CHECK(chain.violations == 0);
    CHECK(chain.tolerance == doctest::Approx(grid_slack(2.0 / 512)));
  }

  TEST_CASE("degenerate pairs") {
    RunOptions same;
    same.degenerate = true;
    for (const char* name : {"chain-440", "chain-513", "refine-625", "operator-460", "operator-513", "operator-620"}) {
      INFO(name);
      const TrialReport r = run_suite(name, 3, 9, same);
      CHECK(r.min_margin >= -1e-10);
      CHECK(r.violations == 0);
    }
    const GridFn f = gen_convex_gridfn(std::uint64_t{21});
    for (const GridFn& m : {harmonic(f, f, 0.3), geometric(f, f, 0.3), log_mean_harm(f, f), family_U(f, f, 0.4)})
      for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(m.values()[i] - f.values()[i]) <= 1e-12);
  }

  TEST_CASE("tolerance override") {
    CHECK_THROWS_AS(run_suite("operator-460", 2, 1, RunOptions{-1.0, false, 1}), InvalidArgument);
    const TrialReport r = run_suite("conjugate-order", 5, 1, RunOptions{0.0, false, 1});
    CHECK(r.min_margin > 0.0);
    CHECK(r.passed());
  }
}
