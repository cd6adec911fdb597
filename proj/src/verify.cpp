#include "funmean/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "funmean/error.hpp"
#include "funmean/operator_means.hpp"
#include "suites.hpp"

namespace funmean {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double draw(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<double> mixed_values(std::mt19937_64& rng, const GridSpec& grid, bool smooth) {
  const double span = grid.hi - grid.lo;
  auto centre = [&] { return grid.lo + span * draw(rng, 0.1, 0.9); };
  const double c1 = centre(), w1 = smooth ? 0.0 : draw(rng, 0.0, 2.0);
  const double c2 = centre(), w2 = draw(rng, 0.1, 3.0);
  const double b3 = draw(rng, -2.0, 2.0), w3 = draw(rng, 0.0, 1.0);
  const double c4 = centre(), w4 = smooth ? 0.0 : draw(rng, 0.0, 2.0);
  const double shift = draw(rng, -1.0, 1.0);
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.node(i);
    v[i] = w1 * std::abs(x - c1) + w2 * (x - c2) * (x - c2) + w3 * std::exp(b3 * x) + w4 * std::max(0.0, x - c4) +
           shift;
  }
  return v;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

GridFn gen_convex_gridfn(std::mt19937_64& rng, const GenConfig& config) {
  config.grid.validate();
  const GridSpec& grid = config.grid;
  switch (config.shape) {
    case Shape::Quadratic: {
      const double a = std::exp(draw(rng, std::log(0.1), std::log(10.0)));
      return GridFn::sample(grid, [a](double x) { return 0.5 * a * x * x; });
    }
    case Shape::Smooth:
    case Shape::Mixed:
      return convexify(grid, mixed_values(rng, grid, config.shape == Shape::Smooth));
    case Shape::Restricted: {
      std::vector<double> v = mixed_values(rng, grid, false);
      // Domains always contain the box centre so pairs overlap.
      const double mid = 0.5 * (grid.lo + grid.hi), half = 0.5 * (grid.hi - grid.lo);
      const double a = mid - half * draw(rng, 0.1, 1.0);
      const double b = mid + half * draw(rng, 0.1, 1.0);
      for (std::size_t i = 0; i < grid.n; ++i)
        if (grid.node(i) < a || grid.node(i) > b) v[i] = kInf;
      return convexify(grid, v);
    }
  }
  throw InvalidArgument("gen_convex_gridfn: unknown shape");
}

GridFn gen_convex_gridfn(std::uint64_t seed, const GenConfig& config) {
  std::mt19937_64 rng(seed);
  return gen_convex_gridfn(rng, config);
}

SpdMatrix gen_spd(std::mt19937_64& rng, std::size_t d, double cond_max) {
  if (d == 0) throw InvalidArgument("gen_spd: d must be >= 1");
  if (!(cond_max >= 1.0)) throw InvalidArgument("gen_spd: cond_max must be >= 1");
  Matrix q = Matrix::identity(d);
  std::normal_distribution<double> normal;
  for (std::size_t r = 0; r < d; ++r) {
    std::vector<double> v(d);
    double nn = 0.0;
    while (nn < 1e-8) {
      nn = 0.0;
      for (double& x : v) {
        x = normal(rng);
        nn += x * x;
      }
    }
    // q <- q (I - 2 v v^T / |v|^2)
    const std::vector<double> qv = q * v;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) q(i, j) -= 2.0 * qv[i] * v[j] / nn;
  }
  const double half_log = 0.5 * std::log(cond_max);
  std::vector<double> lam(d);
  for (double& l : lam) l = std::exp(draw(rng, -half_log, half_log));
  return SpdMatrix(from_eigen(q, lam));
}

SpdMatrix gen_spd(std::uint64_t seed, std::size_t d, double cond_max) {
  std::mt19937_64 rng(seed);
  return gen_spd(rng, d, cond_max);
}

double grid_slack(double h) { return 10.0 * h * h + 1e-8; }

TrialContext::TrialContext(std::uint64_t seed, int trial, double tolerance, bool degenerate)
    : rng_(trial_seed(seed, trial)), tolerance_(tolerance), degenerate_(degenerate), min_(kInf) {}

std::pair<GridFn, GridFn> TrialContext::functions(const GenConfig& config) {
  GridFn f = gen_convex_gridfn(rng_, config);
  GridFn g = gen_convex_gridfn(rng_, config);
  if (degenerate_) return {f, f};
  return {std::move(f), std::move(g)};
}

std::pair<SpdMatrix, SpdMatrix> TrialContext::matrices(std::size_t d, double cond_max) {
  SpdMatrix a = gen_spd(rng_, d, cond_max);
  SpdMatrix b = gen_spd(rng_, d, cond_max);
  if (degenerate_) return {a, a};
  return {std::move(a), std::move(b)};
}

double TrialContext::uniform(double lo, double hi) { return draw(rng_, lo, hi); }

std::size_t TrialContext::dimension(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
}

void TrialContext::margin(double m) {
  ++checks_;
  if (std::isnan(m)) m = -kInf;
  min_ = std::min(min_, m);
  if (m < -tolerance_) ++violations_;
}

void TrialContext::leq(const GridFn& x, const GridFn& y, double slack) {
  if (!(x.grid() == y.grid())) throw InvalidArgument("TrialContext::leq: grids differ");
  double m = kInf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = x.values()[i], b = y.values()[i];
    const bool ia = std::isinf(a), ib = std::isinf(b);
    if (ia && ib) continue;
    if (ia != ib) {
      ++skipped_;
      continue;
    }
    m = std::min(m, b - a + slack);
  }
  margin(m);
}

void TrialContext::same(const GridFn& x, const GridFn& y, bool strict_domain) {
  if (!(x.grid() == y.grid())) throw InvalidArgument("TrialContext::same: grids differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = x.values()[i], b = y.values()[i];
    const bool ia = std::isinf(a), ib = std::isinf(b);
    if (ia && ib) continue;
    if (ia != ib) {
      if (strict_domain) worst = kInf;
      else ++skipped_;
      continue;
    }
    worst = std::max(worst, std::abs(a - b));
  }
  margin(-worst);
}

void TrialContext::loewner(const Matrix& x, const Matrix& y) { margin(psd_margin(y - x)); }

void TrialContext::rel_close(const Matrix& x, const Matrix& y) {
  margin(-(x - y).frobenius_norm() / y.frobenius_norm());
}

const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> registry = [] {
    std::vector<SuiteInfo> all;
    for (auto part : {suites::duality, suites::quadrature, suites::functional, suites::operators, suites::bridge}) {
      std::vector<SuiteInfo> v = part();
      for (SuiteInfo& s : v) all.push_back(std::move(s));
    }
    return all;
  }();
  return registry;
}

const SuiteInfo& find_suite(const std::string& name) {
  for (const SuiteInfo& s : suite_registry())
    if (s.name == name) return s;
  throw InvalidArgument("unknown suite '" + name + "'");
}

TrialReport run_suite(const std::string& name, int trials, std::uint64_t seed, const RunOptions& options) {
  const SuiteInfo& suite = find_suite(name);
  if (trials < 1) throw InvalidArgument("run_suite: trials must be >= 1");
  const double tolerance = options.tolerance.value_or(suite.tolerance);
  if (!(tolerance >= 0.0)) throw InvalidArgument("run_suite: tolerance must be >= 0");

  const auto start = std::chrono::steady_clock::now();
  struct Outcome {
    double min_margin = kInf;
    std::size_t checks = 0, violations = 0, skipped = 0;
    std::string error;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < trials; t = next++) {
      Outcome& out = outcomes[static_cast<std::size_t>(t)];
      TrialContext ctx(seed, t, tolerance, options.degenerate);
      try {
        suite.body(ctx);
        out.min_margin = ctx.min_margin();
      } catch (const std::exception& e) {
        // A throwing trial counts as one violated check.
        out.error = e.what();
        out.min_margin = -kInf;
      }
      out.checks = ctx.checks() + (out.error.empty() ? 0 : 1);
      out.violations = ctx.violations() + (out.error.empty() ? 0 : 1);
      out.skipped = ctx.skipped();
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(trials));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  TrialReport report;
  report.suite_name = suite.name;
  report.tags = suite.tags;
  report.trials = trials;
  report.tolerance = tolerance;
  report.seed = seed;
  report.min_margin = kInf;
  for (const Outcome& o : outcomes) {
    report.min_margin = std::min(report.min_margin, o.min_margin);
    report.checks += o.checks;
    report.violations += o.violations;
    report.skipped += o.skipped;
    if (report.first_error.empty() && !o.error.empty()) report.first_error = o.error;
  }
  report.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

}  // namespace funmean
