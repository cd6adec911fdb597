// Acceptance criteria 1-8 with pinned tolerances, seeds and runtime limits.
// Prints one PASS/FAIL line per criterion; exit 1 if any selected one fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "funmean/operator_means.hpp"
#include "funmean/quadrature.hpp"
#include "funmean/verify.hpp"

using namespace funmean;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Result {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    details.push_back(std::string(ok ? "  ok   " : "  FAIL ") + buf);
    pass = pass && ok;
  }
};

void suite_check(Result& r, const std::string& name, int trials, double tolerance) {
  RunOptions opts;
  opts.tolerance = tolerance;
  const TrialReport t = run_suite(name, trials, kSeed, opts);
  const bool ok = t.violations == 0 && t.min_margin >= -tolerance;
  r.check(ok, "%-20s trials=%d min_margin=%.3e tol=%.3e violations=%zu%s%s", name.c_str(), t.trials, t.min_margin,
          tolerance, t.violations, t.first_error.empty() ? "" : " error: ", t.first_error.c_str());
}

Result measures() {
  Result r;
  for (int k = 1; k <= 9; ++k) {
    const double l = 0.1 * k;
    const QuadRule rule = gauss_jacobi_nu(l, quadrature_defaults().nu);
    const double mass = std::abs(rule.total_mass() - 1.0);
    const double mean = std::abs(rule.integrate([](double t) { return t; }) - l);
    r.check(mass <= 1e-10 && mean <= 1e-10, "nu_%.1f  |mass - 1| = %.2e  |mean - l| = %.2e", l, mass, mean);
  }
  const QuadRule mu = mu_rule(quadrature_defaults().mu);
  const double mass = std::abs(mu.total_mass() - 1.0);
  const double mean = std::abs(mu.integrate([](double t) { return t; }) - 0.5);
  r.check(mass <= 1e-10 && mean <= 1e-10, "mu      |mass - 1| = %.2e  |mean - 1/2| = %.2e", mass, mean);
  return r;
}

Result integrals() {
  Result r;
  for (double x : {0.1, 1.0, 5.0, 50.0}) {
    const double err = std::abs(phi(x) - phi_quad(x));
    r.check(err <= 1e-10, "phi(%g)  |closed - quadrature| = %.2e", x, err);
  }
  for (const IntegralCheck& c : check_mu_identities(1e-8)) {
    const double err = std::abs(c.computed - c.expected);
    r.check(err <= 1e-8, "%-18s expected %.6f computed %.15f  |err| = %.2e", c.name.c_str(), c.expected, c.computed,
            err);
  }
  return r;
}

Result log_consistency() {
  Result r;
  const QuadRule leb = gauss_legendre(64), mu = mu_rule(64);
  std::mt19937_64 rng(kSeed);
  double worst_dt = 0.0, worst_mu = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const SpdMatrix a = gen_spd(rng, d), b = gen_spd(rng, d);
    const Matrix closed = op_log_mean(a, b).matrix();
    const double norm = closed.frobenius_norm();
    worst_dt = std::max(worst_dt, (op_log_mean_geo(a, b, leb).matrix() - closed).frobenius_norm() / norm);
    worst_mu = std::max(worst_mu, (op_log_mean_harm(a, b, mu).matrix() - closed).frobenius_norm() / norm);
  }
  r.check(worst_dt <= 1e-8, "closed vs dt form (Gauss-Legendre 64): max rel error %.2e", worst_dt);
  r.check(worst_mu <= 1e-8, "closed vs mu form (mu rule 64):        max rel error %.2e", worst_mu);
  return r;
}

Result operator_suites() {
  Result r;
  for (const char* s : {"operator-460", "operator-513", "operator-620", "operator-inverse", "prdiamond"})
    suite_check(r, s, 100, 1e-9);
  return r;
}

Result functional_suites() {
  Result r;
  const double tol = grid_slack(GridSpec{-1.0, 1.0, 513}.step());
  for (const char* s : {"chain-440", "chain-513", "refine-485", "refine-625", "lemma-610", "thRR-612", "thD-615",
                        "prPM", "prchm", "thPC", "thG", "thU"})
    suite_check(r, s, 200, tol);
  return r;
}

Result duality() {
  Result r;
  suite_check(r, "conjugate-inv", 50, 1e-6);
  suite_check(r, "biconjugate", 100, 1e-8);
  suite_check(r, "infconv-115", 50, 1e-6);
  suite_check(r, "scaling-110", 100, 1e-6);
  suite_check(r, "infconv-routes", 50, 1e-5);
  suite_check(r, "harmonic-infconv-472", 50, 1e-5);
  return r;
}

Result bridge() {
  Result r;
  const std::pair<double, double> pairs[] = {{0.5, 2.0}, {0.25, 4.0}, {1.0, 3.0}, {3.0, 0.7}};
  for (auto [kind, label] : {std::pair{MeanKind::Harmonic, "harmonic"}, std::pair{MeanKind::Geometric, "geometric"},
                             std::pair{MeanKind::Log, "log"}}) {
    for (auto [a, b] : pairs) {
      for (double l : {0.25, 0.5, 0.75}) {
        if (kind == MeanKind::Log && l != 0.5) continue;
        const BridgeReport coarse = bridge_check_1d(a, b, kind, l, GridSpec{-2.0, 2.0, 513});
        const BridgeReport fine = bridge_check_1d(a, b, kind, l, GridSpec{-2.0, 2.0, 1025});
        const double ratio = coarse.max_error / fine.max_error;
        r.check(coarse.max_error <= 1e-3 && ratio >= 3.0, "%-9s a=%-4g b=%-4g l=%-4g err(513)=%.3e err(1025)=%.3e ratio=%.2f",
                label, a, b, l, coarse.max_error, fine.max_error, ratio);
      }
    }
  }
  return r;
}

Result refinement() {
  Result r;
  for (int k = 1; k <= 9; ++k) {
    const double s = 0.1 * k;
    const Estimate e = refinement_integral(s);
    r.check(e.value >= 0.25 && e.value <= 0.5 && e.error <= 1e-8, "I_%.1f = %.12f  (error estimate %.1e)", s, e.value,
            e.error);
  }
  const Estimate big = refinement_constant();
  r.check(big.value >= 1.0 && big.value <= 2.0 && big.error <= 1e-8, "I = 4 I_0.5 = %.12f  (error estimate %.1e)",
          big.value, big.error);
  return r;
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;  // runtime limit; 0 when none is pinned
  std::function<Result()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  bool verbose = false;
  app.add_option("--criterion,-c", only, "run only these criteria (1-8)")->check(CLI::Range(1, 8));
  app.add_flag("--verbose,-v", verbose, "print every individual check");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "measure identities", 1.0, measures},
      {2, "closed-form integral checks", 1.0, integrals},
      {3, "logarithmic-mean consistency", 10.0, log_consistency},
      {4, "operator inequality suites", 30.0, operator_suites},
      {5, "functional inequality suites", 300.0, functional_suites},
      {6, "duality engine", 60.0, duality},
      {7, "bridge fidelity", 60.0, bridge},
      {8, "I_s bounds", 0.0, refinement},
  };

  bool all = true;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.check(false, "threw: %s", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0.0) r.check(secs < c.limit_s, "runtime %.2f s < %.0f s", secs, c.limit_s);
    std::printf("criterion %d %s  %s (%.2f s)\n", c.id, r.pass ? "PASS" : "FAIL", c.title, secs);
    for (const std::string& d : r.details)
      if (verbose || d.rfind("  FAIL", 0) == 0) std::printf("%s\n", d.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
