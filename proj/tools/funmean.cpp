#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "funmean/error.hpp"
#include "funmean/fenchel.hpp"
#include "funmean/functional_means.hpp"
#include "funmean/operator_means.hpp"
#include "funmean/quadrature.hpp"
#include "funmean/verify.hpp"
#include "io.hpp"

using namespace funmean;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json margin_out(double m) { return std::isfinite(m) ? json(m) : json(m > 0 ? "inf" : "-inf"); }

// ---------------------------------------------------------------- conjugate

struct ConjugateArgs {
  std::string in, out;
  std::optional<double> dual_lo, dual_hi, at;
  std::optional<std::size_t> dual_n;
};

int run_conjugate(const ConjugateArgs& a) {
  const GridFn f = io::load_grid_fn(a.in);
  if (a.at) {
    io::write_json(a.out, json{{"s", *a.at}, {"value", margin_out(conjugate_at(f, *a.at).value())}});
    return kOk;
  }
  std::optional<GridSpec> dual;
  const int given = a.dual_lo.has_value() + a.dual_hi.has_value() + a.dual_n.has_value();
  if (given == 3) dual = GridSpec{*a.dual_lo, *a.dual_hi, *a.dual_n};
  else if (given != 0) throw UsageError("--dual-lo, --dual-hi and --dual-n go together");
  io::write_json(a.out, io::to_json(conjugate(f, dual)));
  return kOk;
}

// --------------------------------------------------------------------- mean

struct MeanArgs {
  std::string kind = "arith", form = "mu", out;
  std::vector<std::string> in;
  double lambda = 0.5, s = 0.5;
  std::optional<std::size_t> nodes;
};

int run_mean(const MeanArgs& a) {
  const GridFn f = io::load_grid_fn(a.in.at(0)), g = io::load_grid_fn(a.in.at(1));
  const QuadratureDefaults d = quadrature_defaults();
  const std::size_t nu_n = a.nodes.value_or(d.nu), mu_n = a.nodes.value_or(d.mu);
  const std::size_t leb_n = a.nodes ? 2 * *a.nodes : d.lebesgue;
  const bool interior = a.lambda > 0.0 && a.lambda < 1.0;
  GridFn r = [&] {
    if (a.kind == "arith") return arith(f, g, a.lambda);
    if (a.kind == "harm") return harmonic(f, g, a.lambda);
    if (a.kind == "geom")
      return interior ? geometric(f, g, a.lambda, *cached_nu(a.lambda, nu_n)) : geometric(f, g, a.lambda);
    if (a.kind == "log") {
      if (a.form == "dt") return log_mean_geo(f, g, *cached_legendre(leb_n), nu_n);
      return log_mean_harm(f, g, *cached_mu(mu_n));
    }
    if (a.kind == "G") {
      if (!interior) throw UsageError("--kind G needs 0 < lambda < 1");
      return family_G(f, g, a.lambda, a.s, *cached_nu(a.lambda, nu_n));
    }
    return family_U(f, g, a.s, *cached_mu(mu_n));
  }();
  io::write_json(a.out, io::to_json(r));
  return kOk;
}

// ------------------------------------------------------------------- opmean

struct OpMeanArgs {
  std::string kind = "arith", form = "closed", out;
  std::vector<std::string> in;
  double lambda = 0.5;
  std::optional<std::size_t> nodes;
};

int run_opmean(const OpMeanArgs& a) {
  const SpdMatrix x = io::load_spd(a.in.at(0)), y = io::load_spd(a.in.at(1));
  const QuadratureDefaults d = quadrature_defaults();
  Matrix r = [&] {
    if (a.kind == "arith") return op_arith(x, y, a.lambda).matrix();
    if (a.kind == "harm") return op_harm(x, y, a.lambda).matrix();
    if (a.kind == "geom") return op_geom(x, y, a.lambda).matrix();
    if (a.kind == "parallel") return parallel_sum(x, y).matrix();
    if (a.kind == "diamond") return op_diamond(x, y);
    if (a.form == "mu") return op_log_mean_harm(x, y, *cached_mu(a.nodes.value_or(d.mu))).matrix();
    if (a.form == "dt") return op_log_mean_geo(x, y, *cached_legendre(a.nodes ? 2 * *a.nodes : d.lebesgue)).matrix();
    return op_log_mean(x, y).matrix();
  }();
  io::write_json(a.out, io::to_json(r));
  return kOk;
}

// ---------------------------------------------------------------- quadcheck

json quadcheck_report() {
  const QuadratureDefaults d = quadrature_defaults();
  bool pass = true;
  json nu = json::array();
  for (int k = 1; k <= 9; ++k) {
    const double l = 0.1 * k;
    const auto rule = cached_nu(l, d.nu);
    const double mass = rule->total_mass(), mean = rule->integrate([](double t) { return t; });
    const bool ok = std::abs(mass - 1.0) <= 1e-10 && std::abs(mean - l) <= 1e-10;
    pass = pass && ok;
    nu.push_back({{"lambda", l}, {"mass", mass}, {"mean", mean}, {"mass_error", std::abs(mass - 1.0)},
                  {"mean_error", std::abs(mean - l)}, {"pass", ok}});
  }
  const auto mu = cached_mu(d.mu);
  const double mu_mass = mu->total_mass(), mu_mean = mu->integrate([](double t) { return t; });
  const bool mu_ok = std::abs(mu_mass - 1.0) <= 1e-10 && std::abs(mu_mean - 0.5) <= 1e-10;
  pass = pass && mu_ok;

  json phi_checks = json::array();
  for (double x : {0.1, 1.0, 5.0, 50.0}) {
    const double closed = phi(x), quad = phi_quad(x);
    const bool ok = std::abs(closed - quad) <= 1e-10;
    pass = pass && ok;
    phi_checks.push_back({{"x", x}, {"closed", closed}, {"quadrature", quad}, {"error", std::abs(closed - quad)},
                          {"pass", ok}});
  }

  json identities = json::array();
  for (const IntegralCheck& c : check_mu_identities()) {
    pass = pass && c.pass;
    identities.push_back({{"name", c.name}, {"formula", c.formula}, {"expected", c.expected},
                          {"computed", c.computed}, {"error", std::abs(c.computed - c.expected)},
                          {"error_estimate", c.error_estimate}, {"pass", c.pass}});
  }

  json is = json::array();
  for (int k = 1; k <= 9; ++k) {
    const double s = 0.1 * k;
    const Estimate e = refinement_integral(s);
    const bool ok = e.value >= 0.25 && e.value <= 0.5 && e.error <= 1e-8;
    pass = pass && ok;
    is.push_back({{"s", s}, {"value", e.value}, {"error_estimate", e.error}, {"pass", ok}});
  }
  const Estimate big = refinement_constant();
  const bool big_ok = big.value >= 1.0 && big.value <= 2.0 && big.error <= 1e-8;
  pass = pass && big_ok;

  return json{{"nodes", {{"nu", d.nu}, {"mu", d.mu}, {"lebesgue", d.lebesgue}}},
              {"nu", nu},
              {"mu", {{"mass", mu_mass}, {"mean", mu_mean}, {"mass_error", std::abs(mu_mass - 1.0)},
                      {"mean_error", std::abs(mu_mean - 0.5)}, {"pass", mu_ok}}},
              {"phi", phi_checks},
              {"mu_identities", identities},
              {"refinement", {{"I_s", is},
                              {"I", {{"value", big.value}, {"error_estimate", big.error}, {"pass", big_ok}}}}},
              {"pass", pass}};
}

int run_quadcheck(const std::string& out) {
  const json report = quadcheck_report();
  io::write_json(out, report);
  return report["pass"].get<bool>() ? kOk : kViolation;
}

// ------------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite, json_out;
  std::optional<int> trials;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  unsigned threads = 0;
  bool list = false;
};

std::vector<std::string> selected_suites(const std::string& name) {
  std::vector<std::string> names;
  if (name == "all") {
    for (const SuiteInfo& s : suite_registry()) names.push_back(s.name);
  } else {
    find_suite(name);
    names.push_back(name);
  }
  return names;
}

std::vector<TrialReport> run_suites(const std::vector<std::string>& names, std::optional<int> trials,
                                    std::uint64_t seed, std::optional<double> tolerance, unsigned threads,
                                    std::ostream& log) {
  std::vector<TrialReport> reports;
  for (const std::string& name : names) {
    RunOptions opts;
    opts.tolerance = tolerance;
    opts.threads = threads;
    const TrialReport r = run_suite(name, trials.value_or(find_suite(name).default_trials), seed, opts);
    char line[256];
    std::snprintf(line, sizeof line, "%s %-22s trials=%-4d min_margin=%-11.3e tol=%-9.2e violations=%zu (%lld ms)",
                  r.passed() ? "PASS" : "FAIL", r.suite_name.c_str(), r.trials, r.min_margin, r.tolerance,
                  r.violations, static_cast<long long>(r.runtime_ms));
    log << line << '\n';
    if (!r.first_error.empty()) log << "     error: " << r.first_error << '\n';
    reports.push_back(r);
  }
  return reports;
}

int run_verify(const VerifyArgs& a) {
  if (a.list) {
    for (const SuiteInfo& s : suite_registry()) {
      std::string tags;
      for (const std::string& t : s.tags) tags += (tags.empty() ? "" : ",") + t;
      std::printf("%-22s [%s] %s\n", s.name.c_str(), tags.c_str(), s.description.c_str());
    }
    return kOk;
  }
  if (a.suite.empty()) throw UsageError("--suite is required");
  const std::vector<TrialReport> reports = run_suites(selected_suites(a.suite), a.trials, a.seed, a.tolerance,
                                                      a.threads, std::cout);
  bool pass = true;
  json out = json::array();
  for (const TrialReport& r : reports) {
    pass = pass && r.passed();
    out.push_back(io::to_json(r));
  }
  if (!a.json_out.empty()) io::write_json(a.json_out, json{{"seed", a.seed}, {"suites", out}, {"pass", pass}});
  return pass ? kOk : kViolation;
}

// ------------------------------------------------------------------- report

int run_report(std::uint64_t seed, std::optional<int> trials, const std::string& out, unsigned threads) {
  const json quad = quadcheck_report();
  const std::vector<TrialReport> reports =
      run_suites(selected_suites("all"), trials, seed, std::nullopt, threads, std::cerr);

  struct TagState {
    bool pass = true;
    double margin = std::numeric_limits<double>::infinity();
    std::vector<std::string> sources;
  };
  std::map<std::string, TagState> tags;
  json suites = json::array();
  for (const TrialReport& r : reports) {
    suites.push_back(io::to_json(r));
    for (const std::string& t : r.tags) {
      TagState& s = tags[t];
      s.pass = s.pass && r.passed();
      s.margin = std::min(s.margin, r.min_margin);
      s.sources.push_back(r.suite_name);
    }
  }
  // Every mu identity in quadcheck, including the printed u form, feeds 547.
  TagState& t547 = tags["547"];
  for (const json& c : quad["mu_identities"]) {
    t547.pass = t547.pass && c["pass"].get<bool>();
    t547.margin = std::min(t547.margin, -c["error"].get<double>());
  }
  t547.sources.push_back("quadcheck");

  bool pass = quad["pass"].get<bool>();
  json tag_json = json::object();
  for (const auto& [tag, s] : tags) {
    pass = pass && s.pass;
    tag_json[tag] = {{"pass", s.pass}, {"margin", margin_out(s.margin)}, {"sources", s.sources}};
  }
  const json report{{"schema", "funmean-report/1"},
                    {"seed", seed},
                    {"trials", trials ? json(*trials) : json(nullptr)},
                    {"pass", pass},
                    {"tags", tag_json},
                    {"suites", suites},
                    {"quadcheck", quad}};
  io::write_json(out, report);
  return pass ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional and operator means: conjugation, means, quadrature checks and verification"};
  app.require_subcommand(1);

  ConjugateArgs conj;
  auto* c = app.add_subcommand("conjugate", "Legendre-Fenchel conjugate of a grid function");
  c->add_option("--in", conj.in, "input grid function (.json or .csv)")->required();
  c->add_option("--out", conj.out, "output file (default stdout)");
  c->add_option("--dual-lo", conj.dual_lo, "dual grid lower end");
  c->add_option("--dual-hi", conj.dual_hi, "dual grid upper end");
  c->add_option("--dual-n", conj.dual_n, "dual grid node count")->check(CLI::Range(2, 1 << 24));
  c->add_option("--at", conj.at, "evaluate the conjugate at one slope instead");

  MeanArgs mean;
  auto* m = app.add_subcommand("mean", "Mean of two grid functions");
  m->add_option("--kind", mean.kind)->check(CLI::IsMember({"arith", "harm", "geom", "log", "G", "U"}));
  m->add_option("--lambda", mean.lambda)->check(CLI::Range(0.0, 1.0));
  m->add_option("--s", mean.s)->check(CLI::Range(0.0, 1.0));
  m->add_option("--nodes", mean.nodes, "quadrature nodes (nu and mu; dt rule gets twice as many)")
      ->check(CLI::Range(1, 512));
  m->add_option("--form", mean.form, "integral form of the log mean")->check(CLI::IsMember({"mu", "dt"}));
  m->add_option("--in", mean.in, "two grid functions f g")->required()->expected(2);
  m->add_option("--out", mean.out, "output file (default stdout)");

  OpMeanArgs op;
  auto* o = app.add_subcommand("opmean", "Mean of two SPD matrices");
  o->add_option("--kind", op.kind)->check(CLI::IsMember({"arith", "harm", "geom", "log", "parallel", "diamond"}));
  o->add_option("--lambda", op.lambda)->check(CLI::Range(0.0, 1.0));
  o->add_option("--form", op.form, "log mean: closed form or quadrature")
      ->check(CLI::IsMember({"closed", "mu", "dt"}));
  o->add_option("--nodes", op.nodes)->check(CLI::Range(1, 512));
  o->add_option("--in", op.in, "two matrices A B")->required()->expected(2);
  o->add_option("--out", op.out, "output file (default stdout)");

  std::string quad_out;
  auto* q = app.add_subcommand("quadcheck", "Measure identities and closed-form integral checks");
  q->add_option("--out,--json", quad_out, "output file (default stdout)");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Randomized property suites");
  v->add_option("--suite", ver.suite, "suite name or 'all'");
  v->add_option("--trials", ver.trials)->check(CLI::Range(1, 1000000));
  auto* seed_opt = v->add_option("--seed", ver.seed);
  v->add_option("--json", ver.json_out, "write the reports as JSON");
  v->add_option("--tolerance", ver.tolerance)->check(CLI::NonNegativeNumber);
  v->add_option("--threads", ver.threads, "worker threads (0: all cores)");
  v->add_flag("--list", ver.list, "list registered suites");

  std::uint64_t report_seed = 0;
  std::optional<int> report_trials;
  std::string report_out;
  unsigned report_threads = 0;
  auto* r = app.add_subcommand("report", "quadcheck plus every suite, keyed by tag");
  r->add_option("--seed", report_seed)->required();
  r->add_option("--trials", report_trials)->check(CLI::Range(1, 1000000));
  r->add_option("--out", report_out, "output file (default stdout)");
  r->add_option("--threads", report_threads);

  try {
    app.parse(argc, argv);
    if (*v && !ver.list && seed_opt->count() == 0) throw UsageError("verify: --seed is required");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*c) return run_conjugate(conj);
    if (*m) return run_mean(mean);
    if (*o) return run_opmean(op);
    if (*q) return run_quadcheck(quad_out);
    if (*v) return run_verify(ver);
    if (*r) return run_report(report_seed, report_trials, report_out, report_threads);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConditioningError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
