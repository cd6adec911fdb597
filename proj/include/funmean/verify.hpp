#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "funmean/grid_fn.hpp"
#include "funmean/quadratic.hpp"

namespace funmean {

enum class Shape {
  Mixed,       // |x - c|, (x - c)^2, exp(b x), max(0, x - c) combined
  Smooth,      // (x - c)^2 and exp(b x) only
  Quadratic,   // a x^2 / 2 with a in [0.1, 10]
  Restricted,  // Mixed, +inf outside a random sub-interval
};

struct GenConfig {
  GridSpec grid{-1.0, 1.0, 513};
  Shape shape = Shape::Mixed;
};

GridFn gen_convex_gridfn(std::mt19937_64& rng, const GenConfig& config = {});
GridFn gen_convex_gridfn(std::uint64_t seed, const GenConfig& config = {});

/// Q diag(lambda) Q^T, Q a product of d Householder reflections, lambda
/// log-uniform in [cond_max^{-1/2}, cond_max^{1/2}].
SpdMatrix gen_spd(std::mt19937_64& rng, std::size_t d, double cond_max = 100.0);
SpdMatrix gen_spd(std::uint64_t seed, std::size_t d, double cond_max = 100.0);

/// Slack for inequalities between grid functions of step h.
double grid_slack(double h);

struct TrialReport {
  std::string suite_name;
  std::vector<std::string> tags;
  int trials = 0;
  double min_margin = 0.0;    // most violated slack over all checks
  std::size_t checks = 0;     // margins recorded
  std::size_t violations = 0; // margins below -tolerance
  std::size_t skipped = 0;    // mixed-infinity nodes left out of comparisons
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::int64_t runtime_ms = 0;
  std::string first_error;    // message of the first trial that threw, if any

  bool passed() const { return violations == 0; }
};

/// Per-trial state handed to a suite body.
class TrialContext {
 public:
  TrialContext(std::uint64_t seed, int trial, double tolerance, bool degenerate);

  std::mt19937_64& rng() { return rng_; }
  double tolerance() const { return tolerance_; }

  /// Draws f, then g; g is a copy of f in degenerate runs.
  std::pair<GridFn, GridFn> functions(const GenConfig& config = {});
  std::pair<SpdMatrix, SpdMatrix> matrices(std::size_t d, double cond_max = 100.0);
  double uniform(double lo, double hi);
  std::size_t dimension(std::size_t lo = 2, std::size_t hi = 8);

  /// Records one margin; >= 0 means the property holds.
  void margin(double m);
  void skip(std::size_t count) { skipped_ += count; }

  /// x <= y nodewise (same grid). Nodes with exactly one +inf side are skipped.
  void leq(const GridFn& x, const GridFn& y, double slack = 0.0);
  /// |x - y| nodewise on nodes where both are finite; records -max|x - y|.
  /// Nodes finite on one side only are skipped unless `strict_domain`, in
  /// which case they record -inf.
  void same(const GridFn& x, const GridFn& y, bool strict_domain = false);
  /// psd_margin(y - x): x <= y in the Loewner order.
  void loewner(const Matrix& x, const Matrix& y);
  /// -||x - y||_F / ||y||_F.
  void rel_close(const Matrix& x, const Matrix& y);

  double min_margin() const { return min_; }
  std::size_t checks() const { return checks_; }
  std::size_t violations() const { return violations_; }
  std::size_t skipped() const { return skipped_; }

 private:
  std::mt19937_64 rng_;
  double tolerance_;
  bool degenerate_;
  double min_;
  std::size_t checks_ = 0;
  std::size_t violations_ = 0;
  std::size_t skipped_ = 0;
};

enum class SuiteFamily { Duality, Quadrature, Functional, Operator, Bridge };

struct SuiteInfo {
  std::string name;
  std::vector<std::string> tags;  // equation or result identifiers covered
  SuiteFamily family;
  std::string description;
  double tolerance;    // default
  int default_trials;
  std::function<void(TrialContext&)> body;
};

const std::vector<SuiteInfo>& suite_registry();
const SuiteInfo& find_suite(const std::string& name);  // InvalidArgument if unknown

struct RunOptions {
  std::optional<double> tolerance;
  bool degenerate = false;  // g = f and B = A in every trial
  unsigned threads = 0;     // 0: hardware concurrency
};

/// Runs `trials` seeded trials of a suite. Deterministic for fixed
/// (name, trials, seed, options) regardless of thread count.
TrialReport run_suite(const std::string& name, int trials, std::uint64_t seed, const RunOptions& options = {});

}  // namespace funmean
