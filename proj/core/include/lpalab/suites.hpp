#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpalab/binom.hpp"

namespace lpalab {

// Named verification suites. Each one sweeps a default grid (overridable per
// field) and folds the outcome into a handful of aggregate LemmaReports; a
// suite passes when every report passes. The names are the CLI vocabulary of
// `verify --suite`.

struct SuiteResult {
  std::string suite;
  std::vector<LemmaReport> reports;
  bool all_pass() const;
};

const std::vector<std::string>& suite_names();
bool is_suite_name(const std::string& name);

// Tie-weighted comparison probabilities: ratio monotonicity in the threshold
// and normalization of the two no-threshold probabilities, over the full
// (n, n', p, rho) grid. Aggregates the ratio checks into one report per n.
struct BisGrid {
  int n_lo = 2;
  int n_hi = 30;
  std::vector<double> p;    // empty -> 0.05, 0.10, ..., 0.95
  std::vector<double> rho;  // empty -> 0, 1, 2, 5, 10
  double ratio_tolerance = 1e-10;
  double norm_tolerance = 1e-12;
};
SuiteResult suite_bis(const BisGrid& grid = {});

// Lower bound 1/2 + 1/5 min{1, (a1-a2)p/sqrt((a1+a2)p)} against the exact
// difference tail at each (a1, a2, p) x m point.
struct DiffGrid {
  struct Point {
    std::int64_t a1;
    std::int64_t a2;
    double p;
  };
  std::vector<Point> points;     // empty -> the three default triples
  std::vector<std::int64_t> m;   // empty -> 0, 1, 2, 5
};
SuiteResult suite_diff(const DiffGrid& grid = {});

// Normal lower bound below the exact upper tail (suite "slud") and the
// phi-form upper bound above it (suite "chernoff"), on a shared grid of
// (n, p) pairs with t evenly spaced over [0, n - 2np]. Both sides of each
// comparison refer to the same integer event {X >= ceil(np + t)}: the bound
// is evaluated at the effective deviation ceil(np + t) - np.
struct TailSandwichGrid {
  std::vector<std::int64_t> n;  // empty -> 100, 500, 2000
  std::vector<double> p;        // empty -> 0.05, 0.10, 0.25
  int t_points = 20;
  double tolerance = 1e-9;
};
SuiteResult suite_slud(const TailSandwichGrid& grid = {});
SuiteResult suite_chernoff(const TailSandwichGrid& grid = {});

// Synthetic drifting family: z_l = n - (l-1)np + (l-1)(l-2)np^2/2 rounded to
// integer trials, Z_l ~ Bin(z_l, p) independent, first `count` indices at the
// nominal scale. Shared by the "max" and "gap" suites.
struct DriftingFamilyGrid {
  std::size_t n = 100000000;  // np = 1e4, np^3 = 1e-4
  double p = 1e-4;
  std::size_t count = 2000;
};
std::vector<std::int64_t> drifting_family(const DriftingFamilyGrid& grid);

// Median of the family maximum, normalized by sqrt(np log(1/np^3)) around np,
// against [median_lo, median_hi]; and the restricted family l >= ceil(k_*)
// must have a strictly smaller normalized median.
struct MaxGrid {
  DriftingFamilyGrid family;
  double median_lo = 0.7;
  double median_hi = 1.3;
};
SuiteResult suite_max(const MaxGrid& grid = {});

// P(first max - second max >= 2 gamma_n) >= prob_floor by exact windowed
// summation, cross-checked by Monte Carlo within mc_sigmas standard errors.
struct GapGrid {
  DriftingFamilyGrid family;
  double prob_floor = 0.8;
  std::int64_t mc_samples = 200000;
  std::uint64_t mc_seed = 7;
  double mc_sigmas = 3.0;
};
SuiteResult suite_gap(const GapGrid& grid = {});

// Exact conditional monotonicity of s -> P(M2 <= M1 - t | M1 = s) plus cdf
// log-concavity of a reference binomial.
struct MonotoneGrid {
  std::vector<std::int64_t> z;  // empty -> 20, 18, 16
  double p = 0.3;
  std::vector<std::int64_t> t;  // empty -> 1, 2, 3
  std::int64_t s_lo = 4;
  std::int64_t s_hi = 16;
  std::int64_t concavity_trials = 50;
  double concavity_p = 0.2;
  std::int64_t concavity_t_lo = 1;
  std::int64_t concavity_t_hi = 5;
  double tolerance = 1e-12;
};
SuiteResult suite_monotone(const MonotoneGrid& grid = {});

// Monte Carlo winner frequencies of the drifted-normal argmax against
// reference values from 200-point Gauss-Hermite quadrature (three levels,
// c = 1), plus shape checks at twelve levels: positive, decreasing in the
// level index, summing to one.
struct ArgmaxGrid {
  double c = 1.0;
  std::int64_t samples = 2000000;
  std::uint64_t seed = 11;
  double sigmas = 4.0;
};
SuiteResult suite_argmax(const ArgmaxGrid& grid = {});

// Dispatch by suite name over the default grids; throws std::invalid_argument
// for an unknown name.
SuiteResult run_suite(const std::string& name);

}  // namespace lpalab
