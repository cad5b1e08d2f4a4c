#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace lpalab {

struct BinomialSpec {
  std::int64_t trials = 0;
  double prob = 0.0;
};

// log P(X = x); -inf outside the support. Saddle-point form (Stirling error
// plus stable deviance terms), relative accuracy ~1e-14 even for trials ~1e9
// where naive lgamma differencing loses seven digits to cancellation.
double binom_pmf_log(const BinomialSpec& b, std::int64_t x);

// P(X <= t). Absolute error <= 1e-13, nondecreasing in t. Summation is
// anchored at the mode and walks outward adaptively, so cost is O(sigma).
double binom_cdf(const BinomialSpec& b, std::int64_t t);

// P(X >= t), same accuracy contract as binom_cdf.
double binom_sf(const BinomialSpec& b, std::int64_t t);

double normal_cdf(double x);
double normal_sf(double x);

// (t+1)log(t+1) - t for t >= -1 (value 1 at the t = -1 limit).
double chernoff_phi(double t);

struct ChernoffBounds {
  double upper;  // P(X >= mean + t) <= upper
  double lower;  // P(X <= mean - t) <= lower
};

// Tail bounds exp(-mean * phi(+-t/mean)). The _simple variant uses the weaker
// closed forms exp(-t^2/(2(mean + t/3))) and exp(-t^2/(2 mean)).
ChernoffBounds chernoff_bounds(double mean, double t);
ChernoffBounds chernoff_bounds_simple(double mean, double t);

// Normal lower bound 1 - Phi(t / sqrt(np(1-p))) for the upper tail of
// Bin(n, p). Requires p <= 1/4 and 0 <= t <= n - 2np; throws std::domain_error
// outside that window.
double slud_bound(std::int64_t n, double p, double t);

struct TieWeighted {
  double p_x = 0.0;
  double p_y = 0.0;
};

// For independent X ~ Bin(n, p), Y ~ Bin(n_prime, p) and integer m >= -1:
//   p_x = P(X > m, X > Y) + 1/2 P(X = Y > m)
//       + 1/(rho+1) P(X = m > Y) + 1/(rho+2) P(X = Y = m)
// and symmetrically for p_y. Exact double sum over the joint pmf, O(n*n').
TieWeighted tie_weighted_probs(int n, int n_prime, double p, std::int64_t m, double rho);

struct LemmaReport {
  std::string name;
  std::uint64_t checks = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  double error_bar = 0.0;
  bool pass = false;
  std::vector<std::string> notes;  // worst offenders, capped at a handful
};

// Checks p_x(m)/p_y(m) >= p_x(-1)/p_y(-1) for every m in [0, n_prime].
// A zero denominator counts as +infinity.
LemmaReport verify_tie_ratio(int n, int n_prime, double p, double rho,
                             double tolerance = 1e-10);

struct DiffDistribution {
  std::int64_t a1 = 0;
  std::int64_t a2 = 0;
  double p = 0.0;
  std::int64_t lo = 0;  // pmf[i] = P(X1 - X2 = lo + i)
  std::vector<double> pmf;
  double truncated_mass = 0.0;  // certified bound on factor mass outside the windows
};

// Distribution of X1 - X2 for independent X1 ~ Bin(a1, p), X2 ~ Bin(a2, p).
// Factors use full support when small and a mean +- 14 sigma window otherwise,
// keeping the certified truncated_mass below 1e-25; requires a1 >= a2 >= 0.
DiffDistribution diff_binomial_dist(std::int64_t a1, std::int64_t a2, double p);

// P(X1 - X2 >= m), absolute error bounded by d.truncated_mass.
double diff_tail(const DiffDistribution& d, std::int64_t m);
double diff_mean(const DiffDistribution& d);

// Closed-form lower bounds for P(X1 - X2 >= m):
//   diff_lower_bound:   1/2 + 1/5 min{1, (a1-a2)p / sqrt((a1+a2)p)}
//   diff_normal_bound:  Phi(((a1-a2)p - m) / sqrt((a1+a2)p(1-p))) - 2 zeta / sqrt(a2 p)
// with zeta the Berry-Esseen constant (0.4748 by default).
double diff_lower_bound(std::int64_t a1, std::int64_t a2, double p);
double diff_normal_bound(std::int64_t a1, std::int64_t a2, double p, std::int64_t m,
                         double zeta = 0.4748);

struct ProbEstimate {
  double value = 0.0;
  double error_bar = 0.0;
};

// P(max_l Z_l <= t) for independent Z_l ~ Bin(z[l], p), as a product of cdfs
// accumulated in log space. Indices whose mean is far below t contribute a
// factor ~1; their discarded log-mass goes into error_bar (kept <= 1e-9).
ProbEstimate max_binomials_cdf(std::span<const std::int64_t> z, double p, std::int64_t t);

// Smallest integer t with P(max <= t) >= q, by bisection.
std::int64_t max_binomials_quantile(std::span<const std::int64_t> z, double p, double q);

// P(first max - second max >= g) with a strict-max convention: for g <= 1 this
// is the probability of a unique maximiser. Exact windowed sum
//   sum_l sum_s pmf_l(s) prod_{j != l} cdf_j(min(s - g, s - 1))
// with per-index 13-sigma windows; error_bar tracks everything discarded.
// A single-entry family reports probability 1.
ProbEstimate top_two_gap_prob(std::span<const std::int64_t> z, double p, double g);

// Monte Carlo estimate of the same probability (alias-table sampling of each
// windowed factor); error_bar is one standard error.
ProbEstimate mc_top_two_gap(std::span<const std::int64_t> z, double p, double g,
                            std::int64_t samples, std::uint64_t seed);

// For the family max M1 and runner-up M2, checks that
//   s -> P(M2 <= M1 - t | M1 = s)
// is nondecreasing over [s_lo, s_hi] (exact full-support sums; meant for
// families with sum z_l <= ~1e4). t = 0 is trivially constant 1.
LemmaReport conditional_gap_monotone(std::span<const std::int64_t> z, double p,
                                     std::int64_t t, std::int64_t s_lo, std::int64_t s_hi,
                                     double tolerance = 1e-12);

// Checks F(s-t) F(s+1) <= F(s+1-t) F(s) for the Bin cdf F, all s in the
// support and t in [t_lo, t_hi].
LemmaReport cdf_log_concavity(const BinomialSpec& b, std::int64_t t_lo, std::int64_t t_hi,
                              double tolerance = 1e-12);

// Monte Carlo frequencies of argmax_i (N_i + (levels - i) c^{3/2}), i = 1..levels,
// for iid standard normals N_i. Index i wins when the drift favours small i.
std::vector<double> gaussian_argmax_winner_dist(double c, int levels,
                                                std::int64_t samples, std::uint64_t seed);

}  // namespace lpalab
