#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lpalab/binom.hpp"
#include "oracle_constants.hpp"

using namespace lpalab;

TEST_CASE("pmf log at frozen spots") {
  CHECK(binom_pmf_log({1, 0.5}, 1) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK(binom_pmf_log({10, 0.0}, 0) == doctest::Approx(0.0));
  CHECK(binom_pmf_log({4, 0.25}, 5) == -std::numeric_limits<double>::infinity());
  CHECK(binom_pmf_log({4, 0.25}, -1) == -std::numeric_limits<double>::infinity());
  CHECK(binom_pmf_log({4, 0.25}, 2) == doctest::Approx(kPmfLogSpots[0]).epsilon(1e-13));
  CHECK(binom_pmf_log({1000, 0.1}, 100) == doctest::Approx(kPmfLogSpots[1]).epsilon(1e-13));
  CHECK(binom_pmf_log({100000000, 0.0001}, 10000) ==
        doctest::Approx(kPmfLogSpots[2]).epsilon(1e-12));
  CHECK(binom_pmf_log({1000000, 0.3}, 300000) ==
        doctest::Approx(kPmfLogSpots[3]).epsilon(1e-12));
}

TEST_CASE("cdf and sf at frozen spots") {
  const std::size_t count = sizeof(kCdfSpots) / sizeof(kCdfSpots[0]);
  for (std::size_t i = 0; i < count; ++i) {
    const auto trials = static_cast<std::int64_t>(kCdfSpotArgs[i][0]);
    const double p = kCdfSpotArgs[i][1];
    const auto t = static_cast<std::int64_t>(kCdfSpotArgs[i][2]);
    INFO("spot ", i, ": trials=", trials, " p=", p, " t=", t);
    CHECK(std::fabs(binom_cdf({trials, p}, t) - kCdfSpots[i]) < 1e-13);
  }
  CHECK(std::fabs(binom_sf({100000000, 0.0001}, 10100) - kSfSpot_1e8) < 1e-13);
  CHECK(std::fabs(binom_sf({2000, 0.25}, 520) - kSfSpot_2000) < 1e-13);

  CHECK(binom_cdf({7, 0.3}, 7) == doctest::Approx(1.0));
  CHECK(binom_cdf({7, 0.3}, 100) == doctest::Approx(1.0));
  CHECK(binom_cdf({7, 0.3}, -1) == doctest::Approx(0.0));
  CHECK(binom_cdf({2, 0.5}, 0) == doctest::Approx(0.25).epsilon(1e-14));

  // Monotone nondecreasing in t around the mode.
  double prev = 0.0;
  for (std::int64_t t = 80; t <= 120; ++t) {
    const double c = binom_cdf({1000, 0.1}, t);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("tie-weighted probabilities against the frozen grid") {
  const std::size_t count = sizeof(kTieGridPX) / sizeof(kTieGridPX[0]);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& a = kTieGridArgs[i];
    const auto tw = tie_weighted_probs(static_cast<int>(a[0]), static_cast<int>(a[1]), a[2],
                                       static_cast<std::int64_t>(a[3]), a[4]);
    CHECK(std::fabs(tw.p_x - kTieGridPX[i]) < 1e-14);
    CHECK(std::fabs(tw.p_y - kTieGridPY[i]) < 1e-14);
  }
}

TEST_CASE("no-threshold probabilities are complementary") {
  for (const double p : {0.1, 0.5, 0.9}) {
    for (const double rho : {0.0, 2.0, 10.0}) {
      for (int n = 2; n <= 10; n += 4) {
        const auto tw = tie_weighted_probs(n, n - 1, p, -1, rho);
        CHECK(std::fabs(tw.p_x + tw.p_y - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("threshold ratio monotonicity reports") {
  const auto small = verify_tie_ratio(1, 0, 0.5, 0.0);
  CHECK(small.pass);
  CHECK(small.checks == 1);  // only M = 0
  CHECK(verify_tie_ratio(2, 1, 0.5, 1.0).pass);
  CHECK(verify_tie_ratio(9, 4, 0.7, 3.0).pass);
  // Degenerate density: all mass at (0,0); the zero-denominator convention
  // keeps every ratio well-defined.
  CHECK(verify_tie_ratio(1, 0, 0.0, 0.0).pass);
  CHECK(verify_tie_ratio(5, 3, 0.0, 2.0).pass);
}

TEST_CASE("difference distribution at the reference triples") {
  const std::int64_t ms[] = {0, 1, 2, 5};
  const std::int64_t as[][2] = {{2000, 1500}, {5000, 4000}, {1200, 800}};
  const double ps[] = {0.05, 0.02, 0.1};
  std::size_t idx = 0;
  for (int fam = 0; fam < 3; ++fam) {
    const auto d = diff_binomial_dist(as[fam][0], as[fam][1], ps[fam]);
    CHECK(d.truncated_mass < 1e-25);
    for (const auto m : ms) {
      CHECK(std::fabs(diff_tail(d, m) - kDiffTails[idx]) < 1e-11);
      CHECK(diff_tail(d, m) >= kDiffBounds[idx]);
      ++idx;
    }
  }
  const auto d = diff_binomial_dist(2000, 1500, 0.05);
  CHECK(std::fabs(diff_tail(d, 1) - kDiffSpotMp) < 1e-12);
  CHECK(diff_lower_bound(2000, 1500, 0.05) == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("difference distribution moment identities") {
  const std::int64_t triples[][2] = {{2000, 1500}, {300, 300}, {50, 20}};
  const double ps[] = {0.05, 0.3, 0.6};
  for (int i = 0; i < 3; ++i) {
    const auto a1 = triples[i][0];
    const auto a2 = triples[i][1];
    const double p = ps[i];
    const auto d = diff_binomial_dist(a1, a2, p);
    double sum = 0.0, mean = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < d.pmf.size(); ++j) {
      const double x = static_cast<double>(d.lo) + static_cast<double>(j);
      sum += d.pmf[j];
      mean += x * d.pmf[j];
      m2 += x * x * d.pmf[j];
    }
    CHECK(std::fabs(sum - 1.0) < 1e-12);
    const double want_mean = static_cast<double>(a1 - a2) * p;
    const double want_var = static_cast<double>(a1 + a2) * p * (1.0 - p);
    if (want_mean != 0.0) {
      CHECK(std::fabs(mean - want_mean) < 1e-9 * std::fabs(want_mean));
    } else {
      CHECK(std::fabs(mean) < 1e-9);
    }
    CHECK(std::fabs(m2 - mean * mean - want_var) < 1e-9 * want_var);
    CHECK(diff_mean(d) == doctest::Approx(want_mean).epsilon(1e-9));
  }
}

TEST_CASE("equal-size difference is symmetric") {
  const auto d = diff_binomial_dist(300, 300, 0.3);
  double below = 0.0;
  for (std::size_t j = 0; j < d.pmf.size(); ++j) {
    if (static_cast<double>(d.lo) + static_cast<double>(j) <= -1.0) below += d.pmf[j];
  }
  CHECK(std::fabs(diff_tail(d, 1) - below) < 1e-12);
}

TEST_CASE("normal tail bounds") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(normal_cdf(3.0) + normal_sf(3.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(slud_bound(4, 0.25, 1.0) == doctest::Approx(kSludExampleBound).epsilon(1e-12));
  CHECK(binom_sf({4, 0.25}, 2) == doctest::Approx(kSludExampleExact).epsilon(1e-14));
  CHECK(binom_sf({4, 0.25}, 2) >= slud_bound(4, 0.25, 1.0));
  CHECK_THROWS_AS(slud_bound(100, 0.3, 1.0), std::domain_error);
  CHECK_THROWS_AS(slud_bound(100, 0.25, 51.0), std::domain_error);
  CHECK_THROWS_AS(slud_bound(100, 0.25, -1.0), std::domain_error);
}

TEST_CASE("upper tail bounds") {
  CHECK(chernoff_phi(0.0) == doctest::Approx(0.0));
  const auto at0 = chernoff_bounds(100.0, 0.0);
  CHECK(at0.upper == doctest::Approx(1.0));
  CHECK(at0.lower == doctest::Approx(1.0));
  CHECK(chernoff_bounds_simple(100.0, 20.0).upper ==
        doctest::Approx(kChernoffSimpleExample).epsilon(1e-12));
  CHECK(binom_sf({1000, 0.1}, 120) <= chernoff_bounds_simple(100.0, 20.0).upper);
  CHECK(binom_sf({1000, 0.1}, 120) <= chernoff_bounds(100.0, 20.0).upper);
  // The phi form dominates the simplified form on the upper side.
  CHECK(chernoff_bounds(100.0, 20.0).upper <= chernoff_bounds_simple(100.0, 20.0).upper);
}

TEST_CASE("family maximum cdf") {
  const std::int64_t single[] = {2000};
  for (const std::int64_t t : {480, 500, 520}) {
    CHECK(max_binomials_cdf(single, 0.25, t).value ==
          doctest::Approx(binom_cdf({2000, 0.25}, t)).epsilon(1e-12));
  }
  const std::int64_t pair[] = {100, 100};
  for (int i = 0; i < 4; ++i) {
    const std::int64_t ts[] = {8, 10, 12, 15};
    const auto r = max_binomials_cdf(pair, 0.1, ts[i]);
    CHECK(std::fabs(r.value - kSmallMaxCdf[i]) < 1e-12);
    const double one = binom_cdf({100, 0.1}, ts[i]);
    CHECK(r.value == doctest::Approx(one * one).epsilon(1e-12));
  }
  // Quantile inverts the cdf.
  const std::int64_t z[] = {2000, 1900, 1800};
  const auto q = max_binomials_quantile(z, 0.25, 0.5);
  CHECK(max_binomials_cdf(z, 0.25, q).value >= 0.5);
  CHECK(max_binomials_cdf(z, 0.25, q - 1).value < 0.5);
}

TEST_CASE("top-two gap probabilities") {
  const std::int64_t one[] = {50};
  CHECK(top_two_gap_prob(one, 0.5, 3.0).value == doctest::Approx(1.0));
  const std::int64_t z11[] = {1, 1};
  CHECK(top_two_gap_prob(z11, 0.5, 1.0).value == doctest::Approx(0.5).epsilon(1e-12));
  const std::int64_t z3[] = {20, 18, 16};
  for (int g = 1; g <= 3; ++g) {
    const auto r = top_two_gap_prob(z3, 0.3, g);
    CHECK(std::fabs(r.value - kSmallGapProbs[g - 1]) < 1e-12);
  }
  const auto exact = top_two_gap_prob(z3, 0.3, 2.0);
  const auto mc = mc_top_two_gap(z3, 0.3, 2.0, 200000, 99);
  CHECK(std::fabs(exact.value - mc.value) < 3.0 * mc.error_bar + 1e-9);
}

TEST_CASE("conditional gap sequence against an independent recomputation") {
  // P(M2 <= M1 - t | M1 = s) for t >= 1: exactly one coordinate sits at s
  // and the others at or below s - t.
  const std::int64_t z[] = {20, 18, 16};
  const double p = 0.3;
  const std::int64_t t = 2;
  for (std::int64_t s = 4; s <= 16; ++s) {
    double joint = 0.0;
    for (int l = 0; l < 3; ++l) {
      double term = std::exp(binom_pmf_log({z[l], p}, s));
      for (int j = 0; j < 3; ++j) {
        if (j != l) term *= binom_cdf({z[j], p}, s - t);
      }
      joint += term;
    }
    double at_s = 1.0, below_s = 1.0;
    for (int l = 0; l < 3; ++l) {
      at_s *= binom_cdf({z[l], p}, s);
      below_s *= binom_cdf({z[l], p}, s - 1);
    }
    const double cond = joint / (at_s - below_s);
    // The reference values carry 40-digit precision; this double-precision
    // ratio of near-cancelling products is good to ~1e-11.
    CHECK(std::fabs(cond - kCondGapSeq_t2[s - 4]) < 1e-10);
  }
}

TEST_CASE("conditional gap monotonicity and log-concavity reports") {
  const std::int64_t z[] = {20, 18, 16};
  for (const std::int64_t t : {0LL, 1LL, 2LL, 3LL}) {
    const auto rep = conditional_gap_monotone(z, 0.3, t, 4, 16);
    INFO(rep.name, " t=", t, " worst=", rep.worst_margin);
    CHECK(rep.pass);
  }
  const auto cc = cdf_log_concavity({50, 0.2}, 1, 5);
  CHECK(cc.pass);
  CHECK(cc.checks > 0);
}

TEST_CASE("drifted-normal argmax frequencies") {
  // No drift: exchangeable, uniform over the levels.
  const auto flat = gaussian_argmax_winner_dist(0.0, 4, 200000, 3);
  for (const double f : flat) CHECK(std::fabs(f - 0.25) < 0.005);

  // Strong drift: level 1 dominates outright.
  const auto steep = gaussian_argmax_winner_dist(50.0, 5, 10000, 3);
  CHECK(steep[0] == doctest::Approx(1.0));

  // Reference point c = 1, three levels, against quadrature values.
  const auto ref = gaussian_argmax_winner_dist(1.0, 3, 2000000, 11);
  for (int i = 0; i < 3; ++i) {
    const double sigma = std::sqrt(kArgmaxL3C1[i] * (1.0 - kArgmaxL3C1[i]) / 2000000.0);
    CHECK(std::fabs(ref[i] - kArgmaxL3C1[i]) < 4.0 * sigma + 1e-9);
  }

  // Deterministic in the seed.
  const auto again = gaussian_argmax_winner_dist(1.0, 3, 100000, 11);
  const auto again2 = gaussian_argmax_winner_dist(1.0, 3, 100000, 11);
  CHECK(again == again2);
}
