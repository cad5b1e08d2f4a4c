#include "lpalab/binom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lpalab/rng.hpp"

namespace lpalab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const BinomialSpec& b) {
  if (b.trials < 0 || !(b.prob >= 0.0) || !(b.prob <= 1.0)) {
    throw std::invalid_argument("BinomialSpec: need trials >= 0 and prob in [0,1]");
  }
}

// log(n!) - (n log n - n + 0.5 log(2 pi n)); exact lgamma below 16, the
// classic 1/(12n) asymptotic series above.
double stirlerr(double n) {
  if (n < 16.0) {
    return std::lgamma(n + 1.0) -
           (n * std::log(n) - n + 0.5 * std::log(2.0 * std::numbers::pi * n));
  }
  const double nn = n * n;
  constexpr double s0 = 1.0 / 12.0, s1 = 1.0 / 360.0, s2 = 1.0 / 1260.0,
                   s3 = 1.0 / 1680.0, s4 = 1.0 / 1188.0;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x/np) + np - x, evaluated by series when x ~ np so the cancellation
// between the two huge terms never reaches floating point.
double bd0(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    const double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    const double v2 = v * v;
    for (int j = 1;; ++j) {
      ej *= v2;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

// P(X >= t) summed upward from t; valid when t is at or above the mode.
double upper_sum(const BinomialSpec& b, std::int64_t t) {
  const double anchor = binom_pmf_log(b, t);
  if (anchor == -kInf) return 0.0;
  const long double p = b.prob, q = 1.0L - p;
  long double sum = 1.0L, term = 1.0L;
  for (std::int64_t x = t; x < b.trials; ++x) {
    term *= (static_cast<long double>(b.trials - x) * p) /
            (static_cast<long double>(x + 1) * q);
    sum += term;
    if (term < sum * 1e-22L) break;
  }
  return std::exp(anchor + static_cast<double>(std::log(sum)));
}

// P(X <= t) summed downward from t; valid when t is at or below the mode.
double lower_sum(const BinomialSpec& b, std::int64_t t) {
  const double anchor = binom_pmf_log(b, t);
  if (anchor == -kInf) return 0.0;
  const long double p = b.prob, q = 1.0L - p;
  long double sum = 1.0L, term = 1.0L;
  for (std::int64_t x = t; x > 0; --x) {
    term *= (static_cast<long double>(x) * q) /
            (static_cast<long double>(b.trials - x + 1) * p);
    sum += term;
    if (term < sum * 1e-22L) break;
  }
  return std::exp(anchor + static_cast<double>(std::log(sum)));
}

std::int64_t mode_of(const BinomialSpec& b) {
  return static_cast<std::int64_t>((static_cast<double>(b.trials) + 1.0) * b.prob);
}

}  // namespace

double binom_pmf_log(const BinomialSpec& b, std::int64_t x) {
  validate(b);
  const std::int64_t n = b.trials;
  const double p = b.prob;
  if (x < 0 || x > n) return -kInf;
  if (p <= 0.0) return x == 0 ? 0.0 : -kInf;
  if (p >= 1.0) return x == n ? 0.0 : -kInf;
  if (n == 0) return 0.0;
  if (x == 0) return static_cast<double>(n) * std::log1p(-p);
  if (x == n) return static_cast<double>(n) * std::log(p);
  const double nd = static_cast<double>(n);
  const double xd = static_cast<double>(x);
  const double md = nd - xd;
  const double lc = stirlerr(nd) - stirlerr(xd) - stirlerr(md) -
                    bd0(xd, nd * p) - bd0(md, nd * (1.0 - p));
  return lc + 0.5 * std::log(nd / (2.0 * std::numbers::pi * xd * md));
}

double binom_cdf(const BinomialSpec& b, std::int64_t t) {
  validate(b);
  if (t < 0) return 0.0;
  if (t >= b.trials) return 1.0;
  if (b.prob <= 0.0) return 1.0;
  if (b.prob >= 1.0) return 0.0;
  const std::int64_t mode = mode_of(b);
  if (t < mode) return lower_sum(b, t);
  return 1.0 - upper_sum(b, t + 1);
}

double binom_sf(const BinomialSpec& b, std::int64_t t) {
  validate(b);
  if (t <= 0) return 1.0;
  if (t > b.trials) return 0.0;
  if (b.prob <= 0.0) return 0.0;
  if (b.prob >= 1.0) return 1.0;
  const std::int64_t mode = mode_of(b);
  if (t > mode) return upper_sum(b, t);
  return 1.0 - lower_sum(b, t - 1);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double chernoff_phi(double t) {
  if (t < -1.0) throw std::domain_error("chernoff_phi: t < -1");
  if (t == -1.0) return 1.0;
  return (1.0 + t) * std::log1p(t) - t;
}

ChernoffBounds chernoff_bounds(double mean, double t) {
  if (!(mean >= 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("chernoff_bounds: need mean >= 0 and t >= 0");
  }
  if (mean == 0.0) {
    const double v = t > 0.0 ? 0.0 : 1.0;
    return {v, v};
  }
  const double upper = std::exp(-mean * chernoff_phi(t / mean));
  const double lower = std::exp(-mean * chernoff_phi(std::max(-1.0, -t / mean)));
  return {upper, lower};
}

ChernoffBounds chernoff_bounds_simple(double mean, double t) {
  if (!(mean >= 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("chernoff_bounds_simple: need mean >= 0 and t >= 0");
  }
  if (mean == 0.0) {
    const double v = t > 0.0 ? 0.0 : 1.0;
    return {v, v};
  }
  const double upper = std::exp(-t * t / (2.0 * (mean + t / 3.0)));
  const double lower = std::exp(-t * t / (2.0 * mean));
  return {upper, lower};
}

double slud_bound(std::int64_t n, double p, double t) {
  if (!(p > 0.0) || p > 0.25) {
    throw std::domain_error("slud_bound: requires 0 < p <= 1/4");
  }
  const double np = static_cast<double>(n) * p;
  if (!(t >= 0.0) || t > static_cast<double>(n) - 2.0 * np) {
    throw std::domain_error("slud_bound: t outside [0, n - 2np]");
  }
  return normal_sf(t / std::sqrt(np * (1.0 - p)));
}

namespace {

std::vector<long double> small_pmf_vector(int n, double p) {
  std::vector<long double> out(static_cast<std::size_t>(n) + 1);
  const long double lp = p, lq = 1.0L - lp;
  long double coeff = 1.0L;
  for (int k = 0; k <= n; ++k) {
    out[k] = coeff * std::pow(lp, static_cast<long double>(k)) *
             std::pow(lq, static_cast<long double>(n - k));
    coeff = coeff * (n - k) / (k + 1.0L);
  }
  return out;
}

long double tie_one_side(const std::vector<long double>& pa,
                         const std::vector<long double>& pb, std::int64_t m,
                         long double rho) {
  const std::int64_t na = static_cast<std::int64_t>(pa.size()) - 1;
  const std::int64_t nb = static_cast<std::int64_t>(pb.size()) - 1;
  long double tot = 0.0L;
  for (std::int64_t a = 0; a <= na; ++a) {
    for (std::int64_t bv = 0; bv <= nb; ++bv) {
      long double w;
      if (a > m && a > bv) {
        w = 1.0L;
      } else if (a == bv && a > m) {
        w = 0.5L;
      } else if (a == m && a > bv) {
        w = 1.0L / (rho + 1.0L);
      } else if (a == m && a == bv) {
        w = 1.0L / (rho + 2.0L);
      } else {
        continue;
      }
      tot += w * pa[a] * pb[bv];
    }
  }
  return tot;
}

}  // namespace

TieWeighted tie_weighted_probs(int n, int n_prime, double p, std::int64_t m, double rho) {
  if (n <= n_prime || n_prime < 0 || m < -1 || !(rho >= 0.0) || !(p >= 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument(
        "tie_weighted_probs: need n > n' >= 0, m >= -1, rho >= 0, p in [0,1]");
  }
  const auto px = small_pmf_vector(n, p);
  const auto py = small_pmf_vector(n_prime, p);
  return {static_cast<double>(tie_one_side(px, py, m, rho)),
          static_cast<double>(tie_one_side(py, px, m, rho))};
}

LemmaReport verify_tie_ratio(int n, int n_prime, double p, double rho, double tolerance) {
  LemmaReport rep;
  rep.name = "tie-ratio";
  rep.tolerance = tolerance;
  const auto ratio = [](const TieWeighted& t) {
    return t.p_y == 0.0 ? kInf : t.p_x / t.p_y;
  };
  const double base = ratio(tie_weighted_probs(n, n_prime, p, -1, rho));
  std::int64_t worst_m = -1;
  for (std::int64_t m = 0; m <= n_prime; ++m) {
    double margin = ratio(tie_weighted_probs(n, n_prime, p, m, rho)) - base;
    if (std::isnan(margin)) margin = 0.0;  // both ratios infinite
    ++rep.checks;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      worst_m = m;
    }
  }
  rep.pass = rep.checks == 0 || rep.worst_margin >= -tolerance;
  if (!rep.pass) {
    rep.notes.push_back("worst margin at m=" + std::to_string(worst_m));
  }
  return rep;
}

DiffDistribution diff_binomial_dist(std::int64_t a1, std::int64_t a2, double p) {
  if (a1 < a2 || a2 < 0 || !(p >= 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("diff_binomial_dist: need a1 >= a2 >= 0, p in [0,1]");
  }
  // Full support when cheap; otherwise a 14-sigma window, whose discarded
  // mass has a certified Chernoff bound (the measured pmf deficit would be
  // drowned in ~1e-16 summation roundoff).
  double trunc_bound = 0.0;
  const auto window = [p, &trunc_bound](std::int64_t a) -> std::pair<std::int64_t, std::int64_t> {
    if (a <= 4096) return {0, a};
    const double mu = static_cast<double>(a) * p;
    const double sig = std::sqrt(mu * (1.0 - p));
    const auto lo =
        std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(mu - 14.0 * sig)));
    const auto hi =
        std::min<std::int64_t>(a, static_cast<std::int64_t>(std::ceil(mu + 14.0 * sig)));
    if (lo > 0) trunc_bound += chernoff_bounds(mu, mu - static_cast<double>(lo - 1)).lower;
    if (hi < a) trunc_bound += chernoff_bounds(mu, static_cast<double>(hi + 1) - mu).upper;
    return {lo, hi};
  };
  const auto [l1, h1] = window(a1);
  const auto [l2, h2] = window(a2);
  const BinomialSpec b1{a1, p}, b2{a2, p};
  std::vector<long double> p1(static_cast<std::size_t>(h1 - l1) + 1);
  std::vector<long double> p2(static_cast<std::size_t>(h2 - l2) + 1);
  for (std::int64_t x = l1; x <= h1; ++x) {
    p1[x - l1] = std::exp(static_cast<long double>(binom_pmf_log(b1, x)));
  }
  for (std::int64_t y = l2; y <= h2; ++y) {
    p2[y - l2] = std::exp(static_cast<long double>(binom_pmf_log(b2, y)));
  }
  DiffDistribution d;
  d.a1 = a1;
  d.a2 = a2;
  d.p = p;
  d.lo = l1 - h2;
  std::vector<long double> acc(static_cast<std::size_t>((h1 - l1) + (h2 - l2)) + 1, 0.0L);
  for (std::int64_t y = l2; y <= h2; ++y) {
    const long double py = p2[y - l2];
    for (std::int64_t x = l1; x <= h1; ++x) {
      acc[(x - y) - d.lo] += p1[x - l1] * py;
    }
  }
  d.pmf.assign(acc.begin(), acc.end());
  d.truncated_mass = trunc_bound;
  return d;
}

double diff_tail(const DiffDistribution& d, std::int64_t m) {
  long double tot = 0.0L;
  for (std::size_t i = 0; i < d.pmf.size(); ++i) {
    if (d.lo + static_cast<std::int64_t>(i) >= m) tot += d.pmf[i];
  }
  return static_cast<double>(tot);
}

double diff_mean(const DiffDistribution& d) {
  long double tot = 0.0L;
  for (std::size_t i = 0; i < d.pmf.size(); ++i) {
    tot += static_cast<long double>(d.lo + static_cast<std::int64_t>(i)) * d.pmf[i];
  }
  return static_cast<double>(tot);
}

double diff_lower_bound(std::int64_t a1, std::int64_t a2, double p) {
  const double drift = static_cast<double>(a1 - a2) * p;
  const double spread = std::sqrt(static_cast<double>(a1 + a2) * p);
  return 0.5 + 0.2 * std::min(1.0, drift / spread);
}

double diff_normal_bound(std::int64_t a1, std::int64_t a2, double p, std::int64_t m,
                         double zeta) {
  const double drift = static_cast<double>(a1 - a2) * p;
  const double sd = std::sqrt(static_cast<double>(a1 + a2) * p * (1.0 - p));
  return normal_cdf((drift - static_cast<double>(m)) / sd) -
         2.0 * zeta / std::sqrt(static_cast<double>(a2) * p);
}

ProbEstimate max_binomials_cdf(std::span<const std::int64_t> z, double p, std::int64_t t) {
  long double logsum = 0.0L;
  double err = 0.0;
  for (const auto zl : z) {
    const double mu = static_cast<double>(zl) * p;
    const double td = static_cast<double>(t);
    if (t >= 1 && mu <= td - 12.0 * std::sqrt(td)) {
      // factor ~= 1; bound the skipped log-mass by the Chernoff upper tail
      err += std::min(1.0, chernoff_bounds(std::max(mu, 1e-300), td - mu).upper) + 1e-15;
      continue;
    }
    const double sf = binom_sf({zl, p}, t + 1);
    if (sf >= 1.0) return {0.0, err};
    logsum += std::log1p(-static_cast<long double>(sf));
    err += 1e-14;
  }
  return {std::exp(static_cast<double>(logsum)), err};
}

std::int64_t max_binomials_quantile(std::span<const std::int64_t> z, double p, double q) {
  if (!(q > 0.0) || !(q <= 1.0)) {
    throw std::invalid_argument("max_binomials_quantile: q must be in (0,1]");
  }
  if (z.empty()) {
    throw std::invalid_argument("max_binomials_quantile: empty family");
  }
  const std::int64_t zmax = *std::max_element(z.begin(), z.end());
  std::int64_t lo = -1;  // cdf(-1) = 0 < q
  std::int64_t hi = zmax;
  const double mumax = static_cast<double>(zmax) * p;
  const double step = 20.0 * std::sqrt(std::max(mumax, 1.0)) + 20.0;
  const auto guess_hi = static_cast<std::int64_t>(mumax + step);
  if (guess_hi < hi && max_binomials_cdf(z, p, guess_hi).value >= q) hi = guess_hi;
  const auto guess_lo = static_cast<std::int64_t>(mumax - step);
  if (guess_lo > lo && guess_lo < hi && max_binomials_cdf(z, p, guess_lo).value < q) {
    lo = guess_lo;
  }
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (max_binomials_cdf(z, p, mid).value >= q) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

namespace {

// Per-index 13-sigma pmf windows for a Bin(z[i], p) family, recurrence-filled
// from an in-window anchor at the mode.
struct WindowedFamily {
  std::vector<std::int64_t> lo, hi;
  std::vector<std::vector<double>> pmf;
  std::vector<double> left_mass;   // P(Z_i < lo_i)
  std::vector<double> right_mass;  // measured pmf deficit, bounds P(Z_i > hi_i)
};

WindowedFamily build_windows(std::span<const std::int64_t> z, double p) {
  WindowedFamily w;
  const std::size_t n = z.size();
  w.lo.resize(n);
  w.hi.resize(n);
  w.pmf.resize(n);
  w.left_mass.resize(n);
  w.right_mass.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = static_cast<double>(z[i]) * p;
    const double sig = std::sqrt(std::max(mu * (1.0 - p), 1.0));
    const auto lo = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(std::floor(mu - 13.0 * sig)), 0, z[i]);
    const auto hi = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(std::ceil(mu + 13.0 * sig)), 0, z[i]);
    w.lo[i] = lo;
    w.hi[i] = hi;
    std::vector<long double> pm(static_cast<std::size_t>(hi - lo) + 1, 0.0L);
    const BinomialSpec spec{z[i], p};
    const std::int64_t anchor = std::clamp(mode_of(spec), lo, hi);
    pm[anchor - lo] = std::exp(static_cast<long double>(binom_pmf_log(spec, anchor)));
    const long double lp = p, lq = 1.0L - lp;
    for (std::int64_t x = anchor; x < hi; ++x) {
      pm[x + 1 - lo] = pm[x - lo] * (static_cast<long double>(z[i] - x) * lp) /
                       (static_cast<long double>(x + 1) * lq);
    }
    for (std::int64_t x = anchor; x > lo; --x) {
      pm[x - 1 - lo] = pm[x - lo] * (static_cast<long double>(x) * lq) /
                       (static_cast<long double>(z[i] - x + 1) * lp);
    }
    w.left_mass[i] = binom_cdf(spec, lo - 1);
    long double tot = w.left_mass[i];
    for (const auto v : pm) tot += v;
    w.right_mass[i] = std::max(0.0, static_cast<double>(1.0L - tot));
    w.pmf[i].assign(pm.begin(), pm.end());
  }
  return w;
}

std::int64_t gap_threshold(double g) {
  const double nudged = g - 1e-9 * std::max(1.0, std::fabs(g));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(nudged)));
}

class AliasTable {
 public:
  AliasTable(const std::vector<double>& weights, std::int64_t base) : base_(base) {
    const std::size_t k = weights.size();
    prob_.resize(k);
    alias_.resize(k);
    double total = 0.0;
    for (const auto w : weights) total += w;
    std::vector<double> scaled(k);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < k; ++i) {
      scaled[i] = weights[i] * static_cast<double>(k) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back();
      const auto l = large.back();
      small.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (const auto i : large) prob_[i] = 1.0;
    for (const auto i : small) prob_[i] = 1.0;  // numerical leftovers
  }

  std::int64_t draw(Rng& rng) const {
    const auto i = static_cast<std::size_t>(rng.next_below(prob_.size()));
    return base_ + static_cast<std::int64_t>(
                       rng.next_double() < prob_[i] ? i : alias_[i]);
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  std::int64_t base_;
};

}  // namespace

ProbEstimate top_two_gap_prob(std::span<const std::int64_t> z, double p, double g) {
  if (z.size() <= 1) return {1.0, 0.0};
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("top_two_gap_prob: p must be in [0,1]");
  }
  const std::int64_t gap = gap_threshold(g);
  const auto w = build_windows(z, p);
  const std::size_t n = z.size();
  const std::int64_t vlo = *std::min_element(w.lo.begin(), w.lo.end()) - gap;
  const std::int64_t vhi = *std::max_element(w.hi.begin(), w.hi.end());
  const std::size_t width = static_cast<std::size_t>(vhi - vlo) + 1;

  double err = 0.0;
  // log prod_i cdf_i(v) restricted to indices whose window covers v; indices
  // already above their window contribute ~log 1, indices still below are
  // counted in `deficit`.
  std::vector<double> logprod(width, 0.0);
  std::vector<std::int32_t> deficit(width + 1, 0);
  std::vector<std::vector<double>> logcdf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pm = w.pmf[i];
    logcdf[i].resize(pm.size());
    long double c = w.left_mass[i];
    for (std::size_t k = 0; k < pm.size(); ++k) {
      c += pm[k];
      logcdf[i][k] = std::log(std::min(1.0, static_cast<double>(c)));
      logprod[w.lo[i] + static_cast<std::int64_t>(k) - vlo] += logcdf[i][k];
    }
    if (w.lo[i] > vlo) {
      ++deficit[0];
      --deficit[w.lo[i] - vlo];
    }
    err += w.right_mass[i] * static_cast<double>(vhi - w.hi[i]);
  }
  for (std::size_t v = 1; v < width; ++v) deficit[v] += deficit[v - 1];

  long double total = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t lo = w.lo[i], hi = w.hi[i];
    for (std::int64_t s = lo; s <= hi; ++s) {
      const double pm = w.pmf[i][s - lo];
      if (pm == 0.0) continue;
      const std::int64_t v = s - gap;
      const std::size_t vi = static_cast<std::size_t>(v - vlo);
      const std::int32_t nb = deficit[vi];
      if (nb == 0) {
        const double own = (v >= lo && v <= hi) ? logcdf[i][v - lo] : 0.0;
        const double rest = logprod[vi] - own;
        if (std::isfinite(rest)) total += pm * std::exp(rest);
      } else if (nb == 1 && v < lo) {
        // the only below-window factor is this index's own, which is excluded
        const double rest = logprod[vi];
        if (std::isfinite(rest)) total += pm * std::exp(rest);
      } else {
        // some other factor sits below its window: its cdf is at most the
        // window's left-tail mass
        err += pm * 1e-20;
      }
    }
    err += w.left_mass[i] + w.right_mass[i];  // s-window truncation
  }
  return {static_cast<double>(total), err};
}

ProbEstimate mc_top_two_gap(std::span<const std::int64_t> z, double p, double g,
                            std::int64_t samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("mc_top_two_gap: samples must be positive");
  if (z.size() <= 1) return {1.0, 0.0};
  const std::int64_t gap = gap_threshold(g);
  const auto w = build_windows(z, p);
  std::vector<AliasTable> tables;
  tables.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) tables.emplace_back(w.pmf[i], w.lo[i]);
  Rng rng(seed);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    std::int64_t m1 = std::numeric_limits<std::int64_t>::min();
    std::int64_t m2 = m1;
    for (const auto& table : tables) {
      const std::int64_t v = table.draw(rng);
      if (v > m1) {
        m2 = m1;
        m1 = v;
      } else if (v > m2) {
        m2 = v;
      }
    }
    if (m1 - m2 >= gap) ++hits;
  }
  const double ph = static_cast<double>(hits) / static_cast<double>(samples);
  return {ph, std::sqrt(ph * (1.0 - ph) / static_cast<double>(samples))};
}

LemmaReport conditional_gap_monotone(std::span<const std::int64_t> z, double p,
                                     std::int64_t t, std::int64_t s_lo, std::int64_t s_hi,
                                     double tolerance) {
  if (z.empty() || t < 0 || s_hi < s_lo) {
    throw std::invalid_argument("conditional_gap_monotone: bad family or range");
  }
  LemmaReport rep;
  rep.name = "conditional-gap-monotone";
  rep.tolerance = tolerance;
  if (t == 0) {
    rep.checks = static_cast<std::uint64_t>(s_hi - s_lo);
    rep.worst_margin = 0.0;
    rep.pass = true;
    return rep;
  }
  const std::size_t n = z.size();
  std::vector<std::vector<long double>> pmf(n), cdf(n);
  for (std::size_t i = 0; i < n; ++i) {
    pmf[i].resize(static_cast<std::size_t>(z[i]) + 1);
    cdf[i].resize(pmf[i].size());
    long double c = 0.0L;
    for (std::int64_t x = 0; x <= z[i]; ++x) {
      pmf[i][x] = std::exp(static_cast<long double>(binom_pmf_log({z[i], p}, x)));
      cdf[i][x] = c += pmf[i][x];
    }
  }
  const auto cdf_at = [&](std::size_t j, std::int64_t u) -> long double {
    if (u < 0) return 0.0L;
    return cdf[j][static_cast<std::size_t>(std::min(u, z[j]))];
  };
  double prev = std::numeric_limits<double>::quiet_NaN();
  std::int64_t worst_s = s_lo;
  for (std::int64_t s = s_lo; s <= s_hi; ++s) {
    long double num = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      if (s < 0 || s > z[i]) continue;
      long double term = pmf[i][s];
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) term *= cdf_at(j, s - t);
      }
      num += term;
    }
    long double den = 1.0L, den_prev = 1.0L;
    for (std::size_t j = 0; j < n; ++j) {
      den *= cdf_at(j, s);
      den_prev *= cdf_at(j, s - 1);
    }
    den -= den_prev;
    if (den <= 0.0L) {
      rep.notes.push_back("s=" + std::to_string(s) + " has zero mass, skipped");
      continue;
    }
    const double cond = static_cast<double>(num / den);
    if (!std::isnan(prev)) {
      const double margin = cond - prev;
      ++rep.checks;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        worst_s = s;
      }
    }
    prev = cond;
  }
  rep.pass = rep.checks > 0 && rep.worst_margin >= -tolerance;
  if (!rep.pass && rep.checks > 0) {
    rep.notes.push_back("worst step ending at s=" + std::to_string(worst_s));
  }
  return rep;
}

LemmaReport cdf_log_concavity(const BinomialSpec& b, std::int64_t t_lo, std::int64_t t_hi,
                              double tolerance) {
  validate(b);
  if (t_lo < 0 || t_hi < t_lo) {
    throw std::invalid_argument("cdf_log_concavity: bad t range");
  }
  LemmaReport rep;
  rep.name = "cdf-log-concavity";
  rep.tolerance = tolerance;
  std::vector<long double> cdf(static_cast<std::size_t>(b.trials) + 1);
  long double c = 0.0L;
  for (std::int64_t x = 0; x <= b.trials; ++x) {
    cdf[x] = c += std::exp(static_cast<long double>(binom_pmf_log(b, x)));
  }
  const auto at = [&](std::int64_t u) -> long double {
    if (u < 0) return 0.0L;
    return cdf[static_cast<std::size_t>(std::min(u, b.trials))];
  };
  for (std::int64_t t = t_lo; t <= t_hi; ++t) {
    for (std::int64_t s = 0; s < b.trials; ++s) {
      const double margin =
          static_cast<double>(at(s + 1 - t) * at(s) - at(s - t) * at(s + 1));
      ++rep.checks;
      if (margin < rep.worst_margin) rep.worst_margin = margin;
    }
  }
  rep.pass = rep.worst_margin >= -tolerance;
  return rep;
}

std::vector<double> gaussian_argmax_winner_dist(double c, int levels,
                                                std::int64_t samples, std::uint64_t seed) {
  if (levels < 1 || samples < 1) {
    throw std::invalid_argument("gaussian_argmax_winner_dist: need levels >= 1, samples >= 1");
  }
  const double drift = std::pow(c, 1.5);
  Rng rng(seed);
  std::vector<std::int64_t> wins(static_cast<std::size_t>(levels), 0);
  for (std::int64_t s = 0; s < samples; ++s) {
    int best = 0;
    double best_value = -kInf;
    for (int i = 0; i < levels; ++i) {
      const double v = rng.next_normal() + static_cast<double>(levels - 1 - i) * drift;
      if (v > best_value) {
        best_value = v;
        best = i;
      }
    }
    ++wins[best];
  }
  std::vector<double> freq(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) {
    freq[i] = static_cast<double>(wins[i]) / static_cast<double>(samples);
  }
  return freq;
}

}  // namespace lpalab
