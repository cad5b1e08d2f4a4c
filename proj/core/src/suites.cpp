#include "lpalab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

namespace lpalab {

namespace {

// Folds per-cell margins into one aggregate report, remembering where the
// worst cell was.
class Agg {
 public:
  Agg(std::string name, double tolerance) {
    rep_.name = std::move(name);
    rep_.tolerance = tolerance;
  }

  void fold(double margin, const std::string& where, std::uint64_t checks = 1) {
    rep_.checks += checks;
    if (margin < rep_.worst_margin) {
      rep_.worst_margin = margin;
      worst_ = where;
    }
  }

  void fold(const LemmaReport& sub, const std::string& where) {
    fold(sub.worst_margin, where, sub.checks);
    rep_.error_bar = std::max(rep_.error_bar, sub.error_bar);
  }

  void note_error(double bar) { rep_.error_bar = std::max(rep_.error_bar, bar); }

  LemmaReport finish(bool strict = false) {
    rep_.pass = strict ? rep_.worst_margin > 0.0
                       : rep_.worst_margin >= -rep_.tolerance;
    if (!worst_.empty()) rep_.notes.push_back("worst: " + worst_);
    return rep_;
  }

 private:
  LemmaReport rep_;
  std::string worst_;
};

std::string fmt(const char* format, ...) {
  char buf[160];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

std::vector<double> default_p_grid() {
  std::vector<double> p;
  for (int i = 1; i <= 19; ++i) p.push_back(0.05 * i);
  return p;
}

struct FamilyScales {
  double np;
  double np3;
  double k_star;
  double eps_n;
  double gamma_n;
  double scale;  // sqrt(np log(1/np^3))
};

FamilyScales family_scales(const DriftingFamilyGrid& grid) {
  FamilyScales s;
  s.np = static_cast<double>(grid.n) * grid.p;
  s.np3 = s.np * grid.p * grid.p;
  if (!(s.np > 1.0) || !(s.np3 < 1.0)) {
    throw std::invalid_argument("drifting family: need np > 1 and np^3 < 1");
  }
  s.k_star = 0.5 * std::sqrt(std::log(1.0 / s.np3) / (2.0 * s.np3));
  s.eps_n = 1.0 / std::sqrt(std::log(s.np));
  s.gamma_n = std::pow(s.np, 0.5 - s.eps_n);
  s.scale = std::sqrt(s.np * std::log(1.0 / s.np3));
  return s;
}

}  // namespace

bool SuiteResult::all_pass() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const LemmaReport& r) { return r.pass; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "bis", "diff", "slud", "chernoff", "max", "gap", "monotone", "argmax"};
  return names;
}

bool is_suite_name(const std::string& name) {
  const auto& names = suite_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SuiteResult suite_bis(const BisGrid& grid) {
  const std::vector<double> ps = grid.p.empty() ? default_p_grid() : grid.p;
  const std::vector<double> rhos =
      grid.rho.empty() ? std::vector<double>{0, 1, 2, 5, 10} : grid.rho;

  Agg ratio("tie-ratio-threshold-monotone", grid.ratio_tolerance);
  Agg norm("tie-weight-normalization", grid.norm_tolerance);
  for (int n = grid.n_lo; n <= grid.n_hi; ++n) {
    for (int n_prime = 0; n_prime < n; ++n_prime) {
      for (double p : ps) {
        for (double rho : rhos) {
          const auto where = fmt("n=%d n'=%d p=%.2f rho=%g", n, n_prime, p, rho);
          ratio.fold(verify_tie_ratio(n, n_prime, p, rho, grid.ratio_tolerance),
                     where);
          const auto base = tie_weighted_probs(n, n_prime, p, -1, rho);
          norm.fold(-std::fabs(base.p_x + base.p_y - 1.0), where);
        }
      }
    }
  }
  return {"bis", {ratio.finish(), norm.finish()}};
}

SuiteResult suite_diff(const DiffGrid& grid) {
  const std::vector<DiffGrid::Point> points =
      grid.points.empty()
          ? std::vector<DiffGrid::Point>{{2000, 1500, 0.05}, {5000, 4000, 0.02},
                                         {1200, 800, 0.1}}
          : grid.points;
  const std::vector<std::int64_t> ms =
      grid.m.empty() ? std::vector<std::int64_t>{0, 1, 2, 5} : grid.m;

  Agg agg("difference-tail-lower-bound", 0.0);
  for (const auto& pt : points) {
    const auto dist = diff_binomial_dist(pt.a1, pt.a2, pt.p);
    const double bound = diff_lower_bound(pt.a1, pt.a2, pt.p);
    agg.note_error(dist.truncated_mass);
    for (std::int64_t m : ms) {
      agg.fold(diff_tail(dist, m) - bound,
               fmt("a1=%lld a2=%lld p=%g m=%lld", (long long)pt.a1,
                   (long long)pt.a2, pt.p, (long long)m));
    }
  }
  return {"diff", {agg.finish()}};
}

namespace {

// Walks the shared sandwich grid; fold(exact tail, effective deviation, spec)
// is called once per cell with both sides referring to {X >= ceil(np + t)}.
template <typename Fold>
void sandwich_walk(const TailSandwichGrid& grid, Fold fold) {
  const std::vector<std::int64_t> ns =
      grid.n.empty() ? std::vector<std::int64_t>{100, 500, 2000} : grid.n;
  const std::vector<double> ps =
      grid.p.empty() ? std::vector<double>{0.05, 0.1, 0.25} : grid.p;
  for (std::int64_t n : ns) {
    for (double p : ps) {
      const BinomialSpec b{n, p};
      const double np = static_cast<double>(n) * p;
      const double span = static_cast<double>(n) - 2.0 * np;
      for (int j = 0; j < grid.t_points; ++j) {
        const double t = span * j / (grid.t_points - 1);
        const auto threshold =
            static_cast<std::int64_t>(std::ceil(np + t - 1e-9));
        const double t_eff = static_cast<double>(threshold) - np;
        fold(binom_sf(b, threshold - 1), t_eff, n, p, t);
      }
    }
  }
}

}  // namespace

SuiteResult suite_slud(const TailSandwichGrid& grid) {
  Agg agg("normal-lower-bound-below-tail", grid.tolerance);
  sandwich_walk(grid, [&](double exact, double t_eff, std::int64_t n, double p,
                          double t) {
    agg.fold(exact - slud_bound(n, p, t_eff), fmt("n=%lld p=%g t=%.3f", (long long)n, p, t));
  });
  return {"slud", {agg.finish()}};
}

SuiteResult suite_chernoff(const TailSandwichGrid& grid) {
  Agg agg("phi-upper-bound-above-tail", grid.tolerance);
  sandwich_walk(grid, [&](double exact, double t_eff, std::int64_t n, double p,
                          double t) {
    const double np = static_cast<double>(n) * p;
    agg.fold(chernoff_bounds(np, t_eff).upper - exact,
             fmt("n=%lld p=%g t=%.3f", (long long)n, p, t));
  });
  return {"chernoff", {agg.finish()}};
}

std::vector<std::int64_t> drifting_family(const DriftingFamilyGrid& grid) {
  family_scales(grid);  // validates the regime
  if (grid.count == 0) throw std::invalid_argument("drifting family: empty");
  const long double n = static_cast<long double>(grid.n);
  const long double np = n * grid.p;
  const long double np2 = np * grid.p;
  std::vector<std::int64_t> z;
  z.reserve(grid.count);
  for (std::size_t l = 1; l <= grid.count; ++l) {
    const long double lm1 = static_cast<long double>(l - 1);
    const long double val = n - lm1 * np + 0.5L * lm1 * (lm1 - 1.0L) * np2;
    if (!(val > 0.0L) || (!z.empty() && llroundl(val) >= z.back())) {
      throw std::domain_error("drifting family: index range leaves the decreasing regime");
    }
    z.push_back(llroundl(val));
  }
  return z;
}

SuiteResult suite_max(const MaxGrid& grid) {
  const auto z = drifting_family(grid.family);
  const auto s = family_scales(grid.family);

  const auto med = max_binomials_quantile(z, grid.family.p, 0.5);
  const double norm = (static_cast<double>(med) - s.np) / s.scale;
  Agg window("max-median-normalized", 0.0);
  window.fold(std::min(norm - grid.median_lo, grid.median_hi - norm),
              fmt("median=%lld normalized=%.4f", (long long)med, norm));

  const auto start = static_cast<std::size_t>(std::ceil(s.k_star));
  if (start < 1 || start > z.size()) {
    throw std::domain_error("suite_max: k_* outside the family range");
  }
  const std::span<const std::int64_t> tail(z.data() + (start - 1),
                                           z.size() - (start - 1));
  const auto med_r = max_binomials_quantile(tail, grid.family.p, 0.5);
  const double norm_r = (static_cast<double>(med_r) - s.np) / s.scale;
  Agg below("restricted-median-below-full", 0.0);
  below.fold(norm - norm_r, fmt("restricted=%.4f full=%.4f start=%zu", norm_r,
                                norm, start));
  return {"max", {window.finish(), below.finish(/*strict=*/true)}};
}

SuiteResult suite_gap(const GapGrid& grid) {
  const auto z = drifting_family(grid.family);
  const auto s = family_scales(grid.family);
  const double g = 2.0 * s.gamma_n;

  const auto exact = top_two_gap_prob(z, grid.family.p, g);
  Agg floor_check("top-two-gap-floor", 0.0);
  floor_check.note_error(exact.error_bar);
  floor_check.fold(exact.value - grid.prob_floor,
                   fmt("g=%.4f exact=%.6f", g, exact.value));

  const auto mc =
      mc_top_two_gap(z, grid.family.p, g, grid.mc_samples, grid.mc_seed);
  Agg cross("top-two-gap-mc-crosscheck", 0.0);
  cross.note_error(mc.error_bar);
  cross.fold(grid.mc_sigmas * mc.error_bar + exact.error_bar -
                 std::fabs(exact.value - mc.value),
             fmt("exact=%.6f mc=%.6f se=%.6f", exact.value, mc.value,
                 mc.error_bar));
  return {"gap", {floor_check.finish(), cross.finish()}};
}

SuiteResult suite_monotone(const MonotoneGrid& grid) {
  const std::vector<std::int64_t> z =
      grid.z.empty() ? std::vector<std::int64_t>{20, 18, 16} : grid.z;
  const std::vector<std::int64_t> ts =
      grid.t.empty() ? std::vector<std::int64_t>{1, 2, 3} : grid.t;

  Agg mono("conditional-gap-monotone", grid.tolerance);
  for (std::int64_t t : ts) {
    mono.fold(conditional_gap_monotone(z, grid.p, t, grid.s_lo, grid.s_hi,
                                       grid.tolerance),
              fmt("t=%lld", (long long)t));
  }
  Agg concave("cdf-log-concavity", grid.tolerance);
  concave.fold(cdf_log_concavity({grid.concavity_trials, grid.concavity_p},
                                 grid.concavity_t_lo, grid.concavity_t_hi,
                                 grid.tolerance),
               fmt("trials=%lld p=%g", (long long)grid.concavity_trials,
                   grid.concavity_p));
  return {"monotone", {mono.finish(), concave.finish()}};
}

SuiteResult suite_argmax(const ArgmaxGrid& grid) {
  // 200-point Gauss-Hermite quadrature of P(N_i + (3 - i)c^{3/2} wins),
  // i = 1..3, at c = 1.
  static constexpr double kRef3[3] = {0.728751015300469, 0.22409830478044251,
                                      0.047150679919088445};

  const auto freq3 = gaussian_argmax_winner_dist(grid.c, 3, grid.samples,
                                                 grid.seed);
  Agg ref("argmax-frequencies-vs-quadrature", 0.0);
  for (int i = 0; i < 3; ++i) {
    const double se =
        std::sqrt(kRef3[i] * (1.0 - kRef3[i]) / static_cast<double>(grid.samples));
    ref.note_error(se);
    ref.fold(grid.sigmas * se - std::fabs(freq3[i] - kRef3[i]),
             fmt("level=%d freq=%.6f ref=%.6f", i + 1, freq3[i], kRef3[i]));
  }

  const auto freq12 = gaussian_argmax_winner_dist(grid.c, 12, grid.samples,
                                                  grid.seed);
  Agg shape("argmax-shape-twelve-levels", 1e-12);
  double total = 0.0;
  for (std::size_t i = 0; i < freq12.size(); ++i) {
    total += freq12[i];
    shape.fold(freq12[i], fmt("level=%zu freq=%.6f", i + 1, freq12[i]));
    if (i + 1 < freq12.size()) {
      shape.fold(freq12[i] - freq12[i + 1],
                 fmt("level=%zu vs %zu", i + 1, i + 2));
    }
  }
  shape.fold(-std::fabs(total - 1.0), "total mass");
  return {"argmax", {ref.finish(), shape.finish()}};
}

SuiteResult run_suite(const std::string& name) {
  if (name == "bis") return suite_bis();
  if (name == "diff") return suite_diff();
  if (name == "slud") return suite_slud();
  if (name == "chernoff") return suite_chernoff();
  if (name == "max") return suite_max();
  if (name == "gap") return suite_gap();
  if (name == "monotone") return suite_monotone();
  if (name == "argmax") return suite_argmax();
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace lpalab
