// Release gate. Every numbered criterion below captures one behavior the
// library is shipped on: exact oracle suites, structural identities on
// sampled graphs, and Monte Carlo frequencies at fixed seeds. Each subcheck
// prints its observed status next to its documented status; the gate exits 0
// only when the two columns agree everywhere. Criteria whose documented
// status is FAIL are measured shortfalls (margins printed), kept visible here
// rather than papered over; an unexpected pass trips the gate just as an
// unexpected failure does.
//
// Runtime is dominated by the batched runs at n = 50000 and the full
// comparison-odds grid; expect roughly an hour single-threaded.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "lpalab/alap.hpp"
#include "lpalab/binom.hpp"
#include "lpalab/dynamics.hpp"
#include "lpalab/graph.hpp"
#include "lpalab/harness.hpp"
#include "lpalab/rng.hpp"
#include "lpalab/suites.hpp"
#include "lpalab/theory.hpp"

using namespace lpalab;

namespace {

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

struct Sub {
  std::string name;
  bool expected_pass;
  bool pass;
  std::string detail;
};

struct Outcome {
  std::string title;
  std::vector<Sub> subs;
};

Sub from_report(const LemmaReport& rep, bool expected_pass) {
  std::string detail = fmt("checks=%llu worst_margin=%.6g",
                           static_cast<unsigned long long>(rep.checks), rep.worst_margin);
  if (rep.error_bar > 0.0) detail += fmt(" error_bar=%.2g", rep.error_bar);
  if (!rep.notes.empty()) detail += " [" + rep.notes.front() + "]";
  return {rep.name, expected_pass, rep.pass, detail};
}

ExperimentConfig batch(RunMode mode, std::uint64_t n, std::uint64_t trials,
                       std::uint64_t base_seed) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  cfg.n = n;
  cfg.trials = trials;
  cfg.base_seed = base_seed;
  return cfg;
}

// ---- exact-oracle suites ----------------------------------------------------

void crit_comparison_grid(Outcome& ratio, Outcome& norm) {
  const auto result = suite_bis({});
  ratio.title = "comparison odds monotone in the count threshold";
  ratio.subs.push_back(from_report(result.reports.at(0), true));
  norm.title = "no-threshold win probabilities sum to one";
  norm.subs.push_back(from_report(result.reports.at(1), true));
}

Outcome crit_difference_tail() {
  const auto result = suite_diff({});
  return {"difference-tail lower bound at the reference points",
          {from_report(result.reports.at(0), true)}};
}

Outcome crit_tail_sandwich() {
  const auto lower = suite_slud({});
  const auto upper = suite_chernoff({});
  return {"upper-tail sandwich: normal lower bound, phi-form upper bound",
          {from_report(lower.reports.at(0), true),
           from_report(upper.reports.at(0), true)}};
}

Outcome crit_family_max() {
  const auto result = suite_max({});
  return {"drifting-family maximum: normalized median location",
          {from_report(result.reports.at(0), false),
           from_report(result.reports.at(1), true)}};
}

Outcome crit_top_two_gap() {
  const auto result = suite_gap({});
  return {"top-two gap probability floor with Monte Carlo crosscheck",
          {from_report(result.reports.at(0), false),
           from_report(result.reports.at(1), true)}};
}

Outcome crit_monotone() {
  const auto result = suite_monotone({});
  return {"conditional gap monotone in the maximum; cdf log-concave",
          {from_report(result.reports.at(0), true),
           from_report(result.reports.at(1), true)}};
}

// ---- structural identities on sampled graphs --------------------------------

Outcome crit_round1_and_basins() {
  const double ps[3] = {0.005, 0.02, 0.1};
  const std::uint64_t n = 2000;
  int shortcut_bad = 0;
  int partition_bad = 0;
  int tables = 0;

  for (int i = 0; i < 100; ++i) {
    const double p = ps[i % 3];
    const Graph g = sample_gnp(GnpParams{n, p, trial_seed(5000, static_cast<std::uint64_t>(i))});

    const LabelVector fast = round1_minindex(g);
    Rng rng(0);
    const LabelVector generic = lpa_round(g, init_labels(n), 1, TiePolicy::smallest(), rng);
    if (fast.labels != generic.labels || fast.round != 1) ++shortcut_bad;

    std::vector<std::int64_t> ks = {50};
    try {
      const DerivedParams dp = derive_params(n, p);
      if (2 * dp.k <= static_cast<std::int64_t>(n) && dp.k != 50) ks.push_back(dp.k);
    } catch (const std::exception&) {
      // density outside the derivable band; the fixed k still exercises the identity
    }
    for (const std::int64_t k : ks) {
      ++tables;
      const LevelDecomposition dec = decompose_levels(g, k);
      const BasinTable basins = compute_basins(g, dec);
      bool ok = true;
      std::uint64_t total = 0;
      for (std::size_t l = 1; l <= basins.sizes.size(); ++l) {
        total += basins.sizes[l - 1];
        if (basins.basins[l - 1].size() != basins.sizes[l - 1]) ok = false;
        for (const Vertex u : basins.basins[l - 1]) {
          if (!dec.in_B(u) || basins.basin_of[u] != l) ok = false;
        }
      }
      if (total != dec.B.size()) ok = false;
      for (const Vertex u : dec.B) {
        const Label first = g.min_neighbor(u);
        if (first == 0 || first > static_cast<Label>(2 * k) || basins.basin_of[u] != first) {
          ok = false;
        }
      }
      if (!ok) ++partition_bad;
    }
  }

  return {"first-round shortcut and basin partition on sampled graphs",
          {{"round1-minindex-equals-generic", true, shortcut_bad == 0,
            fmt("graphs=100 mismatches=%d", shortcut_bad)},
           {"basins-partition-level2", true, partition_bad == 0,
            fmt("tables=%d violations=%d", tables, partition_bad)}}};
}

Outcome crit_cc_indifference() {
  const std::uint64_t n = 2000;
  const double p = std::pow(static_cast<double>(n), -0.3);
  const DerivedParams dp = derive_params(n, p);
  int mismatches = 0;
  std::uint64_t cc_pairs = 0;

  for (int i = 0; i < 20; ++i) {
    const std::uint64_t seed = trial_seed(6000, static_cast<std::uint64_t>(i));
    const Graph g = sample_gnp(GnpParams{n, p, seed});
    const LevelDecomposition dec = decompose_levels(g, dp.k);
    const BasinTable basins = compute_basins(g, dec);
    Rng tie_a(mix64(seed ^ 0x51));
    const auto labels = alap_round2(g, dec, basins, TiePolicy::uniform(), tie_a);

    // Redraw every pair inside the unreached level with fresh randomness.
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex u = 1; u <= n; ++u) {
      for (const Vertex w : g.neighbors(u)) {
        if (w <= u) continue;
        if (dec.in_C(u) && dec.in_C(w)) continue;
        edges.emplace_back(u, w);
      }
    }
    Rng redraw(mix64(seed ^ 0x52));
    for (std::size_t a = 0; a < dec.C.size(); ++a) {
      for (std::size_t b = a + 1; b < dec.C.size(); ++b) {
        ++cc_pairs;
        if (redraw.next_double() < p) edges.emplace_back(dec.C[a], dec.C[b]);
      }
    }
    const Graph g2 = Graph::from_edges(n, edges);
    const LevelDecomposition dec2 = decompose_levels(g2, dp.k);
    const BasinTable basins2 = compute_basins(g2, dec2);
    Rng tie_b(mix64(seed ^ 0x51));
    const auto labels2 = alap_round2(g2, dec2, basins2, TiePolicy::uniform(), tie_b);
    if (labels != labels2 || dec2.C != dec.C || basins2.sizes != basins.sizes) ++mismatches;
  }

  return {"second round unchanged when unreached-level pairs are redrawn",
          {{"cc-redraw-invariance", true, mismatches == 0,
            fmt("graphs=20 mismatches=%d k=%lld cc_pairs_redrawn=%llu", mismatches,
                static_cast<long long>(dp.k),
                static_cast<unsigned long long>(cc_pairs))}}};
}

// ---- Monte Carlo behavior at fixed seeds ------------------------------------

Outcome crit_dense_consensus() {
  ExperimentConfig cfg = batch(RunMode::Simulate, 50000, 30, 42);
  cfg.alpha = 0.7;
  const auto records = run_trials_collect(cfg);

  std::uint64_t fast = 0, converged = 0, mode_hits = 0, one_hits = 0;
  for (const auto& r : records) {
    if (r.consensus_round && *r.consensus_round <= 5) ++fast;
    if (r.converged.value_or(false)) {
      ++converged;
      if (r.winner_equals_round1_mode.value_or(false)) ++mode_hits;
    }
    if (r.winner_is_1.value_or(false)) ++one_hits;
  }
  const double trials = static_cast<double>(records.size());
  const double f_fast = static_cast<double>(fast) / trials;
  const double f_mode =
      converged ? static_cast<double>(mode_hits) / static_cast<double>(converged) : 0.0;
  const double f_one = static_cast<double>(one_hits) / trials;

  return {"dense regime: fast consensus on the first-round mode, label 1",
          {{"consensus-within-5-rounds", true, f_fast >= 0.9,
            fmt("%llu/%llu freq=%.3f need>=0.9", (unsigned long long)fast,
                (unsigned long long)records.size(), f_fast)},
           {"winner-equals-round1-mode", true, f_mode >= 0.9,
            fmt("%llu/%llu freq=%.3f need>=0.9", (unsigned long long)mode_hits,
                (unsigned long long)converged, f_mode)},
           {"winner-is-1", true, f_one >= 0.8,
            fmt("%llu/%llu freq=%.3f need>=0.8", (unsigned long long)one_hits,
                (unsigned long long)records.size(), f_one)}}};
}

Outcome crit_critical_window() {
  ExperimentConfig cfg = batch(RunMode::Simulate, 50000, 200, 8000);
  cfg.c = 1.0;
  const auto records = run_trials_collect(cfg);

  std::uint64_t converged = 0, one_hits = 0, mode_hits = 0;
  std::vector<std::uint64_t> bucket(13, 0);  // winners 1..12, then everything else
  for (const auto& r : records) {
    if (r.converged.value_or(false)) {
      ++converged;
      if (r.winner_is_1.value_or(false)) ++one_hits;
      if (r.winner_equals_round1_mode.value_or(false)) ++mode_hits;
      const Label w = r.winner.value_or(0);
      if (w >= 1 && w <= 12) {
        ++bucket[w - 1];
      } else {
        ++bucket[12];
      }
    } else {
      ++bucket[12];
    }
  }
  const double trials = static_cast<double>(records.size());
  const double f_one =
      converged ? static_cast<double>(one_hits) / static_cast<double>(converged) : 0.0;
  const double f_mode =
      converged ? static_cast<double>(mode_hits) / static_cast<double>(converged) : 0.0;

  const auto ref = gaussian_argmax_winner_dist(1.0, 12, 2000000, 8800);
  double tv = 0.0;
  for (int i = 0; i < 13; ++i) {
    const double obs = static_cast<double>(bucket[i]) / trials;
    const double expect = i < 12 ? ref[static_cast<std::size_t>(i)] : 0.0;
    tv += std::fabs(obs - expect);
  }
  tv *= 0.5;

  return {"critical window: winner index spread against the drifted-normal argmax",
          {{"winner-1-frequency-interior", true, f_one > 0.05 && f_one < 0.95,
            fmt("freq=%.3f need in (0.05, 0.95)", f_one)},
           {"winner-equals-round1-mode", true, f_mode >= 0.85,
            fmt("%llu/%llu freq=%.3f need>=0.85", (unsigned long long)mode_hits,
                (unsigned long long)converged, f_mode)},
           {"winner-index-total-variation", true, tv <= 0.20,
            fmt("tv=%.4f over 13 buckets need<=0.20", tv)}}};
}

Outcome crit_boundary_contrast() {
  const auto freq_not_one = [](double alpha, std::uint64_t base_seed) {
    ExperimentConfig cfg = batch(RunMode::Simulate, 50000, 200, base_seed);
    cfg.alpha = alpha;
    const auto records = run_trials_collect(cfg);
    std::uint64_t not_one = 0;
    for (const auto& r : records) {
      const bool is_one = r.converged.value_or(false) && r.winner_is_1.value_or(false);
      if (!is_one) ++not_one;
    }
    return static_cast<double>(not_one) / static_cast<double>(records.size());
  };
  const double below = freq_not_one(0.64, 9100);
  const double above = freq_not_one(0.72, 9200);
  const double contrast = below - above;

  return {"winner identity flips across the density boundary",
          {{"not-1-frequency-contrast", true, contrast >= 0.2,
            fmt("below=%.3f above=%.3f contrast=%.3f need>=0.2", below, above, contrast)}}};
}

Outcome crit_event_frequencies() {
  ExperimentConfig cfg = batch(RunMode::Simulate, 50000, 100, 13000);
  cfg.alpha = 0.7;
  cfg.events = true;
  const auto records = run_trials_collect(cfg);

  std::uint64_t dom_eval = 0, dom_ok = 0;
  std::uint64_t lvl_eval = 0, lvl_ok = 0;
  std::uint64_t conf_eval = 0, conf_ok = 0;
  double dom_worst = 0.0, lvl_worst = 0.0;
  for (const auto& r : records) {
    if (!r.events) continue;
    const EventReport& e = *r.events;
    if (e.dominance.evaluated) {
      ++dom_eval;
      if (e.dominance.ok) ++dom_ok;
      dom_worst = std::min(dom_worst, e.dominance.margin);
    }
    if (e.level2_size.evaluated) {
      ++lvl_eval;
      if (e.level2_size.ok) ++lvl_ok;
      lvl_worst = std::min(lvl_worst, e.level2_size.margin);
    }
    if (e.label_confinement.evaluated) {
      ++conf_eval;
      if (e.label_confinement.ok && e.confinement_exceptions == 0) ++conf_ok;
    }
  }
  const auto freq = [](std::uint64_t ok, std::uint64_t eval) {
    return eval ? static_cast<double>(ok) / static_cast<double>(eval) : 0.0;
  };

  return {"per-trial structural events at n=50000",
          {{"basin-dominance-frequency", false, freq(dom_ok, dom_eval) >= 0.9,
            fmt("%llu/%llu freq=%.3f need>=0.9 worst_margin=%.4g",
                (unsigned long long)dom_ok, (unsigned long long)dom_eval,
                freq(dom_ok, dom_eval), dom_worst)},
           {"level2-size-window-frequency", false, freq(lvl_ok, lvl_eval) >= 0.95,
            fmt("%llu/%llu freq=%.3f need>=0.95 worst_margin=%.4g",
                (unsigned long long)lvl_ok, (unsigned long long)lvl_eval,
                freq(lvl_ok, lvl_eval), lvl_worst)},
           {"label-confinement-no-exceptions", true, freq(conf_ok, conf_eval) >= 0.8,
            fmt("%llu/%llu freq=%.3f need>=0.8", (unsigned long long)conf_ok,
                (unsigned long long)conf_eval, freq(conf_ok, conf_eval))}}};
}

Outcome crit_procedure_agreement() {
  ExperimentConfig cfg = batch(RunMode::Compare, 20000, 50, 14000);
  cfg.alpha = 0.7;
  const auto records = run_trials_collect(cfg);

  double sum = 0.0, worst = 0.0;
  std::uint64_t count = 0;
  for (const auto& r : records) {
    if (!r.alap_disagreement_outside_vk) continue;
    ++count;
    sum += *r.alap_disagreement_outside_vk;
    worst = std::max(worst, *r.alap_disagreement_outside_vk);
  }
  const double mean = count ? sum / static_cast<double>(count) : 1.0;
  double ss = 0.0;
  for (const auto& r : records) {
    if (!r.alap_disagreement_outside_vk) continue;
    const double d = *r.alap_disagreement_outside_vk - mean;
    ss += d * d;
  }
  const double se = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) /
                                    std::sqrt(static_cast<double>(count))
                              : 0.0;

  return {"staged and direct second rounds agree outside the seeded block",
          {{"mean-disagreement-at-most-2pct", false, mean <= 0.02,
            fmt("trials=%llu mean=%.4f se=%.4f max=%.4f need<=0.02",
                (unsigned long long)count, mean, se, worst)}}};
}

}  // namespace

int main() {
  std::printf("acceptance gate: 14 criteria\n");
  std::fflush(stdout);

  std::vector<Outcome> outcomes(14);
  const auto run = [&](int idx, Outcome outcome) {
    outcomes[static_cast<std::size_t>(idx - 1)] = std::move(outcome);
    const Outcome& oc = outcomes[static_cast<std::size_t>(idx - 1)];
    std::printf("[%2d] %s\n", idx, oc.title.c_str());
    for (const Sub& sub : oc.subs) {
      const bool matched = sub.pass == sub.expected_pass;
      std::printf("       %-38s %s  expected %s  %s  %s\n", sub.name.c_str(),
                  sub.pass ? "PASS" : "FAIL", sub.expected_pass ? "PASS" : "FAIL",
                  matched ? "ok        " : "UNEXPECTED", sub.detail.c_str());
    }
    std::fflush(stdout);
  };

  Outcome ratio, norm;
  crit_comparison_grid(ratio, norm);
  run(1, std::move(ratio));
  run(2, std::move(norm));
  run(3, crit_difference_tail());
  run(4, crit_tail_sandwich());
  run(5, crit_round1_and_basins());
  run(6, crit_cc_indifference());
  run(7, crit_dense_consensus());
  run(8, crit_critical_window());
  run(9, crit_boundary_contrast());
  run(10, crit_family_max());
  run(11, crit_top_two_gap());
  run(12, crit_monotone());
  run(13, crit_event_frequencies());
  run(14, crit_procedure_agreement());

  int total = 0, matched = 0, green = 0, documented_short = 0;
  for (const auto& oc : outcomes) {
    for (const Sub& sub : oc.subs) {
      ++total;
      if (sub.pass == sub.expected_pass) ++matched;
      if (sub.pass) ++green;
      if (!sub.expected_pass && !sub.pass) ++documented_short;
    }
  }
  std::printf("summary: %d/%d subchecks match their documented status "
              "(%d pass, %d documented shortfalls)\n",
              matched, total, green, documented_short);
  if (matched == total) {
    std::printf("gate: ACCEPT\n");
    return 0;
  }
  std::printf("gate: REJECT (%d deviations)\n", total - matched);
  return 1;
}
