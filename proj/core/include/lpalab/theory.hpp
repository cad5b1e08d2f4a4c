#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lpalab/dynamics.hpp"

namespace lpalab {

class Graph;
struct LevelDecomposition;
struct BasinTable;

// Closed-form quantities attached to an (n, p) pair. Ceilings are evaluated
// in extended precision so boundary rounding cannot flip an integer outcome;
// logarithms are natural throughout.
//
//   k      = ceil(15 p^-2 (log(n)/n)^1/2)     level-1 half-size
//   K      = ceil(2 log(n)/p)                 label-confinement horizon
//   omega  = n^3/4 p^5/4                      basin concentration scale
//   Lambda = 1/2 + (1/5) min{1, sqrt(np^4)/2} round-2 majority rate
//   z_l    = n - (l-1)np + (l-1)(l-2)np^2/2   coupled-count sizes, l in [1..2k]
//   k_star = sqrt(log(1/np^3)/(2 np^3))/2     competitive-label horizon
//   eps_n  = (log np)^-1/2
//   gamma_n= (np)^(1/2 - eps_n)               basin runner-up gap scale
//   M_n    = np + sqrt((1 - eps_n/2) np log(1/np^3))  largest-basin location
//
// The optional fields hold only where their expression is a finite real: all
// three need np^3 < 1, and eps_n needs np > 1.
struct DerivedParams {
  std::uint64_t n = 0;
  double p = 0.0;

  std::int64_t k = 0;
  std::int64_t K = 0;
  double omega = 0.0;
  double Lambda = 0.0;
  std::vector<double> z;  // z[l-1] = z_l, l in [1..2k]

  std::optional<double> k_star;
  std::optional<double> eps_n;
  std::optional<double> gamma_n;
  std::optional<double> M_n;

  // Multiplied by the realized count of reference-labeled level-3 vertices to
  // form the round-3 neighborhood gap threshold.
  double frakN_coeff = 0.0;

  double np() const { return static_cast<double>(n) * p; }
};

// Throws std::invalid_argument unless n >= 3 and 0 < p < 1, and
// std::logic_error if a computed field violates its own contract
// (k, K >= 1; z_1 = n; z strictly decreasing while (l-1)p < 1;
// Lambda in (1/2, 7/10]).
DerivedParams derive_params(std::uint64_t n, double p);

// One inequality family, reduced to its worst margin. Positive margin means
// satisfied with that much slack; `ok` is margin >= 0. `evaluated` separates
// "checked and failed" from "not part of this call".
struct CheckOutcome {
  bool evaluated = false;
  bool ok = false;
  double margin = 0.0;
};

// Pairwise-separation check configuration: the first L basins must differ
// pairwise by at least delta * np^2.
struct GapConfig {
  std::int64_t L = 2;
  double delta = 0.1;
};

// Outcomes of the realized-trial checks. Each call below fills its own slice
// and leaves the rest unevaluated; merge_reports combines slices produced by
// different calls on the same trial.
struct EventReport {
  // Basin-size events, from check_events. With m_l = (n-2k)(1-p)^(l-1) p the
  // exact mean of basin l:
  //   dominance:     size_1 - size_l >= (l-1)np^2/1.4 for l in [2..2k],
  //                  and |size_1 - m_1| <= omega
  //   concentration: |size_l - m_l| <= l*omega for l in [1..2k]
  //   level2_size:   (4/3) k np <= |B| <= (8/3) k np
  //   separation:    |size_i - size_j| >= delta np^2 for i != j in [L]
  CheckOutcome dominance;
  CheckOutcome concentration;
  CheckOutcome level2_size;
  CheckOutcome separation;

  // Round-2 label statistics, from check_round2_statistics. With cC(l), cB(l)
  // the counts of round-2 label l in C and B, and r = (1-Lambda)/Lambda:
  //   label_confinement: every v_j with j <= k or j >= K has label in [k];
  //                      confinement_exceptions counts the violators
  //   level3_majority:   cC(1) >= (2 Lambda - 1) n / 2, and
  //                      cC(1) - cC(l) >= (1 - r^(l-1)) cC(1) / 2 for l >= 2
  //   level2_balance:    cB(l) - cB(1) <= 44 np for l in [2..2k]
  //   winner_mass:       cC(l1) >= n / 2k, l1 the largest-basin label
  //   stray_labels:      for each l != l1, the count of label-l vertices in
  //                      the basins of l1, l, and of any v_i adjacent to v_l1
  //                      or v_l, is at most 200 n^3/2 p^(5/2+eps/100)
  CheckOutcome label_confinement;
  std::uint64_t confinement_exceptions = 0;
  CheckOutcome level3_majority;
  CheckOutcome level2_balance;
  CheckOutcome winner_mass;
  CheckOutcome stray_labels;

  // Per-vertex neighborhood statistics over a seeded sample of C, from
  // check_level3_neighborhood_gap, with ref = 1 (or l1 in winner mode) and
  // N = frakN_coeff * cC(ref):
  //   neighbor_gap:          |N(u) cap C_2(ref)| >= |N(u) cap C_2(l)| + N p
  //   neighbor_level2_excess:|N(u) cap B_2(l)| <= |N(u) cap B_2(ref)| + 90np^2
  CheckOutcome neighbor_gap;
  CheckOutcome neighbor_level2_excess;
};

// Copies every evaluated outcome of `from` into `into`.
void merge_reports(EventReport& into, const EventReport& from);

// Basin-size events; pure in (basins, dec, params, gap).
EventReport check_events(const BasinTable& basins, const LevelDecomposition& dec,
                         const DerivedParams& params, const GapConfig& gap = {});

// Round-2 label statistics for either procedure's round-2 vector
// (round2[v-1] is the label of v). The graph supplies only the adjacency
// within A needed by the stray-label exclusion sets. eps is the exponent
// slack in the stray-label threshold.
EventReport check_round2_statistics(const std::vector<Label>& round2, const Graph& g,
                                    const LevelDecomposition& dec, const BasinTable& basins,
                                    const DerivedParams& params, double eps = 0.02);

// Neighborhood statistics on a uniform sample of min(sample_size, |C|)
// vertices of C, drawn without replacement from Rng(seed). With
// use_round1_winner the reference label is the largest-basin label l1
// instead of 1.
EventReport check_level3_neighborhood_gap(const Graph& g, const LevelDecomposition& dec,
                                          const BasinTable& basins,
                                          const std::vector<Label>& round2,
                                          const DerivedParams& params,
                                          std::uint64_t sample_size, std::uint64_t seed,
                                          bool use_round1_winner = false);

}  // namespace lpalab
