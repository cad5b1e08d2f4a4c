#pragma once

#include <cstdint>
#include <vector>

#include "lpalab/dynamics.hpp"
#include "lpalab/graph.hpp"
#include "lpalab/theory.hpp"

namespace lpalab {

// Three-level split of the vertex set around the 2k smallest-index vertices:
// A = {v_1..v_2k}, B = N(A) \ A, C = everything else. A vertex lands in B
// exactly when it lies outside A and has at least one neighbor in A.
struct LevelDecomposition {
  std::uint64_t n = 0;
  std::int64_t k = 0;
  std::vector<Vertex> A;  // {1..2k}
  std::vector<Vertex> B;  // ascending
  std::vector<Vertex> C;  // ascending

  enum class Level : std::uint8_t { A = 0, B = 1, C = 2 };
  std::vector<Level> level_of;  // size n+1, index 0 unused

  bool in_A(Vertex v) const { return level_of[v] == Level::A; }
  bool in_B(Vertex v) const { return level_of[v] == Level::B; }
  bool in_C(Vertex v) const { return level_of[v] == Level::C; }
};

// Throws std::invalid_argument when 2k > n. Deterministic.
LevelDecomposition decompose_levels(const Graph& g, std::int64_t k);

// Basin membership over B: u belongs to basin l when v_l is u's neighbor and
// no v_i with i < l is. Adjacency lists are sorted and A holds the smallest
// ids, so the basin of u in B is simply u's first listed neighbor.
struct BasinTable {
  std::int64_t k = 0;
  std::vector<std::vector<Vertex>> basins;  // basins[l-1], ascending vertex ids
  std::vector<std::uint64_t> sizes;         // sizes[l-1] = |basins[l-1]|
  std::vector<std::uint32_t> basin_of;      // size n+1; 0 for vertices outside B

  // Largest and second-largest basin sizes; ties for the maximum resolve to
  // the smallest label.
  Label first_max_label = 0;
  std::uint64_t first_max = 0;
  std::uint64_t second_max = 0;  // 0 when 2k == 1
};

BasinTable compute_basins(const Graph& g, const LevelDecomposition& dec);

// Second-round labels for every vertex of B and C: u adopts the label i
// maximizing |N(u) cap basin_i|, ties drawn from the maximizer set by
// `policy`. A vertex with no B-neighbors at all draws from the full label set
// [2k]; that convention dominates sparse inputs, so callers should expect it.
// Returned vector has size n with slots of A vertices left 0. Vertices are
// processed in ascending order and `rng` is consumed once per genuine tie
// (maximizer set or fallback set of size > 1), so the output depends only on
// edges into B and the tie stream, never on C-C or A-A pairs.
std::vector<Label> alap_round2(const Graph& g, const LevelDecomposition& dec,
                               const BasinTable& basins, const TiePolicy& policy, Rng& rng);

// Which unordered pair classes each stage is allowed to read. Filled by
// alap_run as a machine-checkable statement of the staged-exposure contract;
// the resampling tests reconstruct runs against it.
enum class PairClass : std::uint8_t { AA, AB, AC, BB, BC, CC };

struct ExposureLedger {
  std::vector<PairClass> round1_reads;  // pairs incident to A
  std::vector<PairClass> round2_reads;  // pairs incident to B, minus A-B
  std::vector<PairClass> later_reads;   // everything
};

struct AlapResult {
  LevelDecomposition dec;
  BasinTable basins;

  // Round 1: smallest index in the closed neighborhood, on A and B only
  // (C slots are 0). Round 2: complete; A keeps its round-1 labels.
  std::vector<Label> round1_labels;
  std::vector<Label> round2_labels;

  // Rounds 3.. run as plain synchronous majority rounds over the full vertex
  // set, continuing the same rng stream, until the vector repeats or
  // max_rounds is hit.
  std::vector<LabelVector> later_rounds;
  bool converged = false;
  int rounds_executed = 0;

  std::vector<std::uint32_t> z_values;  // coupled counts, l in [1..2k]
  ExposureLedger exposure;
};

AlapResult alap_run(const Graph& g, const DerivedParams& params, std::uint64_t seed,
                    int max_rounds = 64);

// Coupled per-label counts Z_l = |N(v_l) \ (A cup U_l)| where U_l is the
// union of basins 1..l-1 truncated, or padded from V \ (A cup basins), to
// size round(n - z_l) - 2k (clamped at 0). "Arbitrary" choices in the
// construction are resolved lowest-index-first, making the counts a
// deterministic function of the graph. Throws std::domain_error when some
// z_l is negative.
std::vector<std::uint32_t> build_coupled_Z(const Graph& g, const BasinTable& basins,
                                           const DerivedParams& params);

// Round-2 comparison of the two procedures on one graph under shared
// per-vertex tie randomness (hash ties keyed by `seed`).
struct DisagreementReport {
  std::uint64_t n = 0;
  std::int64_t k = 0;
  std::int64_t K = 0;
  std::vector<Vertex> disagreeing;     // ascending vertex ids
  std::uint64_t count_outside_VK = 0;  // disagreeing v_j with j > K
};

DisagreementReport compare_lpa_alap(const Graph& g, const DerivedParams& params,
                                    std::uint64_t seed);

}  // namespace lpalab
