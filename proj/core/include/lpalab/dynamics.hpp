#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lpalab/graph.hpp"
#include "lpalab/rng.hpp"

namespace lpalab {

using Label = std::uint32_t;

// Per-vertex labels after a given round; labels[i] belongs to v_{i+1}.
// Round 0 is the initial assignment labels[v_i] = i.
struct LabelVector {
  std::vector<Label> labels;
  int round = 0;
};

struct TiePolicy {
  enum class Kind {
    SmallestLabel,      // mandatory in round 1
    UniformRandom,      // default from round 2 on
    DeterministicHash,  // shared tie randomness for coupling runs
  };
  Kind kind = Kind::UniformRandom;
  std::uint64_t hash_seed = 0;  // used by DeterministicHash only

  static TiePolicy smallest() { return {Kind::SmallestLabel, 0}; }
  static TiePolicy uniform() { return {Kind::UniformRandom, 0}; }
  static TiePolicy hashed(std::uint64_t seed) { return {Kind::DeterministicHash, seed}; }
};

// Scratch for majority counting: an epoch-stamped count table over the label
// space, reset lazily per vertex. Reusable across rounds and runs of equal n.
class MajorityScratch {
 public:
  void ensure(std::size_t label_space);

  // Collects counts of `labels[x]` over the closed neighborhood of v and
  // returns the maximizer set, ascending, in `winners`.
  void count_closed_neighborhood(const Graph& g, Vertex v, const std::vector<Label>& labels,
                                 std::vector<Label>& winners);

 private:
  std::vector<std::uint32_t> count_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
  std::vector<Label> touched_;
};

// One synchronous round: every vertex adopts the most frequent label in its
// closed neighborhood as of the previous round. Vertices are processed in
// ascending index order and the rng stream is consumed only when a genuine
// tie (maximizer set of size > 1) is met, so runs are reproducible.
LabelVector lpa_round(const Graph& g, const LabelVector& prev, int round_index,
                      const TiePolicy& policy, Rng& rng, MajorityScratch* scratch = nullptr);

// Fast exact round 1: all initial labels are distinct, so every neighborhood
// count equals 1 and the smallest-label rule picks min{ i : v_i in N[v] }.
LabelVector round1_minindex(const Graph& g);

LabelVector init_labels(std::uint64_t n);

struct RunOptions {
  int max_rounds = 64;
  bool record_histograms = false;
  bool capture_round2 = false;  // keep a copy of the round-2 vector
};

struct RunResult {
  int rounds_executed = 0;
  bool converged = false;
  LabelVector final_labels;
  std::uint64_t surviving_label_count = 0;
  std::optional<Label> winner;  // present iff surviving_label_count == 1

  // First round after which all vertices carry one common label, if any.
  std::optional<int> consensus_round;

  // Most frequent label(s) after round 1 (ascending); round1_mode is the
  // smallest of them.
  std::vector<Label> round1_modes;
  Label round1_mode = 0;

  std::optional<std::vector<Label>> round2_labels;

  // (label, count) tables per executed round, ascending by label; only kept
  // when requested.
  std::optional<std::vector<std::vector<std::pair<Label, std::uint64_t>>>> per_round_histograms;
};

RunResult run_lpa(const Graph& g, const RunOptions& opt, std::uint64_t seed);

inline RunResult run_lpa(const Graph& g, int max_rounds, std::uint64_t seed,
                         bool record_histograms = false) {
  return run_lpa(g, RunOptions{max_rounds, record_histograms, false}, seed);
}

// Distinct labels present in a vector.
std::uint64_t distinct_label_count(const std::vector<Label>& labels, std::uint64_t n);

// Ascending maximizer set of the label frequency table.
std::vector<Label> label_modes(const std::vector<Label>& labels, std::uint64_t n);

}  // namespace lpalab
