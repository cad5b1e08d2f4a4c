#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lpalab/dynamics.hpp"
#include "lpalab/suites.hpp"
#include "lpalab/theory.hpp"

namespace lpalab {

// Seeded Monte Carlo batches over G(n,p) runs, JSON-lines per-trial records,
// CSV summaries, and the dispatch behind `verify`. Reruns with an identical
// config are byte-identical except for the timing fields; the thread count
// changes wall time only.

enum class RunMode { Simulate, Compare, Sweep, Verify, Summarize };

const char* run_mode_name(RunMode mode);
std::optional<RunMode> run_mode_from_name(const std::string& name);

struct ExperimentConfig {
  RunMode mode = RunMode::Simulate;
  std::uint64_t n = 0;
  // Exactly one of these three picks the density: p directly, np = n^alpha,
  // or np = c * n^(2/3).
  std::optional<double> p;
  std::optional<double> alpha;
  std::optional<double> c;
  std::uint64_t trials = 1;
  std::uint64_t base_seed = 0;
  int max_rounds = 64;
  int thread_count = 0;  // 0 -> resolve_thread_count decides
  bool events = false;   // level/basin checks per trial (simulate only)
  std::string out;

  double resolved_p() const;
  void validate() const;  // throws std::invalid_argument with the field name
};

// Flag value if positive, else the LPA_THREADS environment variable, else
// hardware concurrency; at least 1.
int resolve_thread_count(int flag_value);

// JSON object with snake_case keys matching the fields above, e.g.
//   {"mode": "simulate", "n": 50000, "alpha": 0.7, "trials": 30,
//    "base_seed": 42, "events": true, "out": "records.jsonl"}
ExperimentConfig config_from_json(const std::string& text);

// Sweep file: a JSON array of simulate/compare config objects (a single
// object is accepted as a one-entry sweep).
std::vector<ExperimentConfig> sweep_from_json(const std::string& text);

struct BasinSummary {
  Label l1 = 0;               // label of the largest basin
  std::uint64_t first = 0;    // largest basin size
  std::uint64_t second = 0;   // runner-up size
};

struct TrialRecord {
  int schema_version = 1;
  std::uint64_t trial = 0;
  std::uint64_t n = 0;
  double p = 0.0;  // the exact density used, whatever form the config gave
  std::uint64_t seed = 0;

  std::optional<int> rounds_executed;
  std::optional<bool> converged;
  std::optional<int> consensus_round;
  std::optional<Label> winner;
  std::optional<bool> winner_is_1;
  std::optional<bool> winner_equals_round1_mode;
  std::optional<std::uint64_t> surviving_label_count;

  std::optional<BasinSummary> basin;   // with events
  std::optional<EventReport> events;   // with events

  // Compare mode: fraction of vertices with index > K whose round-2 labels
  // differ between the two procedures under shared tie randomness, out of
  // the n - K vertices outside V([K]).
  std::optional<double> alap_disagreement_outside_vk;

  double elapsed_seconds = 0.0;  // excluded from the determinism contract
};

// One line of JSON with a fixed key order; absent fields are explicit nulls.
std::string record_to_json(const TrialRecord& record);
TrialRecord record_from_json(const std::string& line);  // throws on malformed input

// Trial t of a batch runs with trial_seed(base_seed, t); the same seed drives
// graph sampling and the run built on it.
TrialRecord run_one_trial(const ExperimentConfig& config, std::uint64_t trial);

// Runs config.trials trials on the resolved thread count and streams records
// in trial order regardless of completion order. A failing trial aborts the
// batch; the error names the trial index.
void run_trials(const ExperimentConfig& config, std::ostream& out);
std::vector<TrialRecord> run_trials_collect(const ExperimentConfig& config);

// Aggregate of the records sharing one (n, p) cell, in file order of first
// appearance. Frequencies with different bases carry their own counts so the
// CSV reconciles with the record stream.
struct SummaryRow {
  std::uint64_t n = 0;
  double p = 0.0;
  std::uint64_t count = 0;
  std::uint64_t converged_count = 0;
  std::uint64_t consensus_le5_count = 0;
  std::uint64_t winner_1_count = 0;        // among converged
  std::uint64_t winner_mode_count = 0;     // among converged
  double rounds_mean = 0.0;

  struct FlagStat {
    std::uint64_t evaluated = 0;
    std::uint64_t ok = 0;
  };
  // Order matches kSummaryFlagNames.
  std::vector<FlagStat> flags;

  std::uint64_t disagreement_count = 0;
  double disagreement_mean = 0.0;
  double disagreement_se = 0.0;
};

// Event-flag columns of the summary, in CSV order.
const std::vector<std::string>& summary_flag_names();

std::vector<SummaryRow> summarize_records(std::istream& jsonl);

// Header plus one line per row. Columns: n, p, np, count, converged_count,
// freq_consensus_le5, freq_winner_1, freq_winner_eq_round1_mode, rounds_mean,
// then per event flag <name>_evaluated and <name>_freq, then
// disagreement_count, disagreement_mean, disagreement_se.
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

// Named suite over its default grid, with optional JSON overrides for the
// grid fields (flat snake_case keys matching the suite's grid struct).
SuiteResult run_suite_configured(const std::string& name, const std::string* grid_json);

void print_suite_result(const SuiteResult& result, std::ostream& out);

}  // namespace lpalab
