#include "lpalab/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "lpalab/alap.hpp"
#include "lpalab/graph.hpp"
#include "lpalab/rng.hpp"

namespace lpalab {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

struct ModeName {
  RunMode mode;
  const char* name;
};

constexpr std::array<ModeName, 5> kModes = {{{RunMode::Simulate, "simulate"},
                                             {RunMode::Compare, "compare"},
                                             {RunMode::Sweep, "sweep"},
                                             {RunMode::Verify, "verify"},
                                             {RunMode::Summarize, "summarize"}}};

struct EventCheckName {
  const char* name;
  CheckOutcome EventReport::* member;
};

constexpr std::array<EventCheckName, 11> kEventChecks = {{
    {"dominance", &EventReport::dominance},
    {"concentration", &EventReport::concentration},
    {"level2_size", &EventReport::level2_size},
    {"separation", &EventReport::separation},
    {"label_confinement", &EventReport::label_confinement},
    {"level3_majority", &EventReport::level3_majority},
    {"level2_balance", &EventReport::level2_balance},
    {"winner_mass", &EventReport::winner_mass},
    {"stray_labels", &EventReport::stray_labels},
    {"neighbor_gap", &EventReport::neighbor_gap},
    {"neighbor_level2_excess", &EventReport::neighbor_level2_excess},
}};

template <typename T>
void put(ordered& j, const char* key, const std::optional<T>& value) {
  if (value) {
    j[key] = *value;
  } else {
    j[key] = nullptr;
  }
}

template <typename T>
std::optional<T> opt_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

const char* run_mode_name(RunMode mode) {
  for (const auto& m : kModes) {
    if (m.mode == mode) return m.name;
  }
  return "?";
}

std::optional<RunMode> run_mode_from_name(const std::string& name) {
  for (const auto& m : kModes) {
    if (name == m.name) return m.mode;
  }
  return std::nullopt;
}

double ExperimentConfig::resolved_p() const {
  const int given = int(p.has_value()) + int(alpha.has_value()) + int(c.has_value());
  if (given != 1) {
    throw std::invalid_argument("config: exactly one of p, alpha, c must be given");
  }
  const double nn = static_cast<double>(n);
  double value = 0.0;
  if (p) {
    value = *p;
  } else if (alpha) {
    value = std::pow(nn, *alpha) / nn;
  } else {
    value = *c * std::pow(nn, 2.0 / 3.0) / nn;
  }
  if (!(value >= 0.0) || !(value <= 1.0)) {
    throw std::invalid_argument("config: density resolves outside [0, 1]");
  }
  return value;
}

void ExperimentConfig::validate() const {
  if (n == 0) throw std::invalid_argument("config: n must be positive");
  if (trials == 0) throw std::invalid_argument("config: trials must be >= 1");
  if (max_rounds < 1) throw std::invalid_argument("config: max_rounds must be >= 1");
  if (thread_count < 0) throw std::invalid_argument("config: thread_count must be >= 0");
  resolved_p();
}

int resolve_thread_count(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("LPA_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) return static_cast<int>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

ExperimentConfig config_from(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "mode") {
      const auto mode = run_mode_from_name(value.get<std::string>());
      if (!mode) throw std::invalid_argument("config: unknown mode " + value.dump());
      cfg.mode = *mode;
    } else if (key == "n") {
      cfg.n = value.get<std::uint64_t>();
    } else if (key == "p") {
      cfg.p = value.get<double>();
    } else if (key == "alpha") {
      cfg.alpha = value.get<double>();
    } else if (key == "c") {
      cfg.c = value.get<double>();
    } else if (key == "trials") {
      cfg.trials = value.get<std::uint64_t>();
    } else if (key == "base_seed") {
      cfg.base_seed = value.get<std::uint64_t>();
    } else if (key == "max_rounds") {
      cfg.max_rounds = value.get<int>();
    } else if (key == "thread_count") {
      cfg.thread_count = value.get<int>();
    } else if (key == "events") {
      cfg.events = value.get<bool>();
    } else if (key == "out") {
      cfg.out = value.get<std::string>();
    } else {
      throw std::invalid_argument("config: unknown key \"" + key + "\"");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  return config_from(json::parse(text));
}

std::vector<ExperimentConfig> sweep_from_json(const std::string& text) {
  const json j = json::parse(text);
  std::vector<ExperimentConfig> configs;
  if (j.is_object()) {
    configs.push_back(config_from(j));
  } else if (j.is_array()) {
    for (const auto& entry : j) configs.push_back(config_from(entry));
  } else {
    throw std::invalid_argument("sweep: expected a JSON array of configs");
  }
  for (const auto& cfg : configs) {
    if (cfg.mode != RunMode::Simulate && cfg.mode != RunMode::Compare) {
      throw std::invalid_argument("sweep: entries must be simulate or compare configs");
    }
  }
  return configs;
}

namespace {

ordered check_to_json(const CheckOutcome& check) {
  if (!check.evaluated) return nullptr;
  ordered o;
  o["ok"] = check.ok;
  o["margin"] = check.margin;
  return o;
}

CheckOutcome check_from_json(const json& j) {
  CheckOutcome check;
  if (j.is_null()) return check;
  check.evaluated = true;
  check.ok = j.at("ok").get<bool>();
  check.margin = j.at("margin").get<double>();
  return check;
}

ordered events_to_json(const EventReport& events) {
  ordered o;
  for (const auto& entry : kEventChecks) {
    o[entry.name] = check_to_json(events.*(entry.member));
    if (entry.member == &EventReport::label_confinement) {
      if (events.label_confinement.evaluated) {
        o["confinement_exceptions"] = events.confinement_exceptions;
      } else {
        o["confinement_exceptions"] = nullptr;
      }
    }
  }
  return o;
}

EventReport events_from_json(const json& j) {
  EventReport events;
  for (const auto& entry : kEventChecks) {
    if (const auto it = j.find(entry.name); it != j.end()) {
      events.*(entry.member) = check_from_json(*it);
    }
  }
  if (const auto it = j.find("confinement_exceptions");
      it != j.end() && !it->is_null()) {
    events.confinement_exceptions = it->get<std::uint64_t>();
  }
  return events;
}

}  // namespace

std::string record_to_json(const TrialRecord& r) {
  ordered j;
  j["schema_version"] = r.schema_version;
  j["trial"] = r.trial;
  j["n"] = r.n;
  j["p"] = r.p;
  j["seed"] = r.seed;
  put(j, "rounds_executed", r.rounds_executed);
  put(j, "converged", r.converged);
  put(j, "consensus_round", r.consensus_round);
  put(j, "winner", r.winner);
  put(j, "winner_is_1", r.winner_is_1);
  put(j, "winner_equals_round1_mode", r.winner_equals_round1_mode);
  put(j, "surviving_label_count", r.surviving_label_count);
  if (r.basin) {
    j["basin"] = ordered{{"l1", r.basin->l1},
                         {"first", r.basin->first},
                         {"second", r.basin->second},
                         {"gap", r.basin->first - r.basin->second}};
  } else {
    j["basin"] = nullptr;
  }
  j["events"] = r.events ? events_to_json(*r.events) : ordered(nullptr);
  put(j, "alap_disagreement_outside_vk", r.alap_disagreement_outside_vk);
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j.dump();
}

TrialRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  TrialRecord r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != 1) {
    throw std::invalid_argument("record: unsupported schema_version " +
                                std::to_string(r.schema_version));
  }
  r.trial = j.at("trial").get<std::uint64_t>();
  r.n = j.at("n").get<std::uint64_t>();
  r.p = j.at("p").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.rounds_executed = opt_field<int>(j, "rounds_executed");
  r.converged = opt_field<bool>(j, "converged");
  r.consensus_round = opt_field<int>(j, "consensus_round");
  r.winner = opt_field<Label>(j, "winner");
  r.winner_is_1 = opt_field<bool>(j, "winner_is_1");
  r.winner_equals_round1_mode = opt_field<bool>(j, "winner_equals_round1_mode");
  r.surviving_label_count = opt_field<std::uint64_t>(j, "surviving_label_count");
  if (const auto it = j.find("basin"); it != j.end() && !it->is_null()) {
    BasinSummary b;
    b.l1 = it->at("l1").get<Label>();
    b.first = it->at("first").get<std::uint64_t>();
    b.second = it->at("second").get<std::uint64_t>();
    r.basin = b;
  }
  if (const auto it = j.find("events"); it != j.end() && !it->is_null()) {
    r.events = events_from_json(*it);
  }
  r.alap_disagreement_outside_vk = opt_field<double>(j, "alap_disagreement_outside_vk");
  r.elapsed_seconds = j.value("elapsed_seconds", 0.0);
  return r;
}

TrialRecord run_one_trial(const ExperimentConfig& config, std::uint64_t trial) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialRecord record;
  record.trial = trial;
  record.n = config.n;
  record.p = config.resolved_p();
  record.seed = trial_seed(config.base_seed, trial);

  const Graph g = sample_gnp(GnpParams{config.n, record.p, record.seed});

  if (config.mode == RunMode::Simulate) {
    RunOptions opt;
    opt.max_rounds = config.max_rounds;
    opt.capture_round2 = config.events;
    const RunResult res = run_lpa(g, opt, mix64(record.seed ^ kGolden));

    record.rounds_executed = res.rounds_executed;
    record.converged = res.converged;
    record.consensus_round = res.consensus_round;
    record.winner = res.winner;
    if (res.winner) {
      record.winner_is_1 = (*res.winner == 1);
      record.winner_equals_round1_mode = (*res.winner == res.round1_mode);
    }
    record.surviving_label_count = res.surviving_label_count;

    if (config.events) {
      const DerivedParams params = derive_params(config.n, record.p);
      const LevelDecomposition dec = decompose_levels(g, params.k);
      const BasinTable basins = compute_basins(g, dec);
      record.basin = BasinSummary{basins.first_max_label, basins.first_max,
                                  basins.second_max};
      EventReport events = check_events(basins, dec, params);
      merge_reports(events, check_round2_statistics(*res.round2_labels, g, dec,
                                                    basins, params));
      record.events = events;
    }
  } else if (config.mode == RunMode::Compare) {
    const DerivedParams params = derive_params(config.n, record.p);
    const DisagreementReport rep = compare_lpa_alap(g, params, record.seed);
    const auto K = static_cast<std::uint64_t>(rep.K);
    if (K >= rep.n) {
      throw std::domain_error("compare: K >= n leaves no vertex outside V([K])");
    }
    record.alap_disagreement_outside_vk =
        static_cast<double>(rep.count_outside_VK) / static_cast<double>(rep.n - K);
  } else {
    throw std::invalid_argument("run_one_trial: mode must be simulate or compare");
  }

  record.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return record;
}

namespace {

// Parallel map over trial indices; `sink` sees records strictly in trial
// order on the caller's thread.
template <typename Sink>
void run_trials_ordered(const ExperimentConfig& config, Sink sink) {
  config.validate();
  if (config.mode != RunMode::Simulate && config.mode != RunMode::Compare) {
    throw std::invalid_argument("run_trials: mode must be simulate or compare");
  }
  const std::uint64_t total = config.trials;
  const int threads = std::min<std::uint64_t>(
      resolve_thread_count(config.thread_count), total);

  std::vector<std::optional<TrialRecord>> slots(total);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> abort{false};
  std::string failure;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t t = next.fetch_add(1);
      if (t >= total || abort.load()) return;
      try {
        TrialRecord record = run_one_trial(config, t);
        std::lock_guard<std::mutex> lock(mu);
        slots[t] = std::move(record);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (failure.empty()) {
          failure = "trial " + std::to_string(t) + ": " + e.what();
        }
        abort.store(true);
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);

  {
    std::unique_lock<std::mutex> lock(mu);
    for (std::uint64_t t = 0; t < total; ++t) {
      cv.wait(lock, [&] { return slots[t].has_value() || abort.load(); });
      if (!slots[t].has_value()) break;
      TrialRecord record = std::move(*slots[t]);
      slots[t].reset();
      lock.unlock();
      sink(std::move(record));
      lock.lock();
    }
  }

  for (auto& th : pool) th.join();
  if (!failure.empty()) throw std::runtime_error(failure);
}

}  // namespace

void run_trials(const ExperimentConfig& config, std::ostream& out) {
  run_trials_ordered(config, [&](TrialRecord&& record) {
    out << record_to_json(record) << '\n';
    if (!out) throw std::runtime_error("trial " + std::to_string(record.trial) +
                                       ": write failed");
  });
}

std::vector<TrialRecord> run_trials_collect(const ExperimentConfig& config) {
  std::vector<TrialRecord> records;
  records.reserve(config.trials);
  run_trials_ordered(config,
                     [&](TrialRecord&& record) { records.push_back(std::move(record)); });
  return records;
}

const std::vector<std::string>& summary_flag_names() {
  static const std::vector<std::string> names = {
      "dominance",         "concentration",  "level2_size",    "separation",
      "label_confinement", "level3_majority", "level2_balance", "winner_mass"};
  return names;
}

std::vector<SummaryRow> summarize_records(std::istream& jsonl) {
  const auto& flags = summary_flag_names();
  std::vector<SummaryRow> rows;
  std::vector<std::vector<double>> disagreements;  // per row, for the SE pass
  std::vector<double> rounds_sums;

  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(jsonl, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    TrialRecord record;
    try {
      record = record_from_json(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }

    auto row = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& r) {
      return r.n == record.n && r.p == record.p;
    });
    if (row == rows.end()) {
      SummaryRow fresh;
      fresh.n = record.n;
      fresh.p = record.p;
      fresh.flags.resize(flags.size());
      rows.push_back(fresh);
      disagreements.emplace_back();
      rounds_sums.push_back(0.0);
      row = std::prev(rows.end());
    }
    const std::size_t idx = static_cast<std::size_t>(row - rows.begin());

    ++row->count;
    if (record.converged.value_or(false)) {
      ++row->converged_count;
      if (record.winner_is_1.value_or(false)) ++row->winner_1_count;
      if (record.winner_equals_round1_mode.value_or(false)) ++row->winner_mode_count;
    }
    if (record.consensus_round && *record.consensus_round <= 5) {
      ++row->consensus_le5_count;
    }
    if (record.rounds_executed) rounds_sums[idx] += *record.rounds_executed;

    if (record.events) {
      for (std::size_t f = 0; f < flags.size(); ++f) {
        const CheckOutcome& check = (*record.events).*(kEventChecks[f].member);
        if (check.evaluated) {
          ++row->flags[f].evaluated;
          if (check.ok) ++row->flags[f].ok;
        }
      }
    }
    if (record.alap_disagreement_outside_vk) {
      disagreements[idx].push_back(*record.alap_disagreement_outside_vk);
    }
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    SummaryRow& row = rows[i];
    if (row.count > 0) rounds_sums[i] /= static_cast<double>(row.count);
    row.rounds_mean = rounds_sums[i];
    const auto& xs = disagreements[i];
    row.disagreement_count = xs.size();
    if (!xs.empty()) {
      double sum = 0.0;
      for (double x : xs) sum += x;
      row.disagreement_mean = sum / static_cast<double>(xs.size());
      if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) {
          const double d = x - row.disagreement_mean;
          ss += d * d;
        }
        row.disagreement_se = std::sqrt(ss / static_cast<double>(xs.size() - 1)) /
                              std::sqrt(static_cast<double>(xs.size()));
      }
    }
  }
  return rows;
}

namespace {

double freq(std::uint64_t hits, std::uint64_t base) {
  return base == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(base);
}

}  // namespace

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  const auto& flags = summary_flag_names();
  out << "n,p,np,count,converged_count,freq_consensus_le5,freq_winner_1,"
         "freq_winner_eq_round1_mode,rounds_mean";
  for (const auto& name : flags) out << ',' << name << "_evaluated," << name << "_freq";
  out << ",disagreement_count,disagreement_mean,disagreement_se\n";

  char buf[64];
  const auto num = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    out << buf;
  };
  for (const auto& row : rows) {
    out << row.n << ',';
    num(row.p);
    out << ',';
    num(static_cast<double>(row.n) * row.p);
    out << ',' << row.count << ',' << row.converged_count << ',';
    num(freq(row.consensus_le5_count, row.count));
    out << ',';
    num(freq(row.winner_1_count, row.converged_count));
    out << ',';
    num(freq(row.winner_mode_count, row.converged_count));
    out << ',';
    num(row.rounds_mean);
    for (const auto& stat : row.flags) {
      out << ',' << stat.evaluated << ',';
      num(freq(stat.ok, stat.evaluated));
    }
    out << ',' << row.disagreement_count << ',';
    num(row.disagreement_mean);
    out << ',';
    num(row.disagreement_se);
    out << '\n';
  }
}

namespace {

template <typename T>
std::vector<T> vec_or(const json& j, const char* key, std::vector<T> fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  return it->get<std::vector<T>>();
}

DriftingFamilyGrid family_from(const json& j, DriftingFamilyGrid grid) {
  grid.n = j.value("n", grid.n);
  grid.p = j.value("p", grid.p);
  grid.count = j.value("count", grid.count);
  return grid;
}

SuiteResult dispatch_suite(const std::string& name, const json& j) {
  if (name == "bis") {
    BisGrid g;
    g.n_lo = j.value("n_lo", g.n_lo);
    g.n_hi = j.value("n_hi", g.n_hi);
    g.p = vec_or<double>(j, "p", {});
    g.rho = vec_or<double>(j, "rho", {});
    g.ratio_tolerance = j.value("ratio_tolerance", g.ratio_tolerance);
    g.norm_tolerance = j.value("norm_tolerance", g.norm_tolerance);
    return suite_bis(g);
  }
  if (name == "diff") {
    DiffGrid g;
    if (const auto it = j.find("points"); it != j.end()) {
      for (const auto& row : *it) {
        g.points.push_back({row.at(0).get<std::int64_t>(),
                            row.at(1).get<std::int64_t>(), row.at(2).get<double>()});
      }
    }
    g.m = vec_or<std::int64_t>(j, "m", {});
    return suite_diff(g);
  }
  if (name == "slud" || name == "chernoff") {
    TailSandwichGrid g;
    g.n = vec_or<std::int64_t>(j, "n", {});
    g.p = vec_or<double>(j, "p", {});
    g.t_points = j.value("t_points", g.t_points);
    g.tolerance = j.value("tolerance", g.tolerance);
    return name == "slud" ? suite_slud(g) : suite_chernoff(g);
  }
  if (name == "max") {
    MaxGrid g;
    g.family = family_from(j, g.family);
    g.median_lo = j.value("median_lo", g.median_lo);
    g.median_hi = j.value("median_hi", g.median_hi);
    return suite_max(g);
  }
  if (name == "gap") {
    GapGrid g;
    g.family = family_from(j, g.family);
    g.prob_floor = j.value("prob_floor", g.prob_floor);
    g.mc_samples = j.value("mc_samples", g.mc_samples);
    g.mc_seed = j.value("mc_seed", g.mc_seed);
    g.mc_sigmas = j.value("mc_sigmas", g.mc_sigmas);
    return suite_gap(g);
  }
  if (name == "monotone") {
    MonotoneGrid g;
    g.z = vec_or<std::int64_t>(j, "z", {});
    g.p = j.value("p", g.p);
    g.t = vec_or<std::int64_t>(j, "t", {});
    g.s_lo = j.value("s_lo", g.s_lo);
    g.s_hi = j.value("s_hi", g.s_hi);
    g.concavity_trials = j.value("concavity_trials", g.concavity_trials);
    g.concavity_p = j.value("concavity_p", g.concavity_p);
    g.concavity_t_lo = j.value("concavity_t_lo", g.concavity_t_lo);
    g.concavity_t_hi = j.value("concavity_t_hi", g.concavity_t_hi);
    g.tolerance = j.value("tolerance", g.tolerance);
    return suite_monotone(g);
  }
  if (name == "argmax") {
    ArgmaxGrid g;
    g.c = j.value("c", g.c);
    g.samples = j.value("samples", g.samples);
    g.seed = j.value("seed", g.seed);
    g.sigmas = j.value("sigmas", g.sigmas);
    return suite_argmax(g);
  }
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace

SuiteResult run_suite_configured(const std::string& name, const std::string* grid_json) {
  if (!grid_json) return run_suite(name);
  return dispatch_suite(name, json::parse(*grid_json));
}

void print_suite_result(const SuiteResult& result, std::ostream& out) {
  out << "suite " << result.suite << ": "
      << (result.all_pass() ? "PASS" : "FAIL") << '\n';
  for (const auto& rep : result.reports) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "  %-36s %s  checks=%llu  worst_margin=%.6g  tolerance=%g",
                  rep.name.c_str(), rep.pass ? "ok  " : "FAIL",
                  static_cast<unsigned long long>(rep.checks), rep.worst_margin,
                  rep.tolerance);
    out << line;
    if (rep.error_bar > 0.0) {
      std::snprintf(line, sizeof(line), "  error_bar=%.2g", rep.error_bar);
      out << line;
    }
    out << '\n';
    for (const auto& note : rep.notes) out << "    " << note << '\n';
  }
}

}  // namespace lpalab
