#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lpalab/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// Shared simulate/compare options; exactly one density form is accepted.
struct BatchArgs {
  lpalab::ExperimentConfig cfg;
  double p = 0.0;
  double alpha = 0.0;
  double c = 0.0;

  void attach(CLI::App* cmd, bool with_events) {
    cmd->add_option("--n", cfg.n, "number of vertices")->required();
    auto* density = cmd->add_option_group("density", "one of --p, --alpha, --c");
    density->add_option("--p", p, "edge probability");
    density->add_option("--alpha", alpha, "np = n^alpha");
    density->add_option("--c", c, "np = c * n^(2/3)");
    density->require_option(1);
    cmd->add_option("--trials", cfg.trials, "number of trials")->required();
    cmd->add_option("--seed", cfg.base_seed, "base seed")->required();
    cmd->add_option("--max-rounds", cfg.max_rounds, "round cap per trial");
    if (with_events) {
      cmd->add_flag("--events", cfg.events, "run level/basin checks per trial");
    }
    cmd->add_option("--out", cfg.out, "JSONL output path")->required();
  }

  lpalab::ExperimentConfig resolve(CLI::App* cmd, lpalab::RunMode mode, int threads) {
    cfg.mode = mode;
    if (cmd->count("--p")) cfg.p = p;
    if (cmd->count("--alpha")) cfg.alpha = alpha;
    if (cmd->count("--c")) cfg.c = c;
    cfg.thread_count = threads;
    cfg.validate();
    return cfg;
  }
};

int run_batch(const lpalab::ExperimentConfig& cfg) {
  auto out = open_out(cfg.out);
  lpalab::run_trials(cfg, out);
  std::cerr << lpalab::run_mode_name(cfg.mode) << ": wrote " << cfg.trials
            << " records to " << cfg.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"G(n,p) label propagation lab"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (overrides LPA_THREADS; default: hardware)");

  auto* simulate = app.add_subcommand("simulate", "run seeded LPA trials");
  BatchArgs sim_args;
  sim_args.attach(simulate, /*with_events=*/true);

  auto* compare = app.add_subcommand(
      "compare", "round-2 disagreement between the two label attributions");
  BatchArgs cmp_args;
  cmp_args.attach(compare, /*with_events=*/false);

  auto* sweep = app.add_subcommand("sweep", "run a JSON array of batch configs");
  std::string sweep_path;
  sweep->add_option("--config", sweep_path, "JSON config path")->required();

  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  std::string suite_name;
  std::string grid_path;
  verify->add_option("--suite", suite_name, "suite name")
      ->required()
      ->check(CLI::IsMember(lpalab::suite_names()));
  verify->add_option("--grid", grid_path, "JSON grid overrides");

  auto* summarize = app.add_subcommand("summarize", "aggregate records to CSV");
  std::string records_path;
  std::string csv_path;
  summarize->add_option("records", records_path, "JSONL records path")->required();
  summarize->add_option("--out", csv_path, "CSV output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return run_batch(sim_args.resolve(simulate, lpalab::RunMode::Simulate, threads));
    }
    if (compare->parsed()) {
      return run_batch(cmp_args.resolve(compare, lpalab::RunMode::Compare, threads));
    }
    if (sweep->parsed()) {
      auto configs = lpalab::sweep_from_json(read_file(sweep_path));
      for (std::size_t i = 0; i < configs.size(); ++i) {
        auto& cfg = configs[i];
        if (cfg.out.empty()) {
          throw std::runtime_error("sweep entry " + std::to_string(i) +
                                   ": out path required");
        }
        if (threads > 0) cfg.thread_count = threads;
        run_batch(cfg);
      }
      return 0;
    }
    if (verify->parsed()) {
      std::string grid_json;
      const std::string* grid = nullptr;
      if (!grid_path.empty()) {
        grid_json = read_file(grid_path);
        grid = &grid_json;
      }
      const auto result = lpalab::run_suite_configured(suite_name, grid);
      lpalab::print_suite_result(result, std::cout);
      return result.all_pass() ? 0 : 1;
    }
    if (summarize->parsed()) {
      std::ifstream in(records_path);
      if (!in) throw std::runtime_error("cannot open " + records_path);
      const auto rows = lpalab::summarize_records(in);
      auto out = open_out(csv_path);
      lpalab::write_summary_csv(rows, out);
      std::cerr << "summarize: wrote " << rows.size() << " rows to " << csv_path
                << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
