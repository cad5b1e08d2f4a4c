#include "lpalab/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace lpalab {

void MajorityScratch::ensure(std::size_t label_space) {
  if (count_.size() < label_space) {
    count_.resize(label_space, 0);
    stamp_.resize(label_space, 0);
  }
}

void MajorityScratch::count_closed_neighborhood(const Graph& g, Vertex v,
                                                const std::vector<Label>& labels,
                                                std::vector<Label>& winners) {
  ++epoch_;
  touched_.clear();
  std::uint32_t best = 0;

  auto bump = [&](Label lab) {
    if (stamp_[lab] != epoch_) {
      stamp_[lab] = epoch_;
      count_[lab] = 0;
      touched_.push_back(lab);
    }
    const std::uint32_t c = ++count_[lab];
    if (c > best) best = c;
  };

  bump(labels[v - 1]);
  for (const Vertex u : g.neighbors(v)) bump(labels[u - 1]);

  winners.clear();
  for (const Label lab : touched_)
    if (count_[lab] == best) winners.push_back(lab);
  std::sort(winners.begin(), winners.end());
}

LabelVector init_labels(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("init_labels: n must be >= 1");
  LabelVector lv;
  lv.labels.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) lv.labels[i] = static_cast<Label>(i + 1);
  lv.round = 0;
  return lv;
}

LabelVector lpa_round(const Graph& g, const LabelVector& prev, int round_index,
                      const TiePolicy& policy, Rng& rng, MajorityScratch* scratch) {
  if (prev.round != round_index - 1)
    throw std::logic_error("lpa_round: label vector is not from the previous round");
  const bool round_one = round_index == 1;
  if (round_one != (policy.kind == TiePolicy::Kind::SmallestLabel))
    throw std::logic_error("lpa_round: SmallestLabel is required exactly in round 1");

  const std::uint64_t n = g.num_vertices();
  MajorityScratch local;
  MajorityScratch& ms = scratch ? *scratch : local;
  ms.ensure(n + 1);

  LabelVector next;
  next.labels.resize(n);
  next.round = round_index;

  std::vector<Label> winners;
  for (Vertex v = 1; v <= n; ++v) {
    ms.count_closed_neighborhood(g, v, prev.labels, winners);
    Label chosen;
    if (winners.size() == 1) {
      chosen = winners.front();
    } else {
      switch (policy.kind) {
        case TiePolicy::Kind::SmallestLabel:
          chosen = winners.front();
          break;
        case TiePolicy::Kind::UniformRandom:
          chosen = winners[rng.next_below(winners.size())];
          break;
        case TiePolicy::Kind::DeterministicHash: {
          chosen = winners.front();
          std::uint64_t bestHash = tie_hash(policy.hash_seed, v, chosen);
          for (std::size_t i = 1; i < winners.size(); ++i) {
            const std::uint64_t h = tie_hash(policy.hash_seed, v, winners[i]);
            if (h < bestHash) {
              bestHash = h;
              chosen = winners[i];
            }
          }
          break;
        }
        default:
          throw std::logic_error("lpa_round: unknown tie policy");
      }
    }
    next.labels[v - 1] = chosen;
  }
  return next;
}

LabelVector round1_minindex(const Graph& g) {
  const std::uint64_t n = g.num_vertices();
  LabelVector lv;
  lv.labels.resize(n);
  lv.round = 1;
  for (Vertex v = 1; v <= n; ++v) {
    const Vertex least = g.min_neighbor(v);
    lv.labels[v - 1] = (least != 0 && least < v) ? least : v;
  }
  return lv;
}

std::uint64_t distinct_label_count(const std::vector<Label>& labels, std::uint64_t n) {
  std::vector<bool> seen(n + 1, false);
  std::uint64_t distinct = 0;
  for (const Label lab : labels)
    if (!seen[lab]) {
      seen[lab] = true;
      ++distinct;
    }
  return distinct;
}

std::vector<Label> label_modes(const std::vector<Label>& labels, std::uint64_t n) {
  std::vector<std::uint64_t> freq(n + 1, 0);
  std::uint64_t best = 0;
  for (const Label lab : labels) best = std::max(best, ++freq[lab]);
  std::vector<Label> modes;
  for (std::uint64_t lab = 1; lab <= n; ++lab)
    if (freq[lab] == best) modes.push_back(static_cast<Label>(lab));
  return modes;
}

namespace {

std::vector<std::pair<Label, std::uint64_t>> histogram(const std::vector<Label>& labels,
                                                       std::uint64_t n) {
  std::vector<std::uint64_t> freq(n + 1, 0);
  for (const Label lab : labels) ++freq[lab];
  std::vector<std::pair<Label, std::uint64_t>> h;
  for (std::uint64_t lab = 1; lab <= n; ++lab)
    if (freq[lab] > 0) h.emplace_back(static_cast<Label>(lab), freq[lab]);
  return h;
}

bool all_equal(const std::vector<Label>& labels) {
  for (const Label lab : labels)
    if (lab != labels.front()) return false;
  return true;
}

}  // namespace

RunResult run_lpa(const Graph& g, const RunOptions& opt, std::uint64_t seed) {
  if (opt.max_rounds < 1) throw std::invalid_argument("run_lpa: max_rounds must be >= 1");
  const std::uint64_t n = g.num_vertices();

  RunResult res;
  if (opt.record_histograms) res.per_round_histograms.emplace();

  Rng rng(seed);
  MajorityScratch scratch;
  LabelVector prev = init_labels(n);
  LabelVector cur;

  for (int round = 1; round <= opt.max_rounds; ++round) {
    if (round == 1) {
      cur = round1_minindex(g);
    } else {
      cur = lpa_round(g, prev, round, TiePolicy::uniform(), rng, &scratch);
    }

    if (round == 1) {
      res.round1_modes = label_modes(cur.labels, n);
      res.round1_mode = res.round1_modes.front();
    }
    if (round == 2 && opt.capture_round2) res.round2_labels = cur.labels;
    if (opt.record_histograms) res.per_round_histograms->push_back(histogram(cur.labels, n));
    if (!res.consensus_round && all_equal(cur.labels)) res.consensus_round = round;

    res.rounds_executed = round;
    if (cur.labels == prev.labels) {
      res.converged = true;
      break;
    }
    prev = std::move(cur);
    cur = LabelVector{};
  }

  if (res.converged) {
    res.final_labels = std::move(cur);
  } else {
    res.final_labels = std::move(prev);
  }
  res.surviving_label_count = distinct_label_count(res.final_labels.labels, n);
  if (res.surviving_label_count == 1)
    res.winner = res.final_labels.labels.front();
  return res;
}

}  // namespace lpalab
