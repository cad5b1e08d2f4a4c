#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <tuple>
#include <vector>

#include "lpalab/dynamics.hpp"
#include "lpalab/graph.hpp"
#include "lpalab/rng.hpp"

using namespace lpalab;

namespace {

LabelVector generic_round1(const Graph& g) {
  Rng rng(0);
  return lpa_round(g, init_labels(g.num_vertices()), 1, TiePolicy::smallest(), rng);
}

}  // namespace

TEST_CASE("initial labels are the indices") {
  CHECK(init_labels(3).labels == std::vector<Label>{1, 2, 3});
  CHECK(init_labels(1).labels == std::vector<Label>{1});
  CHECK(init_labels(5).labels == std::vector<Label>{1, 2, 3, 4, 5});
  CHECK(init_labels(5).round == 0);
}

TEST_CASE("star pulls every label to the center minimum") {
  const auto g = Graph::from_edges(5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}});
  const auto r1 = generic_round1(g);
  CHECK(r1.labels == std::vector<Label>(5, 1));

  const auto res = run_lpa(g, 16, 0);
  CHECK(res.converged);
  CHECK(res.rounds_executed == 2);
  REQUIRE(res.winner.has_value());
  CHECK(*res.winner == 1);
  CHECK(res.surviving_label_count == 1);
  REQUIRE(res.consensus_round.has_value());
  CHECK(*res.consensus_round == 1);
  CHECK(res.round1_mode == 1);
}

TEST_CASE("empty graph is a fixed point") {
  const auto g = Graph::from_edges(10, {});
  Rng rng(5);
  const auto next = lpa_round(g, init_labels(10), 1, TiePolicy::smallest(), rng);
  CHECK(next.labels == init_labels(10).labels);

  const auto res = run_lpa(g, 16, 3);
  CHECK(res.converged);
  CHECK(res.rounds_executed == 1);
  CHECK(res.surviving_label_count == 10);
  CHECK(!res.winner.has_value());
  CHECK(!res.consensus_round.has_value());
}

TEST_CASE("complete graph reaches consensus on label 1") {
  const auto g = sample_gnp({4, 1.0, 0});
  const auto r1 = generic_round1(g);
  CHECK(r1.labels == std::vector<Label>(4, 1));

  const auto res = run_lpa(g, 16, 0);
  CHECK(res.converged);
  CHECK(res.rounds_executed == 2);
  REQUIRE(res.winner.has_value());
  CHECK(*res.winner == 1);
}

TEST_CASE("max_rounds caps an unconverged run") {
  const auto g = sample_gnp({4, 1.0, 0});
  const auto res = run_lpa(g, 1, 0);
  CHECK(res.rounds_executed == 1);
  CHECK(!res.converged);
  // The single executed round already collapses K4 onto label 1; the winner
  // reflects the final vector even though convergence was never observed.
  CHECK(res.surviving_label_count == 1);
  CHECK(res.winner.value() == 1);
}

TEST_CASE("first-round fast path on hand graphs") {
  const auto path = Graph::from_edges(3, {{1, 2}, {2, 3}});
  CHECK(round1_minindex(path).labels == std::vector<Label>{1, 1, 2});
  CHECK(round1_minindex(path).round == 1);

  const auto empty = Graph::from_edges(4, {});
  CHECK(round1_minindex(empty).labels == std::vector<Label>{1, 2, 3, 4});
}

TEST_CASE("first-round fast path equals the generic round") {
  const std::tuple<std::uint64_t, double, std::uint64_t> cases[] = {
      {600, 0.05, 1}, {1500, 0.01, 2}, {2000, 0.002, 3}, {300, 0.3, 4}};
  for (const auto& [n, p, seed] : cases) {
    const auto g = sample_gnp({n, p, seed});
    const auto fast = round1_minindex(g);
    const auto generic = generic_round1(g);
    CHECK(fast.labels == generic.labels);

    const auto& init = init_labels(n).labels;
    for (std::uint64_t i = 0; i < n; ++i) CHECK(fast.labels[i] <= init[i]);
  }
}

TEST_CASE("labels only disappear, never appear") {
  const auto g = sample_gnp({800, 0.02, 9});
  LabelVector cur = init_labels(800);
  Rng rng(17);
  for (int round = 1; round <= 4; ++round) {
    std::set<Label> prev_set(cur.labels.begin(), cur.labels.end());
    cur = lpa_round(g, cur, round,
                    round == 1 ? TiePolicy::smallest() : TiePolicy::uniform(), rng);
    for (const Label lab : cur.labels) CHECK(prev_set.count(lab) == 1);
  }
}

TEST_CASE("runs are deterministic in the seed") {
  const auto g = sample_gnp({800, 0.02, 11});
  const auto a = run_lpa(g, 32, 1234);
  const auto b = run_lpa(g, 32, 1234);
  CHECK(a.rounds_executed == b.rounds_executed);
  CHECK(a.converged == b.converged);
  CHECK(a.final_labels.labels == b.final_labels.labels);
  CHECK(a.surviving_label_count == b.surviving_label_count);
}

TEST_CASE("rng is consumed only on genuine ties") {
  // After round 1 the star is monochromatic: no later tie ever consumes the
  // stream, so the seed cannot matter.
  const auto g = Graph::from_edges(5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}});
  const auto a = run_lpa(g, 16, 1);
  const auto b = run_lpa(g, 16, 999);
  CHECK(a.final_labels.labels == b.final_labels.labels);
  CHECK(a.rounds_executed == b.rounds_executed);
}

TEST_CASE("uniform tie-breaks realize every maximizer") {
  // Path v1-v2-v3 after round 1 carries labels (1,1,2); in round 2 vertex 3
  // sees the tie {1, 2}.
  const auto g = Graph::from_edges(3, {{1, 2}, {2, 3}});
  const LabelVector r1 = round1_minindex(g);
  std::set<Label> seen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const auto r2 = lpa_round(g, r1, 2, TiePolicy::uniform(), rng);
    CHECK(r2.labels[0] == 1);
    CHECK(r2.labels[1] == 1);
    CHECK((r2.labels[2] == 1 || r2.labels[2] == 2));
    seen.insert(r2.labels[2]);
  }
  CHECK(seen == std::set<Label>{1, 2});
}

TEST_CASE("hash ties are reproducible and seed-sensitive") {
  const auto g = Graph::from_edges(3, {{1, 2}, {2, 3}});
  const LabelVector r1 = round1_minindex(g);
  Rng unused1(0), unused2(0);
  const auto a = lpa_round(g, r1, 2, TiePolicy::hashed(42), unused1);
  const auto b = lpa_round(g, r1, 2, TiePolicy::hashed(42), unused2);
  CHECK(a.labels == b.labels);

  std::set<Label> seen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng unused(0);
    seen.insert(lpa_round(g, r1, 2, TiePolicy::hashed(seed), unused).labels[2]);
  }
  CHECK(seen == std::set<Label>{1, 2});
}

TEST_CASE("round-1 mode and modes") {
  // Two disjoint edges: round 1 gives (1,1,3,3), a two-way mode tie.
  const auto g = Graph::from_edges(4, {{1, 2}, {3, 4}});
  const auto res = run_lpa(g, 16, 0);
  CHECK(res.round1_modes == std::vector<Label>{1, 3});
  CHECK(res.round1_mode == 1);
  CHECK(res.surviving_label_count == 2);
  CHECK(!res.winner.has_value());
}

TEST_CASE("histograms track the label counts") {
  const auto g = Graph::from_edges(5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}});
  const auto res = run_lpa(g, 16, 0, true);
  REQUIRE(res.per_round_histograms.has_value());
  REQUIRE(!res.per_round_histograms->empty());
  const auto& h1 = (*res.per_round_histograms)[0];
  REQUIRE(h1.size() == 1);
  CHECK(h1[0].first == 1);
  CHECK(h1[0].second == 5);
}

TEST_CASE("round-2 capture") {
  const auto g = sample_gnp({400, 0.05, 21});
  RunOptions opt;
  opt.capture_round2 = true;
  const auto res = run_lpa(g, opt, 5);
  REQUIRE(res.round2_labels.has_value());
  CHECK(res.round2_labels->size() == 400);
  // Round 2 is reproducible: rerun and compare.
  const auto res2 = run_lpa(g, opt, 5);
  CHECK(*res.round2_labels == *res2.round2_labels);
}

TEST_CASE("label helpers") {
  const std::vector<Label> labels = {1, 1, 3, 3, 2};
  CHECK(distinct_label_count(labels, 5) == 3);
  CHECK(label_modes(labels, 5) == std::vector<Label>{1, 3});
}

TEST_CASE("dense random graphs converge quickly to label 1") {
  const auto g = sample_gnp({2000, 0.1, 31});
  const auto res = run_lpa(g, 16, 7);
  CHECK(res.converged);
  CHECK(res.rounds_executed <= 6);
  REQUIRE(res.winner.has_value());
  CHECK(*res.winner == 1);
  CHECK(*res.winner == res.round1_mode);
}
