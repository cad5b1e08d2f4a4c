#include <benchmark/benchmark.h>

#include <cmath>

#include "lpalab/alap.hpp"
#include "lpalab/binom.hpp"
#include "lpalab/dynamics.hpp"
#include "lpalab/graph.hpp"
#include "lpalab/theory.hpp"

namespace {

using namespace lpalab;

double alpha_density(std::uint64_t n, double alpha) {
  return std::pow(static_cast<double>(n), alpha) / static_cast<double>(n);
}

void BM_SampleGnp(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const double p = alpha_density(n, 0.7);
  std::uint64_t seed = 1;
  std::uint64_t edges = 0;
  for (auto _ : state) {
    const Graph g = sample_gnp({n, p, seed++});
    edges = g.num_edges();
    benchmark::DoNotOptimize(edges);
  }
  state.counters["edges"] = static_cast<double>(edges);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(edges));
}
BENCHMARK(BM_SampleGnp)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_Round1MinIndex(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const Graph g = sample_gnp({n, alpha_density(n, 0.7), 1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(round1_minindex(g));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Round1MinIndex)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_LpaRound(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const Graph g = sample_gnp({n, alpha_density(n, 0.7), 1});
  const LabelVector r1 = round1_minindex(g);
  MajorityScratch scratch;
  for (auto _ : state) {
    Rng rng(2);
    benchmark::DoNotOptimize(
        lpa_round(g, r1, 2, TiePolicy::uniform(), rng, &scratch));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(2 * g.num_edges()));
}
BENCHMARK(BM_LpaRound)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_FullRun(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const Graph g = sample_gnp({n, alpha_density(n, 0.7), 1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_lpa(g, 16, 2));
  }
}
BENCHMARK(BM_FullRun)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_AlapRound2(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const double p = alpha_density(n, 0.7);
  const Graph g = sample_gnp({n, p, 1});
  const DerivedParams params = derive_params(n, p);
  const LevelDecomposition dec = decompose_levels(g, params.k);
  const BasinTable basins = compute_basins(g, dec);
  for (auto _ : state) {
    Rng rng(2);
    benchmark::DoNotOptimize(alap_round2(g, dec, basins, TiePolicy::uniform(), rng));
  }
}
BENCHMARK(BM_AlapRound2)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_BinomCdf(benchmark::State& state) {
  const BinomialSpec b{static_cast<std::int64_t>(state.range(0)), 0.1};
  const auto t = static_cast<std::int64_t>(0.1 * state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(binom_cdf(b, t));
  }
}
BENCHMARK(BM_BinomCdf)->Arg(1000)->Arg(100000)->Arg(10000000);

void BM_DiffDistribution(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(diff_binomial_dist(5000, 4000, 0.02));
  }
}
BENCHMARK(BM_DiffDistribution)->Unit(benchmark::kMicrosecond);

void BM_TieWeighted(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tie_weighted_probs(n, n - 1, 0.5, n / 3, 2.0));
  }
}
BENCHMARK(BM_TieWeighted)->Arg(10)->Arg(30);

void BM_MaxBinomialsCdf(benchmark::State& state) {
  std::vector<std::int64_t> z;
  const std::int64_t n = 100000000;
  const std::int64_t np = 10000;
  for (std::int64_t l = 1; l <= state.range(0); ++l) {
    z.push_back(n - (l - 1) * np + (l - 1) * (l - 2) / 2);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_binomials_cdf(z, 1e-4, np + 300));
  }
}
BENCHMARK(BM_MaxBinomialsCdf)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
