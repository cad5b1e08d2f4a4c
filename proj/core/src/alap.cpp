#include "lpalab/alap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpalab {

LevelDecomposition decompose_levels(const Graph& g, std::int64_t k) {
  const std::uint64_t n = g.num_vertices();
  if (k < 1) throw std::invalid_argument("decompose_levels: k must be >= 1");
  const std::uint64_t twok = 2 * static_cast<std::uint64_t>(k);
  if (twok > n) throw std::invalid_argument("decompose_levels: 2k exceeds the vertex count");

  LevelDecomposition dec;
  dec.n = n;
  dec.k = k;
  dec.level_of.assign(n + 1, LevelDecomposition::Level::C);
  dec.A.reserve(twok);
  for (Vertex v = 1; v <= twok; ++v) {
    dec.A.push_back(v);
    dec.level_of[v] = LevelDecomposition::Level::A;
  }
  for (Vertex v = static_cast<Vertex>(twok) + 1; v <= n; ++v) {
    // Sorted adjacency puts any A-neighbor first, so one lookup decides B vs C.
    const Vertex least = g.min_neighbor(v);
    if (least >= 1 && least <= twok) {
      dec.B.push_back(v);
      dec.level_of[v] = LevelDecomposition::Level::B;
    } else {
      dec.C.push_back(v);
    }
  }
  return dec;
}

BasinTable compute_basins(const Graph& g, const LevelDecomposition& dec) {
  const std::size_t twok = dec.A.size();
  BasinTable t;
  t.k = dec.k;
  t.basins.assign(twok, {});
  t.sizes.assign(twok, 0);
  t.basin_of.assign(dec.n + 1, 0);

  for (const Vertex v : dec.B) {
    const Vertex l = g.min_neighbor(v);  // in [1..2k] for every member of B
    t.basins[l - 1].push_back(v);
    ++t.sizes[l - 1];
    t.basin_of[v] = l;
  }

  Label l1 = 1;
  std::uint64_t best = t.sizes[0];
  for (std::size_t l = 2; l <= twok; ++l)
    if (t.sizes[l - 1] > best) {
      best = t.sizes[l - 1];
      l1 = static_cast<Label>(l);
    }
  std::uint64_t second = 0;
  for (std::size_t l = 1; l <= twok; ++l)
    if (l != l1) second = std::max(second, t.sizes[l - 1]);

  t.first_max_label = l1;
  t.first_max = best;
  t.second_max = second;
  return t;
}

namespace {

Label pick_tied(const TiePolicy& policy, Rng& rng, Vertex v, const std::vector<Label>& winners) {
  switch (policy.kind) {
    case TiePolicy::Kind::SmallestLabel:
      return winners.front();
    case TiePolicy::Kind::UniformRandom:
      return winners[rng.next_below(winners.size())];
    case TiePolicy::Kind::DeterministicHash: {
      Label chosen = winners.front();
      std::uint64_t bestHash = tie_hash(policy.hash_seed, v, chosen);
      for (std::size_t i = 1; i < winners.size(); ++i) {
        const std::uint64_t h = tie_hash(policy.hash_seed, v, winners[i]);
        if (h < bestHash) {
          bestHash = h;
          chosen = winners[i];
        }
      }
      return chosen;
    }
  }
  throw std::logic_error("pick_tied: unknown tie policy");
}

// Tie over the full label range [1..2k] without materializing it.
Label pick_full_range(const TiePolicy& policy, Rng& rng, Vertex v, std::size_t twok) {
  switch (policy.kind) {
    case TiePolicy::Kind::SmallestLabel:
      return 1;
    case TiePolicy::Kind::UniformRandom:
      return static_cast<Label>(1 + rng.next_below(twok));
    case TiePolicy::Kind::DeterministicHash: {
      Label chosen = 1;
      std::uint64_t bestHash = tie_hash(policy.hash_seed, v, 1);
      for (std::size_t l = 2; l <= twok; ++l) {
        const std::uint64_t h = tie_hash(policy.hash_seed, v, l);
        if (h < bestHash) {
          bestHash = h;
          chosen = static_cast<Label>(l);
        }
      }
      return chosen;
    }
  }
  throw std::logic_error("pick_full_range: unknown tie policy");
}

}  // namespace

std::vector<Label> alap_round2(const Graph& g, const LevelDecomposition& dec,
                               const BasinTable& basins, const TiePolicy& policy, Rng& rng) {
  const std::uint64_t n = dec.n;
  const std::size_t twok = dec.A.size();
  std::vector<Label> out(n, 0);

  std::vector<std::uint32_t> count(twok + 1, 0);
  std::vector<Label> touched;
  std::vector<Label> winners;

  for (Vertex v = static_cast<Vertex>(twok) + 1; v <= n; ++v) {
    touched.clear();
    std::uint32_t best = 0;
    for (const Vertex w : g.neighbors(v)) {
      const std::uint32_t l = basins.basin_of[w];
      if (l == 0) continue;  // neighbor outside B
      if (count[l] == 0) touched.push_back(static_cast<Label>(l));
      const std::uint32_t c = ++count[l];
      if (c > best) best = c;
    }

    Label chosen;
    if (touched.empty()) {
      chosen = pick_full_range(policy, rng, v, twok);
    } else {
      winners.clear();
      for (const Label l : touched)
        if (count[l] == best) winners.push_back(l);
      std::sort(winners.begin(), winners.end());
      chosen = winners.size() == 1 ? winners.front() : pick_tied(policy, rng, v, winners);
      for (const Label l : touched) count[l] = 0;
    }
    out[v - 1] = chosen;
  }
  return out;
}

namespace {

// Membership counts over vertex ids, supporting rank queries against the
// accumulated basin prefix.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}

  void add(std::size_t i) {
    for (; i < tree_.size(); i += i & (0 - i)) ++tree_[i];
  }

  // Number of inserted ids <= i.
  std::uint64_t prefix(std::size_t i) const {
    std::uint64_t s = 0;
    for (; i > 0; i -= i & (0 - i)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::uint32_t> tree_;
};

}  // namespace

std::vector<std::uint32_t> build_coupled_Z(const Graph& g, const BasinTable& basins,
                                           const DerivedParams& params) {
  const std::uint64_t n = g.num_vertices();
  const std::size_t twok = basins.sizes.size();
  if (params.z.size() != twok)
    throw std::invalid_argument("build_coupled_Z: params and basin table disagree on k");
  for (const double zl : params.z)
    if (zl < 0.0) throw std::domain_error("build_coupled_Z: negative target size z_l");

  Fenwick inPrefix(n);
  std::uint64_t prefix_size = 0;
  std::vector<std::uint32_t> Z(twok, 0);

  for (std::size_t l = 1; l <= twok; ++l) {
    if (l >= 2) {
      for (const Vertex v : basins.basins[l - 2]) inPrefix.add(v);
      prefix_size += basins.sizes[l - 2];
    }

    const std::int64_t want =
        std::llround(static_cast<double>(n) - params.z[l - 1]) - static_cast<std::int64_t>(twok);
    const std::uint64_t s = want < 0 ? 0 : static_cast<std::uint64_t>(want);

    // Padding: the lowest-index vertices of V \ (A cup prefix) up to pad_limit
    // fill the gap between the prefix and the target size exactly.
    Vertex pad_limit = 0;
    if (prefix_size < s) {
      const std::uint64_t need = s - prefix_size;
      std::uint64_t lo = twok, hi = n;  // count(x) = x - 2k - |prefix <= x|
      while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        const std::uint64_t outside = mid - twok - inPrefix.prefix(mid);
        if (outside >= need)
          hi = mid;
        else
          lo = mid + 1;
      }
      pad_limit = static_cast<Vertex>(lo);
    }

    std::uint32_t z_count = 0;
    for (const Vertex w : g.neighbors(static_cast<Vertex>(l))) {
      if (w <= twok) continue;  // edges into A never count
      const std::uint32_t b = basins.basin_of[w];
      const bool in_prefix = b >= 1 && b < l;
      bool in_U;
      if (prefix_size >= s) {
        // Truncation: keep the s lowest-index prefix members.
        in_U = in_prefix && inPrefix.prefix(w - 1) < s;
      } else {
        in_U = in_prefix || w <= pad_limit;
      }
      if (!in_U) ++z_count;
    }
    Z[l - 1] = z_count;
  }
  return Z;
}

AlapResult alap_run(const Graph& g, const DerivedParams& params, std::uint64_t seed,
                    int max_rounds) {
  if (max_rounds < 2) throw std::invalid_argument("alap_run: max_rounds must be >= 2");
  AlapResult res;
  res.dec = decompose_levels(g, params.k);
  res.basins = compute_basins(g, res.dec);

  const LabelVector r1 = round1_minindex(g);
  res.round1_labels.assign(g.num_vertices(), 0);
  for (const Vertex v : res.dec.A) res.round1_labels[v - 1] = r1.labels[v - 1];
  for (const Vertex v : res.dec.B) res.round1_labels[v - 1] = r1.labels[v - 1];

  Rng rng(seed);
  res.round2_labels = alap_round2(g, res.dec, res.basins, TiePolicy::uniform(), rng);
  for (const Vertex v : res.dec.A) res.round2_labels[v - 1] = res.round1_labels[v - 1];

  res.z_values = build_coupled_Z(g, res.basins, params);

  res.exposure.round1_reads = {PairClass::AA, PairClass::AB, PairClass::AC};
  res.exposure.round2_reads = {PairClass::BB, PairClass::BC};
  res.exposure.later_reads = {PairClass::AA, PairClass::AB, PairClass::AC,
                              PairClass::BB, PairClass::BC, PairClass::CC};

  res.rounds_executed = 2;
  LabelVector prev{res.round2_labels, 2};
  MajorityScratch scratch;
  for (int round = 3; round <= max_rounds; ++round) {
    LabelVector next = lpa_round(g, prev, round, TiePolicy::uniform(), rng, &scratch);
    res.rounds_executed = round;
    const bool fixed = next.labels == prev.labels;
    res.later_rounds.push_back(next);
    if (fixed) {
      res.converged = true;
      break;
    }
    prev = std::move(next);
  }
  return res;
}

DisagreementReport compare_lpa_alap(const Graph& g, const DerivedParams& params,
                                    std::uint64_t seed) {
  DisagreementReport rep;
  rep.n = g.num_vertices();
  rep.k = params.k;
  rep.K = params.K;

  Rng rng(seed);  // untouched by hashed ties; present to satisfy the round API
  const LabelVector r1 = round1_minindex(g);
  const LabelVector lpa2 = lpa_round(g, r1, 2, TiePolicy::hashed(seed), rng);

  const LevelDecomposition dec = decompose_levels(g, params.k);
  const BasinTable basins = compute_basins(g, dec);
  std::vector<Label> alap2 = alap_round2(g, dec, basins, TiePolicy::hashed(seed), rng);
  for (const Vertex v : dec.A) alap2[v - 1] = r1.labels[v - 1];

  const std::uint64_t K = static_cast<std::uint64_t>(rep.K);
  for (Vertex v = 1; v <= rep.n; ++v)
    if (alap2[v - 1] != lpa2.labels[v - 1]) {
      rep.disagreeing.push_back(v);
      if (v > K) ++rep.count_outside_VK;
    }
  return rep;
}

}  // namespace lpalab
