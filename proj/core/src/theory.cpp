#include "lpalab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpalab/alap.hpp"
#include "lpalab/graph.hpp"
#include "lpalab/rng.hpp"

namespace lpalab {

namespace {

std::int64_t ceil_int(long double x) {
  auto c = static_cast<std::int64_t>(std::ceil(x));
  while (static_cast<long double>(c) < x) ++c;
  return c;
}

std::optional<double> finite_or_absent(double x) {
  if (std::isfinite(x)) return x;
  return std::nullopt;
}

// Running worst margin over one inequality family.
struct Worst {
  double margin = std::numeric_limits<double>::infinity();
  void fold(double m) { margin = std::min(margin, m); }
  CheckOutcome outcome() const { return {true, margin >= 0.0, margin}; }
};

std::size_t table_width(const BasinTable& basins, const DerivedParams& params) {
  const auto twok = static_cast<std::size_t>(2 * params.k);
  if (basins.sizes.size() != twok)
    throw std::invalid_argument("event check: basin table and params disagree on k");
  return twok;
}

}  // namespace

DerivedParams derive_params(std::uint64_t n, double p) {
  if (n < 3 || !(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("derive_params: need n >= 3 and 0 < p < 1");

  const long double nl = static_cast<long double>(n);
  const long double pl = p;
  const long double logn = std::log(nl);
  const long double npl = nl * pl;

  DerivedParams d;
  d.n = n;
  d.p = p;
  d.k = ceil_int(15.0L / (pl * pl) * std::sqrt(logn / nl));
  d.K = ceil_int(2.0L * logn / pl);
  d.omega = static_cast<double>(std::pow(nl, 0.75L) * std::pow(pl, 1.25L));
  d.Lambda = static_cast<double>(0.5L + 0.2L * std::min(1.0L, std::sqrt(npl * pl * pl * pl) / 2.0L));
  d.frakN_coeff = 0.1 * (2.0 * d.Lambda - 1.0);

  const double np = static_cast<double>(npl);
  const double np3 = static_cast<double>(npl * pl * pl);
  if (np > 1.0) d.eps_n = 1.0 / std::sqrt(std::log(np));
  if (np3 < 1.0) {
    d.k_star = 0.5 * std::sqrt(std::log(1.0 / np3) / (2.0 * np3));
    if (d.eps_n) {
      d.gamma_n = finite_or_absent(std::pow(np, 0.5 - *d.eps_n));
      d.M_n = finite_or_absent(np + std::sqrt((1.0 - *d.eps_n / 2.0) * np * std::log(1.0 / np3)));
    }
  }

  const std::size_t twok = static_cast<std::size_t>(2 * d.k);
  d.z.resize(twok);
  for (std::size_t l = 1; l <= twok; ++l) {
    const long double lm1 = static_cast<long double>(l - 1);
    d.z[l - 1] = static_cast<double>(nl - lm1 * npl + 0.5L * lm1 * (lm1 - 1.0L) * npl * pl);
  }

  if (d.k < 1 || d.K < 1) throw std::logic_error("derive_params: nonpositive k or K");
  if (d.z[0] != static_cast<double>(n)) throw std::logic_error("derive_params: z_1 != n");
  if (!(d.Lambda > 0.5 && d.Lambda <= 0.7 + 1e-12))
    throw std::logic_error("derive_params: Lambda outside (1/2, 7/10]");
  for (std::size_t l = 1; l + 1 <= twok; ++l)
    if (static_cast<double>(l - 1) * p < 1.0 - 1e-6 && !(d.z[l - 1] > d.z[l]))
      throw std::logic_error("derive_params: z not strictly decreasing in range");
  return d;
}

void merge_reports(EventReport& into, const EventReport& from) {
  auto take = [](CheckOutcome& dst, const CheckOutcome& src) {
    if (src.evaluated) dst = src;
  };
  take(into.dominance, from.dominance);
  take(into.concentration, from.concentration);
  take(into.level2_size, from.level2_size);
  take(into.separation, from.separation);
  if (from.label_confinement.evaluated) {
    into.label_confinement = from.label_confinement;
    into.confinement_exceptions = from.confinement_exceptions;
  }
  take(into.level3_majority, from.level3_majority);
  take(into.level2_balance, from.level2_balance);
  take(into.winner_mass, from.winner_mass);
  take(into.stray_labels, from.stray_labels);
  take(into.neighbor_gap, from.neighbor_gap);
  take(into.neighbor_level2_excess, from.neighbor_level2_excess);
}

EventReport check_events(const BasinTable& basins, const LevelDecomposition& dec,
                         const DerivedParams& params, const GapConfig& gap) {
  const std::size_t twok = table_width(basins, params);
  const double n = static_cast<double>(params.n);
  const double p = params.p;
  const double np2 = params.np() * p;
  const double n2k = n - static_cast<double>(twok);
  const auto size = [&](std::size_t l) { return static_cast<double>(basins.sizes[l - 1]); };
  const auto mean = [&](std::size_t l) { return n2k * std::pow(1.0 - p, l - 1) * p; };

  EventReport rep;

  Worst dom;
  dom.fold(params.omega - std::abs(size(1) - mean(1)));
  for (std::size_t l = 2; l <= twok; ++l)
    dom.fold(size(1) - size(l) - static_cast<double>(l - 1) * np2 / 1.4);
  rep.dominance = dom.outcome();

  Worst conc;
  for (std::size_t l = 1; l <= twok; ++l)
    conc.fold(static_cast<double>(l) * params.omega - std::abs(size(l) - mean(l)));
  rep.concentration = conc.outcome();

  Worst lvl2;
  const double szB = static_cast<double>(dec.B.size());
  const double knp = static_cast<double>(params.k) * params.np();
  lvl2.fold(szB - 4.0 / 3.0 * knp);
  lvl2.fold(8.0 / 3.0 * knp - szB);
  rep.level2_size = lvl2.outcome();

  Worst sep;
  const std::size_t L = std::min<std::size_t>(twok, gap.L < 0 ? 0 : gap.L);
  for (std::size_t i = 1; i <= L; ++i)
    for (std::size_t j = i + 1; j <= L; ++j)
      sep.fold(std::abs(size(i) - size(j)) - gap.delta * np2);
  rep.separation = sep.outcome();

  return rep;
}

EventReport check_round2_statistics(const std::vector<Label>& round2, const Graph& g,
                                    const LevelDecomposition& dec, const BasinTable& basins,
                                    const DerivedParams& params, double eps) {
  if (round2.size() != params.n)
    throw std::invalid_argument("check_round2_statistics: label vector size mismatch");
  const std::size_t twok = table_width(basins, params);
  const double n = static_cast<double>(params.n);
  const double np = params.np();

  std::vector<std::uint64_t> cC(twok + 1, 0), cB(twok + 1, 0);
  for (const Vertex v : dec.C) {
    const Label lab = round2[v - 1];
    if (lab >= 1 && lab <= twok) ++cC[lab];
  }
  for (const Vertex v : dec.B) {
    const Label lab = round2[v - 1];
    if (lab >= 1 && lab <= twok) ++cB[lab];
  }

  EventReport rep;

  const auto k = static_cast<std::uint64_t>(params.k);
  const auto K = static_cast<std::uint64_t>(params.K);
  std::uint64_t exceptions = 0;
  for (std::uint64_t j = 1; j <= params.n; ++j)
    if ((j <= k || j >= K) && round2[j - 1] > k) ++exceptions;
  rep.label_confinement =
      CheckOutcome{true, exceptions == 0,
                   exceptions == 0 ? 0.0 : -static_cast<double>(exceptions)};
  rep.confinement_exceptions = exceptions;

  Worst maj;
  const double c1 = static_cast<double>(cC[1]);
  const double ratio = (1.0 - params.Lambda) / params.Lambda;
  maj.fold(c1 - 0.5 * (2.0 * params.Lambda - 1.0) * n);
  for (std::size_t l = 2; l <= twok; ++l)
    maj.fold(c1 - static_cast<double>(cC[l]) -
             0.5 * (1.0 - std::pow(ratio, static_cast<double>(l - 1))) * c1);
  rep.level3_majority = maj.outcome();

  Worst bal;
  for (std::size_t l = 2; l <= twok; ++l)
    bal.fold(44.0 * np - (static_cast<double>(cB[l]) - static_cast<double>(cB[1])));
  rep.level2_balance = bal.outcome();

  const Label l1 = basins.first_max_label;
  Worst wm;
  wm.fold(static_cast<double>(cC[l1]) - n / static_cast<double>(twok));
  rep.winner_mass = wm.outcome();

  // Label-l count inside the union of the basins of l1, l, and of every v_i
  // adjacent to v_l1 or v_l: the part of B whose labels are entangled with
  // the l1/l comparison. Per-basin label counts make each union a handful of
  // lookups.
  std::vector<std::vector<std::uint32_t>> perBasin(twok + 1,
                                                   std::vector<std::uint32_t>(twok + 1, 0));
  for (const Vertex v : dec.B) {
    const Label lab = round2[v - 1];
    if (lab >= 1 && lab <= twok) ++perBasin[basins.basin_of[v]][lab];
  }
  const auto a_neighbors = [&](Vertex vi, std::vector<Vertex>& out) {
    for (const Vertex w : g.neighbors(vi)) {
      if (w > twok) break;
      out.push_back(w);
    }
  };
  std::vector<Vertex> nbr1;
  a_neighbors(static_cast<Vertex>(l1), nbr1);
  const double cap = 200.0 * std::pow(n, 1.5) * std::pow(params.p, 2.5 + eps / 100.0);

  Worst stray;
  std::vector<char> inS(twok + 1, 0);
  std::vector<Vertex> members, nbrl;
  for (std::size_t l = 1; l <= twok; ++l) {
    if (l == l1) continue;
    members.clear();
    nbrl.clear();
    const auto include = [&](Vertex i) {
      if (!inS[i]) {
        inS[i] = 1;
        members.push_back(i);
      }
    };
    include(static_cast<Vertex>(l1));
    include(static_cast<Vertex>(l));
    for (const Vertex i : nbr1) include(i);
    a_neighbors(static_cast<Vertex>(l), nbrl);
    for (const Vertex i : nbrl) include(i);

    std::uint64_t inside = 0;
    for (const Vertex i : members) inside += perBasin[i][l];
    stray.fold(cap - static_cast<double>(inside));
    for (const Vertex i : members) inS[i] = 0;
  }
  rep.stray_labels = stray.outcome();

  return rep;
}

EventReport check_level3_neighborhood_gap(const Graph& g, const LevelDecomposition& dec,
                                          const BasinTable& basins,
                                          const std::vector<Label>& round2,
                                          const DerivedParams& params,
                                          std::uint64_t sample_size, std::uint64_t seed,
                                          bool use_round1_winner) {
  if (round2.size() != params.n)
    throw std::invalid_argument("check_level3_neighborhood_gap: label vector size mismatch");
  const std::size_t twok = table_width(basins, params);
  const Label ref = use_round1_winner ? basins.first_max_label : 1;

  std::vector<std::uint64_t> cC(twok + 1, 0);
  for (const Vertex v : dec.C) {
    const Label lab = round2[v - 1];
    if (lab >= 1 && lab <= twok) ++cC[lab];
  }
  const double need_gap = params.frakN_coeff * static_cast<double>(cC[ref]) * params.p;
  const double excess_cap = 90.0 * params.np() * params.p;

  std::vector<Vertex> pool = dec.C;
  Rng rng(seed);
  const std::size_t m = std::min<std::size_t>(sample_size, pool.size());
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.next_below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }

  EventReport rep;
  Worst gap, excess;
  std::vector<std::uint32_t> cntB(twok + 1, 0), cntC(twok + 1, 0);
  std::vector<Label> touched;
  for (std::size_t t = 0; t < m; ++t) {
    const Vertex u = pool[t];
    touched.clear();
    for (const Vertex w : g.neighbors(u)) {
      const Label lab = round2[w - 1];
      if (lab < 1 || lab > twok) continue;
      if (dec.in_B(w)) {
        if (cntB[lab] == 0 && cntC[lab] == 0) touched.push_back(lab);
        ++cntB[lab];
      } else if (dec.in_C(w)) {
        if (cntB[lab] == 0 && cntC[lab] == 0) touched.push_back(lab);
        ++cntC[lab];
      }
    }
    for (std::size_t l = 1; l <= twok; ++l) {
      if (l == ref) continue;
      gap.fold(static_cast<double>(cntC[ref]) - static_cast<double>(cntC[l]) - need_gap);
      excess.fold(static_cast<double>(cntB[ref]) + excess_cap - static_cast<double>(cntB[l]));
    }
    for (const Label lab : touched) cntB[lab] = cntC[lab] = 0;
  }
  rep.neighbor_gap = gap.outcome();
  rep.neighbor_level2_excess = excess.outcome();
  return rep;
}

}  // namespace lpalab
