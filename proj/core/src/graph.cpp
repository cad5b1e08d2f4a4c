#include "lpalab/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lpalab/rng.hpp"

namespace lpalab {

namespace {

constexpr char kMagic[8] = {'l', 'p', 'a', 'g', 'r', 'a', 'p', 'h'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint64_t pair_count(std::uint64_t n) { return n * (n - 1) / 2; }

// Number of pairs (a', b'), a' < b', with a' < a, in the lexicographic order
// of 0-indexed pairs.
std::uint64_t pairs_before_row(std::uint64_t n, std::uint64_t a) {
  return a * (n - 1) - a * (a - 1) / 2;
}

// Maps a linear pair index to the 0-indexed pair (a, b), a < b.
std::pair<std::uint64_t, std::uint64_t> unrank_pair(std::uint64_t n, std::uint64_t idx) {
  // Solve pairs_before_row(a) <= idx < pairs_before_row(a+1); the float guess
  // is corrected by integer comparisons so boundary rounding cannot leak.
  const double nn = static_cast<double>(n);
  const double disc = (2.0 * nn - 1.0) * (2.0 * nn - 1.0) - 8.0 * static_cast<double>(idx);
  std::uint64_t a = 0;
  if (disc > 0) {
    const double guess = (2.0 * nn - 1.0 - std::sqrt(disc)) / 2.0;
    a = guess <= 0 ? 0 : static_cast<std::uint64_t>(guess);
    if (a >= n - 1) a = n - 2;
  }
  while (a + 1 < n - 1 && pairs_before_row(n, a + 1) <= idx) ++a;
  while (a > 0 && pairs_before_row(n, a) > idx) --a;
  const std::uint64_t b = a + 1 + (idx - pairs_before_row(n, a));
  return {a, b};
}

// Streams the sampled pairs of one G(n,p) draw in lexicographic order.
// Calling it twice with the same arguments yields the same pairs, which is
// what lets sampling run in two passes (count, then fill) without storing a
// temporary edge list.
template <typename F>
void for_each_sampled_pair(std::uint64_t n, double p, std::uint64_t seed, F&& emit) {
  const std::uint64_t total = pair_count(n);
  if (total == 0 || p <= 0.0) return;
  Rng rng(seed);
  const double inv_log_q = 1.0 / std::log1p(-p);  // log(1-p) < 0
  std::uint64_t idx = 0;
  bool first = true;
  for (;;) {
    // skip ~ Geometric(p): floor(log(1-U)/log(1-p)) with U uniform in [0,1).
    const double u = rng.next_double();
    const double skip_f = std::floor(std::log1p(-u) * inv_log_q);
    if (skip_f >= static_cast<double>(total)) return;  // jumped past the end
    const std::uint64_t skip = static_cast<std::uint64_t>(skip_f);
    idx += skip + (first ? 0 : 1);
    first = false;
    if (idx >= total) return;
    const auto [a, b] = unrank_pair(n, idx);
    emit(static_cast<Vertex>(a + 1), static_cast<Vertex>(b + 1));
  }
}

}  // namespace

Graph::Graph(std::uint64_t n, std::vector<std::uint64_t> offsets, std::vector<Vertex> adjacency)
    : n_(n), off_(std::move(offsets)), adj_(std::move(adjacency)) {
  if (off_.size() != n_ + 1 || off_.front() != 0 || off_.back() != adj_.size())
    throw std::invalid_argument("graph: malformed offset table");
  if (adj_.size() % 2 != 0) throw std::invalid_argument("graph: odd half-edge count");
  m_ = adj_.size() / 2;
}

Graph Graph::from_edges(std::uint64_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<std::uint64_t> off(n + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u < 1 || v < 1 || u > n || v > n || u == v)
      throw std::invalid_argument("graph: bad edge endpoint");
    ++off[u - 1];
    ++off[v - 1];
  }
  std::uint64_t acc = 0;
  for (std::uint64_t v = 0; v <= n; ++v) {
    const std::uint64_t d = off[v];
    off[v] = acc;
    acc += d;
  }
  std::vector<Vertex> adj(acc);
  std::vector<std::uint64_t> cursor(off.begin(), off.end() - 1);
  for (const auto& [u, v] : edges) {
    adj[cursor[u - 1]++] = v;
    adj[cursor[v - 1]++] = u;
  }
  for (std::uint64_t v = 0; v < n; ++v) {
    auto first = adj.begin() + static_cast<std::ptrdiff_t>(off[v]);
    auto last = adj.begin() + static_cast<std::ptrdiff_t>(off[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last)
      throw std::invalid_argument("graph: duplicate edge");
  }
  return Graph(n, std::move(off), std::move(adj));
}

void Graph::check_vertex(Vertex v) const {
  if (v < 1 || v > n_)
    throw std::out_of_range("graph: vertex " + std::to_string(v) + " outside [1.." +
                            std::to_string(n_) + "]");
}

std::uint32_t Graph::degree(Vertex v) const {
  check_vertex(v);
  return static_cast<std::uint32_t>(off_[v] - off_[v - 1]);
}

std::span<const Vertex> Graph::neighbors(Vertex v) const {
  check_vertex(v);
  return {adj_.data() + off_[v - 1], adj_.data() + off_[v]};
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

void Graph::validate() const {
  std::uint64_t degree_sum = 0;
  for (Vertex v = 1; v <= n_; ++v) {
    const auto nb = neighbors(v);
    degree_sum += nb.size();
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] < 1 || nb[i] > n_) throw std::logic_error("graph: neighbor out of range");
      if (nb[i] == v) throw std::logic_error("graph: self loop");
      if (i > 0 && nb[i] <= nb[i - 1])
        throw std::logic_error("graph: neighbor list not strictly ascending");
      if (!has_edge(nb[i], v)) throw std::logic_error("graph: asymmetric edge");
    }
  }
  if (degree_sum != 2 * m_) throw std::logic_error("graph: degree sum != 2m");
}

namespace {

void write_raw(std::ostream& out, const void* data, std::size_t size) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little,
                "serializer assumes a little-endian host");
  write_raw(out, &value, sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("graph: truncated stream");
  return value;
}

}  // namespace

void Graph::write(std::ostream& out) const {
  write_raw(out, kMagic, sizeof(kMagic));
  write_le(out, kFormatVersion);
  write_le(out, n_);
  write_le(out, m_);
  write_raw(out, off_.data(), off_.size() * sizeof(std::uint64_t));
  write_raw(out, adj_.data(), adj_.size() * sizeof(Vertex));
  if (!out) throw std::runtime_error("graph: write failed");
}

Graph Graph::read(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("graph: bad magic");
  const auto version = read_le<std::uint32_t>(in);
  if (version != kFormatVersion) throw std::runtime_error("graph: unsupported version");
  const auto n = read_le<std::uint64_t>(in);
  const auto m = read_le<std::uint64_t>(in);
  std::vector<std::uint64_t> off(n + 1);
  in.read(reinterpret_cast<char*>(off.data()),
          static_cast<std::streamsize>(off.size() * sizeof(std::uint64_t)));
  std::vector<Vertex> adj(2 * m);
  in.read(reinterpret_cast<char*>(adj.data()),
          static_cast<std::streamsize>(adj.size() * sizeof(Vertex)));
  if (!in) throw std::runtime_error("graph: truncated stream");
  return Graph(n, std::move(off), std::move(adj));
}

Graph sample_gnp(const GnpParams& params) {
  const std::uint64_t n = params.n;
  const double p = params.p;
  if (n < 1) throw std::invalid_argument("sample_gnp: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_gnp: p outside [0,1]");
  if (n > std::numeric_limits<Vertex>::max())
    throw std::invalid_argument("sample_gnp: n exceeds vertex id range");

  const std::uint64_t total = pair_count(n);
  const double expected_edges = static_cast<double>(total) * p;
  if (expected_edges > static_cast<double>(params.max_expected_edges))
    throw std::runtime_error("sample_gnp: expected edge count " +
                             std::to_string(static_cast<std::uint64_t>(expected_edges)) +
                             " exceeds cap " + std::to_string(params.max_expected_edges));

  if (p <= 0.0 || total == 0)
    return Graph(n, std::vector<std::uint64_t>(n + 1, 0), {});

  if (p >= 1.0) {
    std::vector<std::uint64_t> off(n + 1);
    for (std::uint64_t v = 0; v <= n; ++v) off[v] = v * (n - 1);
    std::vector<Vertex> adj;
    adj.reserve(n * (n - 1));
    for (std::uint64_t v = 1; v <= n; ++v)
      for (std::uint64_t w = 1; w <= n; ++w)
        if (w != v) adj.push_back(static_cast<Vertex>(w));
    return Graph(n, std::move(off), std::move(adj));
  }

  // Pass 1: degrees only. Pass 2 replays the identical pair stream to fill
  // the adjacency. Pairs arrive lexicographically, so each vertex first
  // collects its smaller neighbors in ascending order (across rows) and then
  // its larger ones (within its own row): the lists come out sorted.
  std::vector<std::uint64_t> off(n + 1, 0);
  for_each_sampled_pair(n, p, params.seed, [&](Vertex u, Vertex v) {
    ++off[u - 1];
    ++off[v - 1];
  });
  std::uint64_t acc = 0;
  for (std::uint64_t v = 0; v <= n; ++v) {
    const std::uint64_t d = off[v];
    off[v] = acc;
    acc += d;
  }
  std::vector<Vertex> adj(acc);
  std::vector<std::uint64_t> cursor(off.begin(), off.end() - 1);
  for_each_sampled_pair(n, p, params.seed, [&](Vertex u, Vertex v) {
    adj[cursor[u - 1]++] = v;
    adj[cursor[v - 1]++] = u;
  });
  return Graph(n, std::move(off), std::move(adj));
}

}  // namespace lpalab
