#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace lpalab {

using Vertex = std::uint32_t;  // vertices are externally 1-indexed: v_1 .. v_n

struct GnpParams {
  std::uint64_t n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  // Refuse to sample when the expected edge count C(n,2)*p exceeds this.
  std::uint64_t max_expected_edges = 200'000'000;
};

// Immutable undirected graph in compressed sorted-adjacency form.
// Neighbor lists are strictly ascending, loop-free and symmetric; the arrays
// store 1-indexed vertex ids directly.
class Graph {
 public:
  Graph() = default;
  Graph(std::uint64_t n, std::vector<std::uint64_t> offsets, std::vector<Vertex> adjacency);

  // Convenience constructor from an explicit edge list (1-indexed endpoints);
  // duplicates and loops are rejected.
  static Graph from_edges(std::uint64_t n, const std::vector<std::pair<Vertex, Vertex>>& edges);

  std::uint64_t num_vertices() const { return n_; }
  std::uint64_t num_edges() const { return m_; }

  std::uint32_t degree(Vertex v) const;
  std::span<const Vertex> neighbors(Vertex v) const;

  // Smallest neighbor id, or 0 when v is isolated. O(1) thanks to sortedness.
  Vertex min_neighbor(Vertex v) const {
    const auto nb = neighbors(v);
    return nb.empty() ? 0 : nb.front();
  }

  bool has_edge(Vertex u, Vertex v) const;

  // Canonical binary serialization (little-endian): magic, version, n, m,
  // offset table, neighbor array. Byte-identical for identical graphs.
  void write(std::ostream& out) const;
  static Graph read(std::istream& in);

  // Exhaustive structural validation (symmetry, sortedness, loop-freedom,
  // degree-sum identity). Throws std::logic_error on any violation.
  void validate() const;

 private:
  void check_vertex(Vertex v) const;

  std::uint64_t n_ = 0;
  std::uint64_t m_ = 0;
  std::vector<std::uint64_t> off_;  // size n_+1
  std::vector<Vertex> adj_;         // size 2*m_, 1-indexed ids, ascending per vertex
};

// Samples G(n,p): every unordered pair appears independently with probability
// p. Linear-time geometric skip-sampling over the linearized pair index space;
// p = 0 and p = 1 short-circuit to exact constructions. Deterministic in
// (n, p, seed).
Graph sample_gnp(const GnpParams& params);

}  // namespace lpalab
