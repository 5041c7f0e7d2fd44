#pragma once

// Loop digraphs with strong and weak edges, bipartite pattern graphs, and the
// super-node graph of a network.

#include <cstdint>
#include <utility>
#include <vector>

#include "modalssc/pattern.hpp"

namespace modalssc {

enum class EdgeKind : std::uint8_t { Strong, Weak };

struct Edge {
  int from;
  int to;
  EdgeKind kind;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge& a, const Edge& b) {
    return std::pair{a.from, a.to} <=> std::pair{b.from, b.to};
  }
};

struct OutArc {
  int to;
  EdgeKind kind;
  friend bool operator==(const OutArc&, const OutArc&) = default;
};

// Directed graph on nodes 0..n-1 where every node carries a positive weight
// and every edge, self-loops included, is either strong or weak. At most one
// edge per ordered pair, so the strong and weak sets are disjoint.
class LoopDigraph {
 public:
  LoopDigraph() = default;
  explicit LoopDigraph(int n, std::vector<int> weights = {});

  int node_count() const { return static_cast<int>(out_.size()); }
  int weight(int v) const { return weights_[v]; }
  const std::vector<int>& weights() const { return weights_; }
  long total_weight() const;

  // Throws std::logic_error if (from, to) is already present.
  void add_edge(int from, int to, EdgeKind kind);

  bool has_edge(int from, int to) const;
  bool is_strong(int from, int to) const;
  // Out-arcs sorted by target.
  const std::vector<OutArc>& out(int v) const { return out_[v]; }
  const std::vector<int>& in(int v) const { return in_[v]; }

  std::vector<Edge> edges() const;  // sorted by (from, to)
  std::vector<Edge> edges(EdgeKind kind) const;
  std::size_t edge_count() const;
  bool has_self_loops() const;

  friend bool operator==(const LoopDigraph&, const LoopDigraph&) = default;

 private:
  std::vector<int> weights_;
  std::vector<std::vector<OutArc>> out_;
  std::vector<std::vector<int>> in_;  // sorted sources
};

// G_b of a q x p pattern: column vertices point at row vertices, an edge for
// every nonzero entry, strong for Star.
struct BipartiteGraph {
  int rows = 0;
  int cols = 0;
  std::vector<Edge> edges;  // from = column index, to = row index

  // Nodes 0..rows-1 are the row vertices and rows..rows+cols-1 the column
  // vertices.
  LoopDigraph as_digraph() const;
};

BipartiteGraph bipartite_graph(const PatternMatrix& p);

struct RowRankResult {
  bool full_row_rank = false;
  std::vector<std::pair<int, int>> chronicle;  // (column, row) forces in order
  std::vector<int> white_rows;                 // rows never blackened
};

// Coloring from the all-white state on G_b(p); full row rank for every
// realisation iff every row vertex ends black.
RowRankResult pattern_full_row_rank(const PatternMatrix& p);

// Vertex-level graph of the assembled N x N pattern, unit weights.
LoopDigraph build_global_graph(const NetworkSpec& spec);

struct DeltaNetworkGraph {
  LoopDigraph graph;
  DeltaSet delta;
  CharacteristicVector f;
};

DeltaNetworkGraph build_delta_network_graph(const NetworkSpec& spec);

// Both directed bipartite graphs between subsystems i and j, plus their union
// as a loop-free digraph over V_i then V_j.
struct CouplingSubgraph {
  BipartiteGraph i_to_j;  // pattern A_ji: V_i -> V_j
  BipartiteGraph j_to_i;  // pattern A_ij: V_j -> V_i
  LoopDigraph joint;      // nodes 0..l_i-1 are V_i, then V_j
};

CouplingSubgraph coupling_subgraph(const NetworkSpec& spec, int i, int j);

}  // namespace modalssc
