#include "modalssc/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "modalssc/error.hpp"
#include "modalssc/zeroforcing.hpp"

namespace modalssc {

LoopDigraph::LoopDigraph(int n, std::vector<int> weights)
    : weights_(std::move(weights)), out_(static_cast<std::size_t>(n)),
      in_(static_cast<std::size_t>(n)) {
  if (n < 0) throw std::invalid_argument("negative node count");
  if (weights_.empty()) weights_.assign(static_cast<std::size_t>(n), 1);
  if (static_cast<int>(weights_.size()) != n)
    throw std::invalid_argument("weight vector length differs from node count");
  for (int w : weights_)
    if (w < 1) throw std::invalid_argument("node weights must be positive");
}

long LoopDigraph::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0L);
}

void LoopDigraph::add_edge(int from, int to, EdgeKind kind) {
  const int n = node_count();
  if (from < 0 || from >= n || to < 0 || to >= n)
    throw std::out_of_range("edge endpoint out of range");
  auto& arcs = out_[from];
  auto it = std::lower_bound(arcs.begin(), arcs.end(), to,
                             [](const OutArc& a, int t) { return a.to < t; });
  if (it != arcs.end() && it->to == to)
    throw std::logic_error("duplicate edge " + std::to_string(from) + " -> " +
                           std::to_string(to));
  arcs.insert(it, OutArc{to, kind});
  auto& srcs = in_[to];
  srcs.insert(std::lower_bound(srcs.begin(), srcs.end(), from), from);
}

bool LoopDigraph::has_edge(int from, int to) const {
  const auto& arcs = out_[from];
  auto it = std::lower_bound(arcs.begin(), arcs.end(), to,
                             [](const OutArc& a, int t) { return a.to < t; });
  return it != arcs.end() && it->to == to;
}

bool LoopDigraph::is_strong(int from, int to) const {
  const auto& arcs = out_[from];
  auto it = std::lower_bound(arcs.begin(), arcs.end(), to,
                             [](const OutArc& a, int t) { return a.to < t; });
  return it != arcs.end() && it->to == to && it->kind == EdgeKind::Strong;
}

std::vector<Edge> LoopDigraph::edges() const {
  std::vector<Edge> e;
  for (int v = 0; v < node_count(); ++v)
    for (const auto& a : out_[v]) e.push_back({v, a.to, a.kind});
  return e;
}

std::vector<Edge> LoopDigraph::edges(EdgeKind kind) const {
  auto e = edges();
  std::erase_if(e, [kind](const Edge& x) { return x.kind != kind; });
  return e;
}

std::size_t LoopDigraph::edge_count() const {
  std::size_t c = 0;
  for (const auto& a : out_) c += a.size();
  return c;
}

bool LoopDigraph::has_self_loops() const {
  for (int v = 0; v < node_count(); ++v)
    if (has_edge(v, v)) return true;
  return false;
}

// ---------------------------------------------------------------------------

LoopDigraph BipartiteGraph::as_digraph() const {
  LoopDigraph g(rows + cols);
  for (const auto& e : edges) g.add_edge(rows + e.from, e.to, e.kind);
  return g;
}

BipartiteGraph bipartite_graph(const PatternMatrix& p) {
  BipartiteGraph b{p.rows(), p.cols(), {}};
  for (int j = 0; j < p.cols(); ++j)
    for (int i = 0; i < p.rows(); ++i) {
      const auto s = p(i, j);
      if (s != PatternSymbol::Zero)
        b.edges.push_back({j, i, s == PatternSymbol::Star ? EdgeKind::Strong : EdgeKind::Weak});
    }
  return b;
}

RowRankResult pattern_full_row_rank(const PatternMatrix& p) {
  const auto b = bipartite_graph(p);
  const auto report = derived_set(b.as_digraph(), {});
  RowRankResult r;
  std::vector<bool> black(static_cast<std::size_t>(p.rows()), false);
  for (int v : report.derived_set)
    if (v < p.rows()) black[v] = true;
  for (const auto& f : report.chronicle) r.chronicle.emplace_back(f.from - p.rows(), f.to);
  for (int i = 0; i < p.rows(); ++i)
    if (!black[i]) r.white_rows.push_back(i);
  r.full_row_rank = r.white_rows.empty();
  return r;
}

LoopDigraph build_global_graph(const NetworkSpec& spec) {
  spec.validate();
  const auto p = spec.assemble_pattern();
  LoopDigraph g(p.rows());
  for (int j = 0; j < p.cols(); ++j)
    for (int i = 0; i < p.rows(); ++i) {
      const auto s = p(i, j);
      if (s != PatternSymbol::Zero)
        g.add_edge(j, i, s == PatternSymbol::Star ? EdgeKind::Strong : EdgeKind::Weak);
    }
  return g;
}

DeltaNetworkGraph build_delta_network_graph(const NetworkSpec& spec) {
  auto f = derive_characteristic(spec);
  const int n = spec.node_count();
  LoopDigraph g(n, spec.blocks.dims());
  std::unordered_map<std::string, bool> rank_cache;
  for (int from = 0; from < n; ++from) {
    for (int to = 0; to < n; ++to) {
      if (from == to) {
        if (f[to] != PatternSymbol::Zero)
          g.add_edge(to, to, f[to] == PatternSymbol::Star ? EdgeKind::Strong : EdgeKind::Weak);
        continue;
      }
      auto it = spec.couplings.find({to, from});
      if (it == spec.couplings.end() || it->second.is_all_zero()) continue;
      const auto& p = it->second;
      const auto key = std::to_string(p.rows()) + ":" + p.to_string();
      auto cached = rank_cache.find(key);
      if (cached == rank_cache.end())
        cached = rank_cache.emplace(key, pattern_full_row_rank(p).full_row_rank).first;
      g.add_edge(from, to, cached->second ? EdgeKind::Strong : EdgeKind::Weak);
    }
  }
  return {std::move(g), spec.delta, std::move(f)};
}

CouplingSubgraph coupling_subgraph(const NetworkSpec& spec, int i, int j) {
  if (i == j) throw ValidationError("coupling subgraph needs two distinct subsystems");
  const int n = spec.node_count();
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw ValidationError("coupling subgraph subsystem out of range");
  CouplingSubgraph c;
  c.i_to_j = bipartite_graph(spec.block_pattern(j, i));
  c.j_to_i = bipartite_graph(spec.block_pattern(i, j));
  const int li = spec.blocks.dim(i);
  c.joint = LoopDigraph(li + spec.blocks.dim(j));
  for (const auto& e : c.i_to_j.edges) c.joint.add_edge(e.from, li + e.to, e.kind);
  for (const auto& e : c.j_to_i.edges) c.joint.add_edge(li + e.from, e.to, e.kind);
  return c;
}

}  // namespace modalssc
