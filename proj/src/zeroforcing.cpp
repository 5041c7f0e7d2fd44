#include "modalssc/zeroforcing.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>

#include "modalssc/error.hpp"

namespace modalssc {
namespace {

std::vector<char> initial_black(const LoopDigraph& g, const std::vector<int>& z) {
  std::vector<char> black(static_cast<std::size_t>(g.node_count()), 0);
  for (int v : z) {
    if (v < 0 || v >= g.node_count())
      throw std::out_of_range("initial black node " + std::to_string(v) + " out of range");
    black[v] = 1;
  }
  return black;
}

long weight_of(const LoopDigraph& g, const std::vector<char>& in_set) {
  long w = 0;
  for (int v = 0; v < g.node_count(); ++v)
    if (in_set[v]) w += g.weight(v);
  return w;
}

ZfsReport finish(const LoopDigraph& g, const std::vector<char>& black, long initial_weight,
                 std::vector<Force> chronicle) {
  ZfsReport r;
  for (int v = 0; v < g.node_count(); ++v)
    if (black[v]) r.derived_set.push_back(v);
  r.is_zfs = static_cast<int>(r.derived_set.size()) == g.node_count();
  r.vertex_weight = initial_weight;
  r.chronicle = std::move(chronicle);
  return r;
}

// Incremental engine. Every node tracks how many white out-neighbours it has
// and their index sum, so a node with exactly one names it directly. The
// candidate set holds exactly the nodes that currently have a valid force.
ZfsReport run_incremental(const LoopDigraph& g, const std::vector<int>& z, bool ordinary) {
  const int n = g.node_count();
  auto black = initial_black(g, z);
  const long w0 = weight_of(g, black);
  std::vector<int> white_count(static_cast<std::size_t>(n), 0);
  std::vector<long> white_sum(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    for (const auto& a : g.out(v))
      if (!black[a.to]) {
        ++white_count[v];
        white_sum[v] += a.to;
      }

  auto can_force = [&](int v) {
    if (white_count[v] != 1) return false;
    if (ordinary) return black[v] != 0;
    return g.is_strong(v, static_cast<int>(white_sum[v]));
  };

  std::set<int> candidates;
  for (int v = 0; v < n; ++v)
    if (can_force(v)) candidates.insert(v);

  std::vector<Force> chronicle;
  while (!candidates.empty()) {
    const int v = *candidates.begin();
    const int u = static_cast<int>(white_sum[v]);
    black[u] = 1;
    chronicle.push_back({v, u});
    for (int w : g.in(u)) {
      --white_count[w];
      white_sum[w] -= u;
      if (can_force(w)) candidates.insert(w);
      else candidates.erase(w);
    }
    // Under the ordinary rule a newly black node may now be allowed to force.
    if (ordinary) {
      if (can_force(u)) candidates.insert(u);
    }
  }
  return finish(g, black, w0, std::move(chronicle));
}

// Lexicographic order on sorted node lists encoded as bitmasks.
bool lex_less(std::uint64_t a, std::uint64_t b) {
  if (a == b) return false;
  const int d = std::countr_zero(a ^ b);
  if ((a >> d) & 1U) return (b >> d) != 0;  // a continues with d, b with something larger
  return (a >> d) == 0;                     // a ended where b continues
}

std::vector<int> mask_to_set(std::uint64_t m) {
  std::vector<int> s;
  while (m) {
    s.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return s;
}

void check_cap(const LoopDigraph& g, int cap) {
  if (cap > 62) cap = 62;
  if (g.node_count() > cap)
    throw SearchLimitError("minimum zero forcing search limited to " + std::to_string(cap) +
                           " nodes, graph has " + std::to_string(g.node_count()) +
                           " (raise MODAL_SSC_SEARCH_CAP)");
}

}  // namespace

ZfsReport derived_set(const LoopDigraph& g, const std::vector<int>& z) {
  return run_incremental(g, z, false);
}

bool is_zfs(const LoopDigraph& g, const std::vector<int>& z) { return derived_set(g, z).is_zfs; }

ZfsReport derived_set_reference(const LoopDigraph& g, const std::vector<int>& z) {
  const int n = g.node_count();
  auto black = initial_black(g, z);
  const long w0 = weight_of(g, black);
  std::vector<Force> chronicle;
  for (bool progress = true; progress;) {
    progress = false;
    for (int v = 0; v < n && !progress; ++v) {
      int white = -1;
      int count = 0;
      for (const auto& a : g.out(v))
        if (!black[a.to]) {
          ++count;
          white = a.to;
        }
      if (count == 1 && g.is_strong(v, white)) {
        black[white] = 1;
        chronicle.push_back({v, white});
        progress = true;
      }
    }
  }
  return finish(g, black, w0, std::move(chronicle));
}

MaskGraph::MaskGraph(const LoopDigraph& g)
    : n_(g.node_count()), out_(static_cast<std::size_t>(g.node_count()), 0),
      strong_(static_cast<std::size_t>(g.node_count()), 0) {
  if (n_ > 64) throw std::invalid_argument("bitmask kernel supports at most 64 nodes");
  all_ = n_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
  for (int v = 0; v < n_; ++v)
    for (const auto& a : g.out(v)) {
      out_[v] |= std::uint64_t{1} << a.to;
      if (a.kind == EdgeKind::Strong) strong_[v] |= std::uint64_t{1} << a.to;
    }
}

std::uint64_t MaskGraph::derived(std::uint64_t black) const {
  for (bool progress = true; progress;) {
    progress = false;
    for (int v = 0; v < n_; ++v) {
      const std::uint64_t white = out_[v] & ~black;
      if (white && !(white & (white - 1)) && (white & strong_[v])) {
        black |= white;
        progress = true;
      }
    }
  }
  return black;
}

MinZfsResult min_zfs(const LoopDigraph& g, int cap) {
  check_cap(g, cap);
  const int n = g.node_count();
  const MaskGraph mg(g);
  const std::uint64_t total = std::uint64_t{1} << n;
  const auto& weights = g.weights();

  long best_w = LONG_MAX;
  std::uint64_t best_m = 0;

#pragma omp parallel
  {
    long local_w = LONG_MAX;
    std::uint64_t local_m = 0;
#pragma omp for schedule(dynamic, 256) nowait
    for (std::uint64_t m = 0; m < total; ++m) {
      long w = 0;
      for (std::uint64_t r = m; r; r &= r - 1) w += weights[std::countr_zero(r)];
      if (w > local_w || (w == local_w && !lex_less(m, local_m))) continue;
      if (mg.derived(m) == mg.all()) {
        local_w = w;
        local_m = m;
      }
    }
#pragma omp critical(modalssc_min_zfs_merge)
    {
      if (local_w < best_w || (local_w == best_w && lex_less(local_m, best_m))) {
        best_w = local_w;
        best_m = local_m;
      }
    }
  }
  return {mask_to_set(best_m), best_w};
}

MinZfsResult min_zfs_serial(const LoopDigraph& g, int cap) {
  check_cap(g, cap);
  const int n = g.node_count();
  const std::uint64_t total = std::uint64_t{1} << n;
  long best_w = LONG_MAX;
  std::uint64_t best_m = 0;
  for (std::uint64_t m = 0; m < total; ++m) {
    const auto set = mask_to_set(m);
    long w = 0;
    for (int v : set) w += g.weight(v);
    if (w > best_w || (w == best_w && !lex_less(m, best_m))) continue;
    if (derived_set_reference(g, set).is_zfs) {
      best_w = w;
      best_m = m;
    }
  }
  return {mask_to_set(best_m), best_w};
}

ZfsReport ordinary_derived_set(const LoopDigraph& g, const std::vector<int>& z) {
  if (g.has_self_loops())
    throw ValidationError("ordinary zero forcing needs a graph without self-loops");
  return run_incremental(g, z, true);
}

bool is_ordinary_zfs(const LoopDigraph& g, const std::vector<int>& z) {
  return ordinary_derived_set(g, z).is_zfs;
}

LoopDigraph with_weak_self_loops(const LoopDigraph& g) {
  if (g.has_self_loops()) throw ValidationError("graph already has self-loops");
  LoopDigraph h(g.node_count(), g.weights());
  for (const auto& e : g.edges()) h.add_edge(e.from, e.to, e.kind);
  for (int v = 0; v < g.node_count(); ++v) h.add_edge(v, v, EdgeKind::Weak);
  return h;
}

int search_cap_from_env() {
  const char* raw = std::getenv("MODAL_SSC_SEARCH_CAP");
  if (!raw || !*raw) return kDefaultSearchCap;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 0 || v > 62)
    throw ValidationError(std::string("MODAL_SSC_SEARCH_CAP must be an integer in 0..62, got '") +
                          raw + "'");
  return static_cast<int>(v);
}

}  // namespace modalssc
