#pragma once

// Coloring process on loop digraphs.
//
// A node v forces u when (v, u) is a strong edge and u is the only white
// out-neighbour of v counting strong and weak edges alike. The forcing node
// may itself be white. The derived set is the fixpoint of this rule and does
// not depend on the order in which forces are applied.

#include <cstdint>
#include <vector>

#include "modalssc/graph.hpp"

namespace modalssc {

inline constexpr int kDefaultSearchCap = 20;

struct Force {
  int from;
  int to;
  friend bool operator==(const Force&, const Force&) = default;
};

struct ZfsReport {
  bool is_zfs = false;
  std::vector<int> derived_set;  // sorted
  long vertex_weight = 0;        // total weight of the initial set
  // Forces in application order: at every step the lowest-indexed node with
  // a valid force applies it.
  std::vector<Force> chronicle;
};

ZfsReport derived_set(const LoopDigraph& g, const std::vector<int>& z);
bool is_zfs(const LoopDigraph& g, const std::vector<int>& z);

// Literal rescan-from-node-0 implementation; same result and chronicle as
// derived_set, kept as a reference for testing.
ZfsReport derived_set_reference(const LoopDigraph& g, const std::vector<int>& z);

// Bitmask kernel for graphs of at most 64 nodes.
class MaskGraph {
 public:
  explicit MaskGraph(const LoopDigraph& g);
  int node_count() const { return n_; }
  std::uint64_t derived(std::uint64_t black) const;
  std::uint64_t all() const { return all_; }

 private:
  int n_;
  std::uint64_t all_;
  std::vector<std::uint64_t> out_;
  std::vector<std::uint64_t> strong_;
};

struct MinZfsResult {
  std::vector<int> set;  // sorted
  long weight = 0;
};

// Minimum total node weight over all zero forcing sets, ties broken towards
// the lexicographically smallest sorted node list. Throws SearchLimitError
// when the graph has more than `cap` nodes.
MinZfsResult min_zfs(const LoopDigraph& g, int cap = kDefaultSearchCap);
// Single-threaded enumeration with the reference derived set.
MinZfsResult min_zfs_serial(const LoopDigraph& g, int cap = kDefaultSearchCap);

// Ordinary rule on a loop-free graph with all edges read as strong: a black
// node with exactly one white out-neighbour forces it. Throws
// ValidationError if the graph has a self-loop.
ZfsReport ordinary_derived_set(const LoopDigraph& g, const std::vector<int>& z);
bool is_ordinary_zfs(const LoopDigraph& g, const std::vector<int>& z);

// Copy of a loop-free graph with a weak self-loop added on every node.
LoopDigraph with_weak_self_loops(const LoopDigraph& g);

// Cap for min_zfs taken from MODAL_SSC_SEARCH_CAP, else kDefaultSearchCap.
int search_cap_from_env();

}  // namespace modalssc
