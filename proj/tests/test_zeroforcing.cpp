#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "generators.hpp"
#include "modalssc/error.hpp"
#include "modalssc/io.hpp"
#include "modalssc/zeroforcing.hpp"
#include "oracles.hpp"

using namespace modalssc;

namespace {

LoopDigraph ring_graph() {
  return build_delta_network_graph(load_network(std::string(MODALSSC_DATA_DIR) + "/ring6.json"))
      .graph;
}

LoopDigraph path3() {
  LoopDigraph g(3);
  g.add_edge(0, 1, EdgeKind::Strong);
  g.add_edge(1, 2, EdgeKind::Strong);
  return g;
}

std::vector<int> black_list(const std::vector<char>& b) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(b.size()); ++v)
    if (b[v]) out.push_back(v);
  return out;
}

}  // namespace

TEST(DerivedSet, RingFromOneNodeColorsBackwards) {
  const auto r = derived_set(ring_graph(), {0});
  EXPECT_TRUE(r.is_zfs);
  const std::vector<Force> expected = {{5, 5}, {4, 4}, {3, 3}, {2, 2}, {1, 1}};
  EXPECT_EQ(r.chronicle, expected);
  EXPECT_EQ(r.vertex_weight, 2);
}

TEST(DerivedSet, RingFromEmptySetStalls) {
  const auto r = derived_set(ring_graph(), {});
  EXPECT_FALSE(r.is_zfs);
  EXPECT_TRUE(r.derived_set.empty());
  EXPECT_TRUE(r.chronicle.empty());
}

TEST(DerivedSet, EverySingleRingNodeIsZfs) {
  const auto g = ring_graph();
  for (int i = 0; i < 6; ++i) EXPECT_TRUE(is_zfs(g, {i})) << i;
  EXPECT_FALSE(is_zfs(g, {}));
}

TEST(DerivedSet, FullSetIsAlwaysZfs) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto g = gen::random_graph(rng, 7);
    std::vector<int> all(7);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_TRUE(is_zfs(g, all));
  }
  EXPECT_TRUE(is_zfs(LoopDigraph(3), {0, 1, 2}));
}

TEST(DerivedSet, ExampleNetworkChronicle) {
  const auto spec = load_network(std::string(MODALSSC_DATA_DIR) + "/example14.json");
  const auto r = derived_set(build_delta_network_graph(spec).graph, spec.control_set);
  EXPECT_TRUE(r.is_zfs);
  // Lowest-index node with a valid force goes first; once node 3 is black it
  // forces node 4 before node 4 would force itself.
  const std::vector<Force> expected = {{1, 1}, {0, 2}, {2, 3}};
  EXPECT_EQ(r.chronicle, expected);
}

TEST(DerivedSet, WeakOutNeighbourBlocksForcing) {
  // 0 -> 1 strong, 0 -> 2 weak: the weak white neighbour stops the force.
  LoopDigraph g(3);
  g.add_edge(0, 1, EdgeKind::Strong);
  g.add_edge(0, 2, EdgeKind::Weak);
  EXPECT_EQ(derived_set(g, {0}).derived_set, (std::vector<int>{0}));
  EXPECT_EQ(derived_set(g, {0, 2}).derived_set, (std::vector<int>{0, 1, 2}));
}

TEST(DerivedSet, WhiteNodeMayForce) {
  LoopDigraph g(2);
  g.add_edge(0, 1, EdgeKind::Strong);
  EXPECT_EQ(derived_set(g, {}).derived_set, (std::vector<int>{1}));
}

TEST(DerivedSet, RejectsOutOfRangeNodes) {
  EXPECT_THROW(derived_set(LoopDigraph(2), {2}), std::out_of_range);
}

TEST(DerivedSetProperty, FastAndReferenceKernelsAgree) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    std::uniform_int_distribution<int> nd(1, 12);
    const auto g = gen::random_graph(rng, nd(rng));
    const auto z = gen::random_subset(rng, g.node_count());
    const auto a = derived_set(g, z);
    const auto b = derived_set_reference(g, z);
    EXPECT_EQ(a.derived_set, b.derived_set);
    EXPECT_EQ(a.chronicle, b.chronicle);
    std::uint64_t m = 0;
    for (int v : z) m |= std::uint64_t{1} << v;
    const auto mb = MaskGraph(g).derived(m);
    std::uint64_t expect = 0;
    for (int v : a.derived_set) expect |= std::uint64_t{1} << v;
    EXPECT_EQ(mb, expect);
  }
}

TEST(DerivedSetProperty, ChronicleForcesAreValidWhenApplied) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const auto g = gen::random_graph(rng, 8);
    const auto z = gen::random_subset(rng, 8);
    const auto r = derived_set(g, z);
    const auto adj = oracle::from_graph(g);
    auto black = oracle::mask_to_black(8, 0);
    for (int v : z) black[v] = 1;
    for (const auto& f : r.chronicle) {
      const auto valid = oracle::valid_forces(adj, black);
      EXPECT_NE(std::find(valid.begin(), valid.end(), std::make_pair(f.from, f.to)), valid.end());
      black[f.to] = 1;
    }
    EXPECT_TRUE(oracle::valid_forces(adj, black).empty());
  }
}

TEST(DerivedSetProperty, Confluence) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    std::uniform_int_distribution<int> nd(1, 8);
    const auto g = gen::random_graph(rng, nd(rng));
    const auto z = gen::random_subset(rng, g.node_count());
    const auto expected = derived_set(g, z).derived_set;
    const auto adj = oracle::from_graph(g);
    auto black = oracle::mask_to_black(g.node_count(), 0);
    for (int v : z) black[v] = 1;
    for (int k = 0; k < 20; ++k)
      EXPECT_EQ(black_list(oracle::derived_random_order(adj, black, rng)), expected);
  }
}

TEST(DerivedSetProperty, MonotoneIdempotentAndSupersetClosed) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    std::uniform_int_distribution<int> nd(1, 8);
    const auto g = gen::random_graph(rng, nd(rng));
    const int n = g.node_count();
    auto z = gen::random_subset(rng, n, 0.25);
    auto zp = z;
    for (int v : gen::random_subset(rng, n, 0.3)) zp.push_back(v);
    std::sort(zp.begin(), zp.end());
    zp.erase(std::unique(zp.begin(), zp.end()), zp.end());
    const auto dz = derived_set(g, z);
    const auto dzp = derived_set(g, zp);
    EXPECT_TRUE(std::includes(dzp.derived_set.begin(), dzp.derived_set.end(),
                              dz.derived_set.begin(), dz.derived_set.end()));
    EXPECT_EQ(derived_set(g, dz.derived_set).derived_set, dz.derived_set);
    if (dz.is_zfs) EXPECT_TRUE(dzp.is_zfs);
  }
}

TEST(MinZfs, RingHasWeightTwo) {
  const auto g = ring_graph();
  const auto r = min_zfs(g);
  EXPECT_EQ(r.weight, 2);
  EXPECT_EQ(r.set, std::vector<int>{0});
  EXPECT_EQ(oracle::brute_min_zfs_weight(oracle::from_graph(g)), 2);
}

TEST(MinZfs, SingleNodeCases) {
  LoopDigraph strong(1, {3});
  strong.add_edge(0, 0, EdgeKind::Strong);
  EXPECT_EQ(min_zfs(strong).weight, 0);
  EXPECT_TRUE(min_zfs(strong).set.empty());
  LoopDigraph weak(1, {3});
  weak.add_edge(0, 0, EdgeKind::Weak);
  EXPECT_EQ(min_zfs(weak).weight, 3);
  EXPECT_EQ(min_zfs(weak).set, std::vector<int>{0});
}

TEST(MinZfs, TieBreakIsLexicographic) {
  // Node 2 is isolated and must be chosen; either of 0 and 1 completes a
  // minimum set, and {0, 2} is the smaller list.
  LoopDigraph g(3);
  g.add_edge(0, 0, EdgeKind::Weak);
  g.add_edge(1, 1, EdgeKind::Weak);
  g.add_edge(2, 2, EdgeKind::Weak);
  g.add_edge(0, 1, EdgeKind::Strong);
  g.add_edge(1, 0, EdgeKind::Strong);
  const auto r = min_zfs(g);
  EXPECT_EQ(r.weight, 2);
  EXPECT_EQ(r.set, (std::vector<int>{0, 2}));
  EXPECT_EQ(min_zfs_serial(g).set, r.set);
}

TEST(MinZfs, CapIsEnforced) {
  LoopDigraph g(5);
  EXPECT_THROW(min_zfs(g, 4), SearchLimitError);
  EXPECT_THROW(min_zfs_serial(g, 4), SearchLimitError);
  EXPECT_NO_THROW(min_zfs(g, 5));
}

TEST(MinZfs, CapFromEnvironment) {
  ::setenv("MODAL_SSC_SEARCH_CAP", "7", 1);
  EXPECT_EQ(search_cap_from_env(), 7);
  ::setenv("MODAL_SSC_SEARCH_CAP", "abc", 1);
  EXPECT_THROW(search_cap_from_env(), ValidationError);
  ::unsetenv("MODAL_SSC_SEARCH_CAP");
  EXPECT_EQ(search_cap_from_env(), kDefaultSearchCap);
}

TEST(MinZfsProperty, MatchesEnumerationAndSerialKernel) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    std::uniform_int_distribution<int> nd(1, 10);
    const auto g = gen::random_graph(rng, nd(rng), 0.25);
    const auto par = min_zfs(g);
    const auto ser = min_zfs_serial(g);
    EXPECT_EQ(par.weight, oracle::brute_min_zfs_weight(oracle::from_graph(g)));
    EXPECT_EQ(par.weight, ser.weight);
    EXPECT_EQ(par.set, ser.set);
    EXPECT_TRUE(is_zfs(g, par.set));
    long w = 0;
    for (int v : par.set) w += g.weight(v);
    EXPECT_EQ(w, par.weight);
  }
}

TEST(OrdinaryRule, PathCases) {
  const auto g = path3();
  EXPECT_EQ(ordinary_derived_set(g, {0}).derived_set, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(ordinary_derived_set(g, {1}).derived_set, (std::vector<int>{1, 2}));
  EXPECT_TRUE(ordinary_derived_set(LoopDigraph(3), {}).derived_set.empty());
  LoopDigraph looped(1);
  looped.add_edge(0, 0, EdgeKind::Weak);
  EXPECT_THROW(ordinary_derived_set(looped, {}), ValidationError);
}

TEST(OrdinaryRuleProperty, MatchesLoopRuleWithWeakSelfLoops) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 300; ++t) {
    std::uniform_int_distribution<int> nd(1, 8);
    // Ordinary graphs treat every edge as strong.
    const auto g = gen::random_graph(rng, nd(rng), 0.3, 1.0, false);
    const auto z = gen::random_subset(rng, g.node_count(), 0.4);
    const auto ordinary = ordinary_derived_set(g, z);
    EXPECT_EQ(ordinary.is_zfs, is_zfs(with_weak_self_loops(g), z));
    auto black = oracle::mask_to_black(g.node_count(), 0);
    for (int v : z) black[v] = 1;
    EXPECT_EQ(black_list(oracle::ordinary_derived(oracle::from_graph(g), black)),
              ordinary.derived_set);
  }
}
