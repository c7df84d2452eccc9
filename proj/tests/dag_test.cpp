#include <gtest/gtest.h>

#include "ftcausal/dag.hpp"
#include "ftcausal/random.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace ftcausal {
namespace {

Dag latent_graph(int n, const std::vector<NodeSet>& parents) {
  std::vector<Node> nodes;
  for (int v = 0; v < n; ++v) nodes.push_back({"v" + std::to_string(v)});
  return Dag(nodes, parents);
}

TEST(DagTest, RejectsCyclesSelfLoopsAndUnknownNodes) {
  std::vector<Node> nodes = {{"a"}, {"b"}, {"c"}};
  EXPECT_THROW(Dag(nodes, {{"a", "b"}, {"b", "c"}, {"c", "a"}}), ValidationError);
  EXPECT_THROW(Dag(nodes, {{"a", "a"}}), ValidationError);
  EXPECT_THROW(Dag(nodes, {{"a", "z"}}), ValidationError);
  EXPECT_THROW(Dag({{"a"}, {"a"}}, std::vector<std::pair<std::string, std::string>>{}),
               ValidationError);
}

TEST(DagTest, StructuralQueries) {
  const Dag g = testutil::load_graph("collider-descendant");
  EXPECT_EQ(parents(g, "Y"), (std::vector<std::string>{"X", "Z"}));
  const auto nd = non_descendants(g, "X");
  EXPECT_EQ(nd, (std::vector<std::string>{"Z"}));
  EXPECT_EQ(g.descendants(g.index_of("X")), g.ids_to_set({"Y", "W"}));
}

TEST(DagTest, TopologicalOrderRespectsEdges) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.below(7));
    const Dag g = latent_graph(n, oracle::random_dag(rng, n));
    std::vector<int> pos(n);
    const auto order = g.topological_order();
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    for (const auto& [u, v] : g.edges()) EXPECT_LT(pos[u], pos[v]);
  }
}

// Rule 1: chains and forks block when the middle node is conditioned on.
TEST(DSeparationTest, ChainBlockedByMiddle) {
  const Dag g = testutil::load_graph("chain");
  EXPECT_FALSE(d_separated(g, parse_dsep_query(g, "X,Z|")));
  EXPECT_TRUE(d_separated(g, parse_dsep_query(g, "X,Z|Y")));
}

// Rule 2: a collider blocks unless it or a descendant is conditioned on.
TEST(DSeparationTest, ColliderOpensWhenConditioned) {
  const Dag g = testutil::load_graph("collider");
  EXPECT_TRUE(d_separated(g, parse_dsep_query(g, "X,Z|")));
  EXPECT_FALSE(d_separated(g, parse_dsep_query(g, "X,Z|Y")));
}

TEST(DSeparationTest, ColliderDescendantOpensPath) {
  const Dag g = testutil::load_graph("collider-descendant");
  EXPECT_TRUE(d_separated(g, parse_dsep_query(g, "X,Z|")));
  EXPECT_FALSE(d_separated(g, parse_dsep_query(g, "X,Z|W")));
  const auto path = d_connecting_path(g, parse_dsep_query(g, "X,Z|W"));
  ASSERT_TRUE(path.has_value());
  EXPECT_EQ(format_path(g, *path), "X -> Y <- Z");
}

TEST(DSeparationTest, QueryParsing) {
  const Dag g = testutil::load_graph("collider-descendant");
  const DSepQuery q = parse_dsep_query(g, " X W , Z | Y ");
  EXPECT_EQ(q.x, g.ids_to_set({"X", "W"}));
  EXPECT_EQ(q.z, g.ids_to_set({"Y"}));
  EXPECT_THROW(parse_dsep_query(g, "X,Q|"), ValidationError);
  EXPECT_THROW(parse_dsep_query(g, "X|Z"), ValidationError);
  EXPECT_THROW(parse_dsep_query(g, "X,X|"), ValidationError);
  EXPECT_THROW(parse_dsep_query(g, ",Z|"), ValidationError);
}

// Reachability, path enumeration and the moral-graph oracle agree.
TEST(DSeparationTest, AgreesWithMoralGraphOracle) {
  Rng rng(11);
  int separated = 0;
  for (int t = 0; t < 3000; ++t) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const auto parents = oracle::random_dag(rng, n);
    const Dag g = latent_graph(n, parents);
    DSepQuery q;
    for (int v = 0; v < n; ++v) {
      switch (rng.below(4)) {
        case 0: q.x |= node_bit(v); break;
        case 1: q.y |= node_bit(v); break;
        case 2: q.z |= node_bit(v); break;
        default: break;
      }
    }
    if (!q.x || !q.y) continue;
    const bool expected = oracle::dsep_moral(parents, q.x, q.y, q.z);
    separated += expected;
    EXPECT_EQ(d_separated(g, q), expected);
    EXPECT_EQ(d_separated(std::span<const NodeSet>(parents), q.x, q.y, q.z), expected);
    EXPECT_EQ(d_separated_by_paths(g, q), expected);
    const auto path = d_connecting_path(g, q);
    EXPECT_EQ(path.has_value(), !expected);
    if (path) EXPECT_TRUE(path_is_active(g, *path, q.z));
  }
  EXPECT_GT(separated, 100);
}

}  // namespace
}  // namespace ftcausal
