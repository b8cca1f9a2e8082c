#include <gtest/gtest.h>

#include "oracle.hpp"
#include "properties.hpp"
#include "reqconflict/interlock.hpp"

namespace reqconflict {
namespace {

using Cycles = std::vector<std::vector<int>>;

TEST(Circuits, TwoCycle) { EXPECT_EQ(elementary_cycles(2, {{1}, {0}}), (Cycles{{0, 1}})); }

TEST(Circuits, ChainIsAcyclic) { EXPECT_TRUE(elementary_cycles(3, {{1}, {2}, {}}).empty()); }

TEST(Circuits, SelfLoop) { EXPECT_EQ(elementary_cycles(2, {{0, 1}, {}}), (Cycles{{0}})); }

TEST(Circuits, CompleteDigraphOnThree) {
  // 3 two-cycles and 2 three-cycles.
  const auto got = elementary_cycles(3, {{1, 2}, {0, 2}, {0, 1}});
  EXPECT_EQ(got, (Cycles{{0, 1}, {0, 1, 2}, {0, 2}, {0, 2, 1}, {1, 2}}));
}

TEST(Circuits, MatchExhaustiveEnumeration) {
  const auto r = testing::check_cycles(7, 300, 8);
  EXPECT_TRUE(r.ok()) << r.first_failure;
  EXPECT_GT(r.triggered, 100);
}

TEST(Graph, StringCyclesStartAtSmallestId) {
  InterlockGraph g(DependencyKind::INPUT_OUTPUT);
  for (const auto* v : {"c", "a", "b"}) g.add_vertex(v);
  g.add_edge("c", "a", {"x"});
  g.add_edge("a", "b", {"y"});
  g.add_edge("b", "c", {"z"});
  EXPECT_EQ(elementary_cycles(g), (std::vector<std::vector<std::string>>{{"a", "b", "c"}}));
}

TEST(Graph, EdgesMergeEvidenceAndRejectUnknownVertices) {
  InterlockGraph g(DependencyKind::OPERATION_EVENT);
  g.add_vertex("a");
  g.add_vertex("b");
  g.add_edge("a", "b", {"one"});
  g.add_edge("a", "b", {"two"});
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.has_edge("a", "b"));
  EXPECT_FALSE(g.has_edge("b", "a"));
  EXPECT_THROW(g.add_edge("a", "zzz", {}), std::invalid_argument);
}

TEST(Graph, DotListsEdgesWithLabels) {
  InterlockGraph g(DependencyKind::INPUT_OUTPUT);
  g.add_vertex("R1");
  g.add_vertex("R2");
  g.add_edge("R1", "R2", {"output \"map\" feeds input"});
  const auto dot = to_dot(g);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("\"R1\" -> \"R2\""), std::string::npos);
  EXPECT_NE(dot.find("\\\"map\\\""), std::string::npos);
}

}  // namespace
}  // namespace reqconflict
