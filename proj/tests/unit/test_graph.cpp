#include "doctest.h"

#include "cyclotopo/error.hpp"
#include "cyclotopo/graph.hpp"
#include "oracles.hpp"

using namespace cyclotopo;
using cyclotopo::testing::Rng;

namespace {

TopologyGraph path_graph(int n) {
  TopologyGraph g;
  for (int v = 1; v <= n; ++v) g.add_node(v);
  for (int v = 1; v < n; ++v) g.add_edge(v, v + 1);
  return g;
}

TopologyGraph complete_graph(int n) {
  TopologyGraph g;
  for (int v = 1; v <= n; ++v) g.add_node(v);
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) g.add_edge(a, b);
  return g;
}

TopologyGraph from_edges(std::initializer_list<Edge> edges) {
  TopologyGraph g;
  for (auto [a, b] : edges) {
    g.add_node(a);
    g.add_node(b);
  }
  for (auto [a, b] : edges) g.add_edge(a, b);
  return g;
}

// observed-node graph of the eleven-node chain with 10 and 11 hidden
TopologyGraph chain_gc() {
  return from_edges({{1, 2}, {1, 3}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}, {4, 6},
                     {5, 6}, {5, 7}, {5, 8}, {6, 7}, {6, 8}, {7, 8}, {7, 9}, {8, 9}});
}

std::set<Edge> edge_set(std::initializer_list<Edge> edges) {
  std::set<Edge> out;
  for (auto [a, b] : edges) out.insert(make_edge(a, b));
  return out;
}

}  // namespace

TEST_CASE("edges are stored once and validated") {
  TopologyGraph g;
  g.add_node(1);
  g.add_node(2);
  g.add_edge(2, 1);
  g.add_edge(1, 2);
  CHECK(g.edges().size() == 1);
  CHECK(*g.edges().begin() == Edge{1, 2});
  CHECK_THROWS_AS(g.add_edge(1, 1), InputError);
  CHECK_THROWS_AS(g.add_edge(1, 3), InputError);
  g.remove_edge(1, 2);
  CHECK(g.edges().empty());
}

TEST_CASE("equality ignores annotations") {
  TopologyGraph a = path_graph(3), b = path_graph(3);
  b.set_label(2, NodeLabel::hidden);
  b.set_role(1, NodeRole::leaf);
  CHECK(a == b);
  b.add_edge(1, 3);
  CHECK_FALSE(a == b);
}

TEST_CASE("moralize") {
  SUBCASE("five-node example") {
    TopologyGraph m = moralize(cyclotopo::testing::five_node_example());
    CHECK(m.edges() == edge_set({{1, 2}, {2, 3}, {2, 4}, {4, 5}, {2, 5}, {1, 3}, {1, 4}, {3, 4}}));
    CHECK_FALSE(m.has_edge(1, 5));
    CHECK_FALSE(m.has_edge(3, 5));
  }
  SUBCASE("no edges") {
    DirectedGraph g(NodeSet{1, 2, 3});
    CHECK(moralize(g).edges().empty());
  }
  SUBCASE("collider") {
    DirectedGraph g(NodeSet{1, 2, 3});
    g.add_arc(1, 3);
    g.add_arc(2, 3);
    CHECK(moralize(g).edges() == edge_set({{1, 3}, {2, 3}, {1, 2}}));
    CHECK(g.spouses(1) == NodeSet{2});
  }
}

TEST_CASE("topology_of") {
  TopologyGraph t = topology_of(cyclotopo::testing::five_node_example());
  CHECK(t.edges() == edge_set({{1, 2}, {2, 3}, {2, 4}, {4, 5}}));
  CHECK(topology_of(DirectedGraph{}).nodes().empty());
  DirectedGraph pair(NodeSet{1, 2});
  pair.add_arc(1, 2);
  pair.add_arc(2, 1);
  CHECK(topology_of(pair).edges() == edge_set({{1, 2}}));
  CHECK_THROWS_AS(pair.add_arc(1, 1), InputError);
}

TEST_CASE("topology is contained in the moral graph") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    DirectedGraph g;
    int n = 2 + trial % 7;
    for (int v = 1; v <= n; ++v) g.add_node(v);
    std::bernoulli_distribution coin(0.3);
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b)
        if (a != b && coin(rng)) g.add_arc(a, b);
    TopologyGraph t = topology_of(g), m = moralize(g);
    for (auto e : t.edges()) CHECK(m.has_edge(e.first, e.second));
  }
}

TEST_CASE("sep") {
  CHECK(sep(path_graph(4), 1, {2, 3}, 4));
  CHECK_FALSE(sep(complete_graph(4), 1, {2, 3}, 4));
  CHECK_THROWS_AS(sep(path_graph(4), 1, {2}, 1), InputError);
  CHECK_THROWS_AS(sep(path_graph(4), 1, {2}, 9), InputError);
  CHECK_THROWS_AS(sep(path_graph(4), 1, {1}, 3), InputError);
  TopologyGraph gc = chain_gc();
  CHECK(sep(gc, 1, {2, 3}, 5) == cyclotopo::testing::sep_by_paths(gc, 1, {2, 3}, 5));
  CHECK(sep(gc, 1, {2, 3}, 5));
  CHECK_FALSE(sep(gc, 1, {2}, 5));
}

TEST_CASE("is_cut_pair") {
  CHECK(is_cut_pair(path_graph(5), 2, 3));
  TopologyGraph k4 = complete_graph(4);
  for (auto [a, b] : k4.edges()) CHECK_FALSE(is_cut_pair(k4, a, b));
  TopologyGraph gc = chain_gc();
  CHECK(is_cut_pair(gc, 4, 5));
  CHECK(is_cut_pair(gc, 2, 3));
  CHECK_FALSE(is_cut_pair(gc, 3, 4));
}

TEST_CASE("sep and is_cut_pair against path enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + trial % 5;
    TopologyGraph g = cyclotopo::testing::random_graph(rng, n, 0.45);
    for (auto [a, b] : g.edges()) CHECK(is_cut_pair(g, a, b) == cyclotopo::testing::cut_pair_by_paths(g, a, b));
    for (NodeId i = 1; i <= n; ++i)
      for (NodeId j = i + 1; j <= n; ++j) {
        NodeSet cut;
        for (NodeId v = 1; v <= n; ++v)
          if (v != i && v != j && (v + trial) % 3 == 0) cut.insert(v);
        CHECK(sep(g, i, cut, j) == cyclotopo::testing::sep_by_paths(g, i, cut, j));
      }
  }
}

TEST_CASE("components, hop distance and degree") {
  TopologyGraph g = path_graph(3);
  g.add_node(7);
  g.add_node(8);
  g.add_edge(7, 8);
  auto comps = connected_components(g);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == NodeSet{1, 2, 3});
  CHECK(comps[1] == NodeSet{7, 8});
  CHECK(hop_distance(g, 1, 3) == 2);
  CHECK(hop_distance(g, 2, 2) == 0);
  CHECK_FALSE(hop_distance(g, 1, 7).has_value());
  CHECK(degree(g, 2) == 2);
  CHECK_FALSE(is_connected(g));
  CHECK_FALSE(is_tree(g));
  CHECK(is_tree(path_graph(5)));
  CHECK_FALSE(is_tree(complete_graph(3)));

  TopologyGraph chain = path_graph(3);
  chain.add_node(10, NodeLabel::hidden);
  chain.add_node(4);
  chain.add_edge(3, 10);
  chain.add_edge(10, 4);
  CHECK(hop_distance(chain, 3, 4) == 2);
}

TEST_CASE("hop distance is a metric on connected graphs") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    TopologyGraph g = cyclotopo::testing::random_tree(rng, 8);
    for (int extra = 0; extra < trial % 4; ++extra) {
      int a = 1 + static_cast<int>(rng() % 8), b = 1 + static_cast<int>(rng() % 8);
      if (a != b) g.add_edge(a, b);
    }
    for (NodeId i : g.nodes())
      for (NodeId j : g.nodes()) {
        CHECK(hop_distance(g, i, j) == hop_distance(g, j, i));
        for (NodeId k : g.nodes()) CHECK(*hop_distance(g, i, j) <= *hop_distance(g, i, k) + *hop_distance(g, k, j));
      }
  }
}

TEST_CASE("assumption checks") {
  SUBCASE("chain with 10 and 11 hidden passes") {
    NetworkSpec net = cyclotopo::testing::chain11_spec(true);
    auto report = check_assumptions(net.directed_graph(), net.hidden(), net.periods());
    CHECK(report.all_passed());
    CHECK(report.checks.size() == 5);
  }
  SUBCASE("two common children") {
    DirectedGraph g(NodeSet{1, 2, 3, 4});
    for (int c : {3, 4}) {
      g.add_arc(1, c);
      g.add_arc(2, c);
    }
    auto report = check_assumptions(g, {});
    CHECK_FALSE(report.at(1).passed);
    CHECK(report.at(1).violations == std::vector<std::pair<NodeId, NodeId>>{{1, 2}});
    CHECK_FALSE(report.at(2).passed);
  }
  SUBCASE("adjacent hidden nodes") {
    DirectedGraph g;
    for (int v = 1; v <= 6; ++v) g.add_node(v);
    for (int v = 1; v < 6; ++v) {
      g.add_arc(v, v + 1);
      g.add_arc(v + 1, v);
    }
    auto report = check_assumptions(g, {3, 4});
    CHECK_FALSE(report.at(4).passed);
    CHECK(report.at(4).violations == std::vector<std::pair<NodeId, NodeId>>{{3, 4}});
    CHECK_FALSE(report.at(5).passed);
    CHECK(report.at(2).passed);
  }
  SUBCASE("hidden period must divide the observed period") {
    DirectedGraph g(NodeSet{1, 2, 3});
    auto report = check_assumptions(g, {3}, {{1, 2}, {2, 1}, {3, 3}});
    CHECK_FALSE(report.at(3).passed);
    CHECK(report.at(3).violations == std::vector<std::pair<NodeId, NodeId>>{{3, 3}});
  }
}

TEST_CASE("dot export") {
  TopologyGraph g = path_graph(2);
  g.add_node(3, NodeLabel::hidden);
  g.add_edge(2, 3);
  std::string dot = to_dot(g, "final");
  CHECK(dot.find("graph final {") == 0);
  CHECK(dot.find("3 [style=dashed]") != std::string::npos);
  CHECK(dot.find("1 -- 2;") != std::string::npos);
}
