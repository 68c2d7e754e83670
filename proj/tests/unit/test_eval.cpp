#include "doctest.h"

#include "cyclotopo/eval.hpp"

using namespace cyclotopo;

namespace {

TopologyGraph build(std::initializer_list<NodeId> observed, std::initializer_list<NodeId> hidden,
                    std::initializer_list<Edge> edges) {
  TopologyGraph g;
  for (NodeId v : observed) g.add_node(v);
  for (NodeId v : hidden) g.add_node(v, NodeLabel::hidden);
  for (auto [a, b] : edges) g.add_edge(a, b);
  return g;
}

}  // namespace

TEST_CASE("identical graphs") {
  TopologyGraph g = build({1, 2, 3, 4}, {}, {{1, 2}, {2, 3}, {3, 4}});
  EvalMetrics m = evaluate(g, g);
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 1.0);
  CHECK(m.f1 == 1.0);
  CHECK(m.exact_match);
  CHECK(m.true_positives == 3);
}

TEST_CASE("empty against nonempty") {
  TopologyGraph truth = build({1, 2, 3}, {}, {{1, 2}, {2, 3}});
  TopologyGraph empty = build({1, 2, 3}, {}, {});
  EvalMetrics m = evaluate(empty, truth);
  CHECK(m.precision == 0.0);
  CHECK(m.recall == 0.0);
  CHECK(m.f1 == 0.0);
  CHECK_FALSE(m.exact_match);
  CHECK(m.false_negatives == 2);
  EvalMetrics both = evaluate(empty, empty);
  CHECK(both.exact_match);
  CHECK(both.f1 == 1.0);
}

TEST_CASE("partial recovery") {
  TopologyGraph truth = build({1, 2, 3, 4}, {}, {{1, 2}, {2, 3}, {3, 4}});
  TopologyGraph rec = build({1, 2, 3, 4}, {}, {{1, 2}, {2, 3}, {1, 4}});
  EvalMetrics m = evaluate(rec, truth);
  CHECK(m.true_positives == 2);
  CHECK(m.false_positives == 1);
  CHECK(m.false_negatives == 1);
  CHECK(m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("hidden nodes are matched up to relabeling") {
  TopologyGraph truth = build({1, 2, 3, 4, 5, 6}, {20, 30}, {{1, 20}, {2, 20}, {3, 20}, {3, 30}, {4, 30}, {5, 30}, {5, 6}});
  TopologyGraph rec = build({1, 2, 3, 4, 5, 6}, {7, 8}, {{1, 8}, {2, 8}, {3, 8}, {3, 7}, {4, 7}, {5, 7}, {5, 6}});
  EvalMetrics m = evaluate(rec, truth);
  CHECK(m.exact_match);
  CHECK(m.hidden_count_match);
  CHECK(m.hidden_placement_match);
  CHECK(m.hidden_mapping.at(8) == 20);
  CHECK(m.hidden_mapping.at(7) == 30);

  TopologyGraph misplaced = build({1, 2, 3, 4, 5, 6}, {7}, {{1, 7}, {2, 7}, {3, 7}, {3, 4}, {4, 5}, {5, 6}});
  EvalMetrics bad = evaluate(misplaced, truth);
  CHECK_FALSE(bad.exact_match);
  CHECK_FALSE(bad.hidden_count_match);
  CHECK_FALSE(bad.hidden_placement_match);
}

TEST_CASE("exact_match is symmetric") {
  TopologyGraph a = build({1, 2, 3}, {9}, {{1, 9}, {2, 9}, {3, 9}});
  TopologyGraph b = build({1, 2, 3}, {4}, {{1, 4}, {2, 4}, {3, 4}});
  TopologyGraph c = build({1, 2, 3}, {4}, {{1, 4}, {2, 4}, {2, 3}});
  for (const auto* x : {&a, &b, &c})
    for (const auto* y : {&a, &b, &c}) CHECK(evaluate(*x, *y).exact_match == evaluate(*y, *x).exact_match);
  CHECK(evaluate(a, b).exact_match);
  CHECK_FALSE(evaluate(a, c).exact_match);
}
