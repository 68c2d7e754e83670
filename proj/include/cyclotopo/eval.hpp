#pragma once

#include <cstddef>
#include <map>

#include "cyclotopo/graph.hpp"

namespace cyclotopo {

struct EvalMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool exact_match = false;
  bool hidden_count_match = false;
  /// Some relabeling of hidden nodes gives every hidden node the same
  /// observed neighbors in both graphs.
  bool hidden_placement_match = false;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  /// Reconstructed hidden id -> truth hidden id under the best matching.
  std::map<NodeId, NodeId> hidden_mapping;
};

/// Edge metrics with observed ids fixed and hidden ids matched to maximize
/// the number of shared edges.
EvalMetrics evaluate(const TopologyGraph& reconstructed, const TopologyGraph& truth);

}  // namespace cyclotopo
