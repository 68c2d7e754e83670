#pragma once

#include <string>
#include <vector>

#include "cyclotopo/graph.hpp"
#include "cyclotopo/topo_full.hpp"

namespace cyclotopo {

struct ObservedTopology {
  TopologyGraph topology;
  NodeSet leaves;
  NodeSet nonleaves;
  /// Phase tests of leaf candidates, one per (leaf, non-leaf neighbor).
  std::vector<EdgeDiagnostic> leaf_tests;
  std::vector<std::string> warnings;
};

struct HiddenInsertion {
  TopologyGraph final;
  NodeSet hidden;
  /// Passing (c, e) pairs that lost the tie-break, and other notes.
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
};

struct LatentResult {
  TopologyGraph gc;
  TopologyGraph observed_topology;
  NodeSet leaves;
  NodeSet nonleaves;
  TopologyGraph final;
  NodeSet hidden_inserted;
  int period = 1;
  std::vector<int> node_periods;
  std::vector<EdgeDiagnostic> leaf_tests;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
  SpectralGrid inverse;
};

/// Edge (a, b) iff block_norm(a, b) > tau on the observed inverse PSD.
TopologyGraph build_gc(const SpectralGrid& observed_inverse, double tau);

/// Non-leaf edges are the gc edges whose endpoints form a vertex cut of
/// their gc component; each leaf joins the non-leaf neighbors whose block
/// phase is not constant.
ObservedTopology learn_observed_topology(const TopologyGraph& gc, const SpectralGrid& observed_inverse,
                                         const PhaseConfig& config);

/// Joins components of the observed topology through fresh hidden nodes
/// where the neighborhoods form a gc clique, then merges hidden nodes that
/// share an observed neighbor. Hidden ids start above the largest observed
/// id.
HiddenInsertion insert_hidden_nodes(const TopologyGraph& observed_topology, const TopologyGraph& gc);

LatentResult reconstruct_latent_from_inverse(const SpectralGrid& observed_inverse, const LearnConfig& config);
LatentResult reconstruct_latent(const std::vector<ScalarSeries>& observed, const LearnConfig& config);
/// Same pipeline on the exact observed inverse PSD of `net`.
LatentResult reconstruct_latent_oracle(const NetworkSpec& net, const LearnConfig& config);

}  // namespace cyclotopo
