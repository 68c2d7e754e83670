#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cyclotopo/graph.hpp"
#include "cyclotopo/network.hpp"

namespace cyclotopo::testing {

using Rng = std::mt19937_64;

/// Every simple path from i to j, as node sequences.
std::vector<std::vector<NodeId>> simple_paths(const TopologyGraph& g, NodeId i, NodeId j);
/// sep by path enumeration: every simple path meets `cut`.
bool sep_by_paths(const TopologyGraph& g, NodeId i, const NodeSet& cut, NodeId j);
/// Two-witness definition: some pair c, d outside {a, b} with every c-d path
/// through a or b.
bool cut_pair_by_paths(const TopologyGraph& g, NodeId a, NodeId b);

/// G(n, p) on nodes 1..n.
TopologyGraph random_graph(Rng& rng, int n, double p);
/// Uniform labeled tree on 1..n (Pruefer sequence).
TopologyGraph random_tree(Rng& rng, int n);

/// Lifted block straight from the definition H_pt[a] = h(aT + p - t).
Eigen::MatrixXcd direct_polyphase(const std::vector<Complex>& impulse, int period, double omega);

/// E|x_1|^2 for x_1 = g z^-1 x_2 + e_1, x_2 = g z^-1 x_1 + e_2, unit white
/// inputs: (1 + g^2) / (1 - g^4).
double two_node_variance(double g);

/// Network whose incoming edges at node i are b_ij * g_i(z).
struct SpecOptions {
  int min_nodes = 4;
  int max_nodes = 7;
  double edge_probability = 0.35;
  /// Children edges out of each node share one phase, and one pair of nodes
  /// is given two common children.
  bool equal_phase = false;
  /// Complex b_ij and node filters.
  bool complex_weights = true;
  int max_input_period = 3;
};
NetworkSpec random_structured_spec(Rng& rng, const SpecOptions& options = {});

/// Bidirected radial network with hidden nodes at least three hops from
/// every leaf and four hops from each other.
struct RadialOptions {
  int min_nodes = 11;
  int max_nodes = 17;
  int max_hidden = 3;
  bool complex_weights = true;
  bool cyclostationary = true;
};
NetworkSpec random_radial_spec(Rng& rng, const RadialOptions& options = {});

/// The eleven-node chain used throughout the experiments, optionally with
/// nodes 10 and 11 hidden.
NetworkSpec chain11_spec(bool hidden);
/// Directed graph of the five-node example: 1<->2, 2<->3, 2<->4, 5->4.
DirectedGraph five_node_example();

/// Max-abs entry.
double max_abs(const Eigen::MatrixXcd& m);

}  // namespace cyclotopo::testing
