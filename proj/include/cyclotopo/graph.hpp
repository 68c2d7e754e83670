#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cyclotopo {

using NodeId = int;
using NodeSet = std::set<NodeId>;

/// Undirected edge stored with the smaller id first.
using Edge = std::pair<NodeId, NodeId>;

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

enum class NodeLabel { observed, hidden };
enum class NodeRole { unknown, leaf, nonleaf };

std::string_view to_string(NodeLabel label);
std::string_view to_string(NodeRole role);

/// Undirected simple graph with per-node annotations.
///
/// Equality compares node and edge sets only; labels and roles are
/// annotations and do not take part in structural comparisons.
class TopologyGraph {
 public:
  TopologyGraph() = default;
  explicit TopologyGraph(const NodeSet& nodes);

  void add_node(NodeId id, NodeLabel label = NodeLabel::observed);
  /// Throws InputError on a self-loop or an endpoint that is not a node.
  void add_edge(NodeId a, NodeId b);
  void remove_edge(NodeId a, NodeId b);

  bool has_node(NodeId id) const { return nodes_.contains(id); }
  bool has_edge(NodeId a, NodeId b) const { return edges_.contains(make_edge(a, b)); }

  const NodeSet& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  const NodeSet& neighbors(NodeId id) const;
  std::size_t degree(NodeId id) const { return neighbors(id).size(); }

  NodeLabel label(NodeId id) const;
  void set_label(NodeId id, NodeLabel label);
  NodeRole role(NodeId id) const;
  void set_role(NodeId id, NodeRole role);

  NodeSet nodes_with_label(NodeLabel label) const;

  /// Subgraph on `keep`; annotations carried over.
  TopologyGraph induced(const NodeSet& keep) const;
  /// Subgraph with `removed` deleted.
  TopologyGraph without(const NodeSet& removed) const;

  friend bool operator==(const TopologyGraph& a, const TopologyGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  void require_node(NodeId id) const;

  NodeSet nodes_;
  std::set<Edge> edges_;
  std::map<NodeId, NodeSet> adjacency_;
  std::map<NodeId, NodeLabel> labels_;
  std::map<NodeId, NodeRole> roles_;
};

/// Generative graph of a linear dynamical model: an arc source -> target
/// exists iff the filter h_{target,source} is nonzero.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(const NodeSet& nodes);

  void add_node(NodeId id);
  /// Records h_{target,source} != 0. Throws InputError on self-loops.
  void add_arc(NodeId source, NodeId target);

  bool has_arc(NodeId source, NodeId target) const { return arcs_.contains({source, target}); }
  const NodeSet& nodes() const { return nodes_; }
  /// Ordered (source, target) pairs.
  const std::set<std::pair<NodeId, NodeId>>& arcs() const { return arcs_; }

  NodeSet parents(NodeId id) const;
  NodeSet children(NodeId id) const;
  /// Nodes that share at least one child with `id`.
  NodeSet spouses(NodeId id) const;

 private:
  NodeSet nodes_;
  std::set<std::pair<NodeId, NodeId>> arcs_;
};

/// Kin graph: parents, children and spouses of every node.
TopologyGraph moralize(const DirectedGraph& g);
/// Undirected skeleton.
TopologyGraph topology_of(const DirectedGraph& g);

/// True iff every path from a node of `from` to a node of `to` meets `cut`.
bool separates(const TopologyGraph& g, const NodeSet& from, const NodeSet& cut, const NodeSet& to);
/// Single-node form. Throws InputError for unknown nodes, i == j, or i, j in `cut`.
bool sep(const TopologyGraph& g, NodeId i, const NodeSet& cut, NodeId j);

/// True iff removing {a, b} leaves at least two connected components among
/// the remaining nodes.
bool is_cut_pair(const TopologyGraph& g, NodeId a, NodeId b);

/// Components in ascending order of their smallest node.
std::vector<NodeSet> connected_components(const TopologyGraph& g);
/// Number of edges on a shortest path, or nullopt if disconnected.
std::optional<int> hop_distance(const TopologyGraph& g, NodeId i, NodeId j);
std::map<NodeId, int> hop_distances_from(const TopologyGraph& g, NodeId source);
std::size_t degree(const TopologyGraph& g, NodeId i);
bool is_connected(const TopologyGraph& g);
bool is_tree(const TopologyGraph& g);

struct AssumptionCheck {
  int number = 0;
  std::string name;
  bool passed = true;
  /// Offending pairs. Meaning per check: 1 two nodes with >1 common child;
  /// 2 (source, target) arc without its reverse; 3 (hidden node, its period);
  /// 4 hidden pair closer than four hops; 5 (hidden, leaf) closer than three
  /// hops, or an edge closing a cycle.
  std::vector<std::pair<NodeId, NodeId>> violations;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;

  bool all_passed() const;
  const AssumptionCheck& at(int number) const;
};

/// Evaluates the structural conditions the learners rely on. Advisory only;
/// nodes missing from `periods` are taken to have period 1.
AssumptionReport check_assumptions(const DirectedGraph& g, const NodeSet& hidden,
                                   const std::map<NodeId, int>& periods = {});

/// Undirected DOT document. Hidden nodes get `style=dashed`.
std::string to_dot(const TopologyGraph& g, std::string_view name = "G");

}  // namespace cyclotopo
