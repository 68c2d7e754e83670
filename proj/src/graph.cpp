#include "cyclotopo/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "cyclotopo/error.hpp"

namespace cyclotopo {

namespace {

const NodeSet kEmpty;

std::string node_str(NodeId id) { return std::to_string(id); }

// BFS over g restricted to nodes not in `blocked`.
NodeSet reach(const TopologyGraph& g, const NodeSet& start, const NodeSet& blocked) {
  NodeSet seen;
  std::deque<NodeId> queue;
  for (NodeId s : start) {
    if (blocked.contains(s) || seen.contains(s)) continue;
    seen.insert(s);
    queue.push_back(s);
  }
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.neighbors(u)) {
      if (blocked.contains(v) || seen.contains(v)) continue;
      seen.insert(v);
      queue.push_back(v);
    }
  }
  return seen;
}

std::size_t component_count(const TopologyGraph& g, const NodeSet& blocked) {
  NodeSet seen;
  std::size_t count = 0;
  for (NodeId u : g.nodes()) {
    if (blocked.contains(u) || seen.contains(u)) continue;
    ++count;
    NodeSet comp = reach(g, {u}, blocked);
    seen.insert(comp.begin(), comp.end());
  }
  return count;
}

}  // namespace

std::string_view to_string(NodeLabel label) {
  return label == NodeLabel::hidden ? "hidden" : "observed";
}

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::leaf:
      return "leaf";
    case NodeRole::nonleaf:
      return "nonleaf";
    default:
      return "unknown";
  }
}

TopologyGraph::TopologyGraph(const NodeSet& nodes) {
  for (NodeId id : nodes) add_node(id);
}

void TopologyGraph::add_node(NodeId id, NodeLabel label) {
  nodes_.insert(id);
  adjacency_.try_emplace(id);
  labels_[id] = label;
  roles_.try_emplace(id, NodeRole::unknown);
}

void TopologyGraph::require_node(NodeId id) const {
  if (!nodes_.contains(id)) throw InputError("unknown node " + node_str(id));
}

void TopologyGraph::add_edge(NodeId a, NodeId b) {
  if (a == b) throw InputError("self-loop on node " + node_str(a));
  require_node(a);
  require_node(b);
  edges_.insert(make_edge(a, b));
  adjacency_[a].insert(b);
  adjacency_[b].insert(a);
}

void TopologyGraph::remove_edge(NodeId a, NodeId b) {
  if (edges_.erase(make_edge(a, b)) == 0) return;
  adjacency_[a].erase(b);
  adjacency_[b].erase(a);
}

const NodeSet& TopologyGraph::neighbors(NodeId id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) throw InputError("unknown node " + node_str(id));
  return it->second;
}

NodeLabel TopologyGraph::label(NodeId id) const {
  require_node(id);
  return labels_.at(id);
}

void TopologyGraph::set_label(NodeId id, NodeLabel label) {
  require_node(id);
  labels_[id] = label;
}

NodeRole TopologyGraph::role(NodeId id) const {
  require_node(id);
  return roles_.at(id);
}

void TopologyGraph::set_role(NodeId id, NodeRole role) {
  require_node(id);
  roles_[id] = role;
}

NodeSet TopologyGraph::nodes_with_label(NodeLabel label) const {
  NodeSet out;
  for (auto [id, l] : labels_)
    if (l == label) out.insert(id);
  return out;
}

TopologyGraph TopologyGraph::induced(const NodeSet& keep) const {
  TopologyGraph out;
  for (NodeId id : keep) {
    if (!has_node(id)) continue;
    out.add_node(id, labels_.at(id));
    out.set_role(id, roles_.at(id));
  }
  for (auto [a, b] : edges_)
    if (out.has_node(a) && out.has_node(b)) out.add_edge(a, b);
  return out;
}

TopologyGraph TopologyGraph::without(const NodeSet& removed) const {
  NodeSet keep;
  std::set_difference(nodes_.begin(), nodes_.end(), removed.begin(), removed.end(),
                      std::inserter(keep, keep.end()));
  return induced(keep);
}

DirectedGraph::DirectedGraph(const NodeSet& nodes) : nodes_(nodes) {}

void DirectedGraph::add_node(NodeId id) { nodes_.insert(id); }

void DirectedGraph::add_arc(NodeId source, NodeId target) {
  if (source == target) throw InputError("self-loop on node " + node_str(source));
  if (!nodes_.contains(source)) throw InputError("unknown node " + node_str(source));
  if (!nodes_.contains(target)) throw InputError("unknown node " + node_str(target));
  arcs_.insert({source, target});
}

NodeSet DirectedGraph::parents(NodeId id) const {
  NodeSet out;
  for (auto [s, t] : arcs_)
    if (t == id) out.insert(s);
  return out;
}

NodeSet DirectedGraph::children(NodeId id) const {
  NodeSet out;
  for (auto [s, t] : arcs_)
    if (s == id) out.insert(t);
  return out;
}

NodeSet DirectedGraph::spouses(NodeId id) const {
  NodeSet out;
  for (NodeId c : children(id))
    for (NodeId p : parents(c))
      if (p != id) out.insert(p);
  return out;
}

TopologyGraph topology_of(const DirectedGraph& g) {
  TopologyGraph out(g.nodes());
  for (auto [s, t] : g.arcs()) out.add_edge(s, t);
  return out;
}

TopologyGraph moralize(const DirectedGraph& g) {
  TopologyGraph out = topology_of(g);
  for (NodeId c : g.nodes()) {
    NodeSet ps = g.parents(c);
    for (auto a = ps.begin(); a != ps.end(); ++a)
      for (auto b = std::next(a); b != ps.end(); ++b) out.add_edge(*a, *b);
  }
  return out;
}

bool separates(const TopologyGraph& g, const NodeSet& from, const NodeSet& cut, const NodeSet& to) {
  NodeSet reached = reach(g, from, cut);
  return std::none_of(to.begin(), to.end(), [&](NodeId j) { return reached.contains(j); });
}

bool sep(const TopologyGraph& g, NodeId i, const NodeSet& cut, NodeId j) {
  if (!g.has_node(i)) throw InputError("unknown node " + node_str(i));
  if (!g.has_node(j)) throw InputError("unknown node " + node_str(j));
  if (i == j) throw InputError("sep requires distinct endpoints");
  if (cut.contains(i) || cut.contains(j)) throw InputError("sep endpoints must lie outside the cut set");
  for (NodeId z : cut)
    if (!g.has_node(z)) throw InputError("unknown node " + node_str(z));
  return separates(g, {i}, cut, {j});
}

bool is_cut_pair(const TopologyGraph& g, NodeId a, NodeId b) {
  return component_count(g, {a, b}) >= 2;
}

std::vector<NodeSet> connected_components(const TopologyGraph& g) {
  std::vector<NodeSet> out;
  NodeSet seen;
  for (NodeId u : g.nodes()) {
    if (seen.contains(u)) continue;
    NodeSet comp = reach(g, {u}, kEmpty);
    seen.insert(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

std::map<NodeId, int> hop_distances_from(const TopologyGraph& g, NodeId source) {
  std::map<NodeId, int> dist;
  if (!g.has_node(source)) throw InputError("unknown node " + node_str(source));
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.neighbors(u)) {
      if (dist.contains(v)) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

std::optional<int> hop_distance(const TopologyGraph& g, NodeId i, NodeId j) {
  if (!g.has_node(j)) throw InputError("unknown node " + node_str(j));
  auto dist = hop_distances_from(g, i);
  auto it = dist.find(j);
  if (it == dist.end()) return std::nullopt;
  return it->second;
}

std::size_t degree(const TopologyGraph& g, NodeId i) { return g.degree(i); }

bool is_connected(const TopologyGraph& g) { return connected_components(g).size() <= 1; }

bool is_tree(const TopologyGraph& g) {
  if (g.nodes().empty()) return true;
  return is_connected(g) && g.edges().size() + 1 == g.nodes().size();
}

bool AssumptionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const AssumptionCheck& AssumptionReport::at(int number) const {
  for (const auto& c : checks)
    if (c.number == number) return c;
  throw InputError("no assumption numbered " + std::to_string(number));
}

AssumptionReport check_assumptions(const DirectedGraph& g, const NodeSet& hidden,
                                   const std::map<NodeId, int>& periods) {
  AssumptionReport report;
  TopologyGraph topo = topology_of(g);

  AssumptionCheck a1{1, "at most one common child per node pair", true, {}, {}};
  {
    std::vector<NodeId> ids(g.nodes().begin(), g.nodes().end());
    for (std::size_t x = 0; x < ids.size(); ++x) {
      NodeSet cx = g.children(ids[x]);
      for (std::size_t y = x + 1; y < ids.size(); ++y) {
        NodeSet cy = g.children(ids[y]);
        std::size_t common = 0;
        for (NodeId c : cx) common += cy.contains(c);
        if (common > 1) a1.violations.push_back({ids[x], ids[y]});
      }
    }
  }
  a1.passed = a1.violations.empty();
  report.checks.push_back(a1);

  AssumptionCheck a2{2, "bidirected edges", true, {}, {}};
  for (auto [s, t] : g.arcs())
    if (!g.has_arc(t, s)) a2.violations.push_back({s, t});
  a2.passed = a2.violations.empty();
  report.checks.push_back(a2);

  auto period_of = [&](NodeId id) {
    auto it = periods.find(id);
    return it == periods.end() ? 1 : it->second;
  };
  AssumptionCheck a3{3, "hidden periods divide the observed period", true, {}, {}};
  {
    long long t_obs = 1;
    for (NodeId id : g.nodes())
      if (!hidden.contains(id)) t_obs = std::lcm(t_obs, static_cast<long long>(period_of(id)));
    for (NodeId h : hidden) {
      int p = period_of(h);
      if (p < 1 || t_obs % p != 0) a3.violations.push_back({h, p});
    }
    a3.detail = "observed period " + std::to_string(t_obs);
  }
  a3.passed = a3.violations.empty();
  report.checks.push_back(a3);

  AssumptionCheck a4{4, "hidden nodes at least four hops apart", true, {}, {}};
  for (auto x = hidden.begin(); x != hidden.end(); ++x) {
    if (!topo.has_node(*x)) continue;
    auto dist = hop_distances_from(topo, *x);
    for (auto y = std::next(x); y != hidden.end(); ++y) {
      auto it = dist.find(*y);
      if (it != dist.end() && it->second < 4) a4.violations.push_back({*x, *y});
    }
  }
  a4.passed = a4.violations.empty();
  report.checks.push_back(a4);

  AssumptionCheck a5{5, "radial topology, hidden nodes at least three hops from leaves", true, {}, {}};
  {
    TopologyGraph forest(topo.nodes());
    for (auto [a, b] : topo.edges()) {
      if (!separates(forest, {a}, {}, {b})) {
        a5.violations.push_back({a, b});
        continue;
      }
      forest.add_edge(a, b);
    }
    if (!a5.violations.empty()) a5.detail = "topology has cycles";
    if (!is_connected(topo)) a5.detail += a5.detail.empty() ? "topology disconnected" : "; disconnected";
    for (NodeId h : hidden) {
      if (!topo.has_node(h)) continue;
      auto dist = hop_distances_from(topo, h);
      for (NodeId v : topo.nodes()) {
        if (topo.degree(v) != 1 || hidden.contains(v)) continue;
        auto it = dist.find(v);
        if (it != dist.end() && it->second < 3) a5.violations.push_back({h, v});
      }
    }
    a5.passed = a5.violations.empty() && is_connected(topo);
  }
  report.checks.push_back(a5);
  return report;
}

std::string to_dot(const TopologyGraph& g, std::string_view name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (NodeId id : g.nodes()) {
    os << "  " << id;
    std::vector<std::string> attrs;
    if (g.label(id) == NodeLabel::hidden) attrs.push_back("style=dashed");
    if (g.role(id) != NodeRole::unknown) attrs.push_back("role=" + std::string(to_string(g.role(id))));
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t k = 0; k < attrs.size(); ++k) os << (k ? ", " : "") << attrs[k];
      os << "]";
    }
    os << ";\n";
  }
  for (auto [a, b] : g.edges()) os << "  " << a << " -- " << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace cyclotopo
