#include "cyclotopo/topo_latent.hpp"

#include <algorithm>
#include <numeric>

#include "cyclotopo/error.hpp"

namespace cyclotopo {

namespace {

std::string pair_str(NodeId a, NodeId b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

NodeSet component_of(const TopologyGraph& g, NodeId a) {
  for (auto& c : connected_components(g))
    if (c.contains(a)) return c;
  return {};
}

bool is_clique(const TopologyGraph& g, const std::vector<NodeId>& nodes) {
  for (std::size_t x = 0; x < nodes.size(); ++x)
    for (std::size_t y = x + 1; y < nodes.size(); ++y)
      if (nodes[x] != nodes[y] && !g.has_edge(nodes[x], nodes[y])) return false;
  return true;
}

// Every choice of tree neighbors b of c and f of e gives a gc clique {b,c,e,f}.
bool hidden_between(const TopologyGraph& tree, const TopologyGraph& gc, NodeId c, NodeId e) {
  if (!gc.has_edge(c, e)) return false;
  const NodeSet& bs = tree.neighbors(c);
  const NodeSet& fs = tree.neighbors(e);
  std::vector<std::optional<NodeId>> bchoices, fchoices;
  if (bs.empty()) bchoices.push_back(std::nullopt);
  for (NodeId b : bs) bchoices.push_back(b);
  if (fs.empty()) fchoices.push_back(std::nullopt);
  for (NodeId f : fs) fchoices.push_back(f);
  for (auto b : bchoices)
    for (auto f : fchoices) {
      std::vector<NodeId> q{c, e};
      if (b) q.push_back(*b);
      if (f) q.push_back(*f);
      if (!is_clique(gc, q)) return false;
    }
  return true;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

TopologyGraph build_gc(const SpectralGrid& observed_inverse, double tau) { return moral_graph(observed_inverse, tau); }

ObservedTopology learn_observed_topology(const TopologyGraph& gc, const SpectralGrid& observed_inverse,
                                         const PhaseConfig& config) {
  ObservedTopology out;
  out.topology = TopologyGraph(gc.nodes());
  for (auto [a, b] : gc.edges()) {
    TopologyGraph comp = gc.induced(component_of(gc, a));
    if (is_cut_pair(comp, a, b)) {
      out.topology.add_edge(a, b);
      out.nonleaves.insert(a);
      out.nonleaves.insert(b);
    }
  }
  if (out.nonleaves.empty()) throw StructureError("no edge of gc is a vertex-cut pair; no non-leaf nodes found");
  for (NodeId v : gc.nodes())
    if (!out.nonleaves.contains(v)) out.leaves.insert(v);

  for (NodeId a : out.leaves) {
    std::size_t added = 0;
    for (NodeId b : gc.neighbors(a)) {
      if (!out.nonleaves.contains(b)) continue;
      EdgeDiagnostic d;
      d.j = a;
      d.i = b;
      d.block_norm = block_norm(observed_inverse, a, b);
      d.profile = phase_profile(observed_inverse, a, b, config.magnitude_floor);
      if (is_phase_constant(d.profile, observed_inverse.is_exact(), config)) {
        d.decision = "spurious";
      } else {
        d.decision = "kept";
        out.topology.add_edge(a, b);
        ++added;
      }
      out.leaf_tests.push_back(std::move(d));
    }
    if (added > 1)
      out.warnings.push_back("leaf " + std::to_string(a) + " joined " + std::to_string(added) +
                             " non-leaf nodes; thresholds may be miscalibrated");
    if (added == 0) out.warnings.push_back("leaf " + std::to_string(a) + " has no accepted neighbor");
  }
  for (NodeId v : out.leaves) out.topology.set_role(v, NodeRole::leaf);
  for (NodeId v : out.nonleaves) out.topology.set_role(v, NodeRole::nonleaf);
  return out;
}

HiddenInsertion insert_hidden_nodes(const TopologyGraph& observed_topology, const TopologyGraph& gc) {
  HiddenInsertion out;
  auto comps = connected_components(observed_topology);
  for (const auto& c : comps)
    if (c.size() < 3) {
      out.warnings.push_back("component containing node " + std::to_string(*c.begin()) + " has " +
                             std::to_string(c.size()) + " node(s), fewer than three");
    }

  // (c, e) attachment per inserted hidden node
  std::vector<std::pair<NodeId, NodeId>> attach;
  for (std::size_t p = 0; p < comps.size(); ++p)
    for (std::size_t q = p + 1; q < comps.size(); ++q) {
      std::vector<std::pair<NodeId, NodeId>> passing;
      for (NodeId c : comps[p])
        for (NodeId e : comps[q])
          if (hidden_between(observed_topology, gc, c, e)) passing.push_back({c, e});
      if (passing.empty()) continue;
      attach.push_back(passing.front());
      for (std::size_t k = 1; k < passing.size(); ++k)
        out.notes.push_back("alternative hidden attachment " + pair_str(passing[k].first, passing[k].second) +
                            " not used; chose " + pair_str(passing.front().first, passing.front().second));
    }

  UnionFind uf(attach.size());
  for (std::size_t x = 0; x < attach.size(); ++x)
    for (std::size_t y = x + 1; y < attach.size(); ++y) {
      auto [c1, e1] = attach[x];
      auto [c2, e2] = attach[y];
      if (c1 == c2 || c1 == e2 || e1 == c2 || e1 == e2) uf.unite(x, y);
    }
  std::map<std::size_t, NodeSet> groups;
  for (std::size_t x = 0; x < attach.size(); ++x) {
    groups[uf.find(x)].insert(attach[x].first);
    groups[uf.find(x)].insert(attach[x].second);
  }
  std::vector<NodeSet> ordered;
  for (auto& [root, nbrs] : groups) ordered.push_back(nbrs);
  std::sort(ordered.begin(), ordered.end(), [](const NodeSet& a, const NodeSet& b) { return *a.begin() < *b.begin(); });

  out.final = observed_topology;
  NodeId next = observed_topology.nodes().empty() ? 1 : *observed_topology.nodes().rbegin() + 1;
  for (const auto& nbrs : ordered) {
    NodeId h = next++;
    out.final.add_node(h, NodeLabel::hidden);
    out.final.set_role(h, NodeRole::nonleaf);
    for (NodeId v : nbrs) out.final.add_edge(h, v);
    out.hidden.insert(h);
  }
  if (attach.size() > ordered.size())
    out.notes.push_back("merged " + std::to_string(attach.size()) + " hidden insertions into " +
                        std::to_string(ordered.size()) + " node(s)");
  if (!is_connected(out.final)) out.warnings.push_back("final topology is disconnected after hidden-node insertion");
  return out;
}

LatentResult reconstruct_latent_from_inverse(const SpectralGrid& observed_inverse, const LearnConfig& config) {
  LatentResult r;
  r.period = observed_inverse.period;
  r.gc = build_gc(observed_inverse, config.rho);
  ObservedTopology obs = learn_observed_topology(r.gc, observed_inverse, config.phase);
  r.observed_topology = obs.topology;
  r.leaves = obs.leaves;
  r.nonleaves = obs.nonleaves;
  r.leaf_tests = std::move(obs.leaf_tests);
  r.warnings = std::move(obs.warnings);
  HiddenInsertion ins = insert_hidden_nodes(r.observed_topology, r.gc);
  r.final = std::move(ins.final);
  r.hidden_inserted = std::move(ins.hidden);
  r.notes = std::move(ins.notes);
  r.warnings.insert(r.warnings.end(), ins.warnings.begin(), ins.warnings.end());
  if (is_connected(r.final) && !is_tree(r.final)) r.warnings.push_back("final topology is connected but not a tree");
  r.inverse = observed_inverse;
  return r;
}

LatentResult reconstruct_latent(const std::vector<ScalarSeries>& observed, const LearnConfig& config) {
  if (observed.size() < 3) throw InputError("latent reconstruction needs at least three observed nodes");
  std::vector<int> node_periods;
  int T = choose_period(observed, config, &node_periods);
  std::vector<std::string> warnings;
  SpectralGrid inv = estimate_inverse(observed, T, config, &warnings);
  LatentResult r = reconstruct_latent_from_inverse(inv, config);
  r.node_periods = node_periods;
  r.warnings.insert(r.warnings.begin(), warnings.begin(), warnings.end());
  return r;
}

LatentResult reconstruct_latent_oracle(const NetworkSpec& net, const LearnConfig& config) {
  if (net.observed().size() < 3) throw InputError("latent reconstruction needs at least three observed nodes");
  int T = config.period.value_or(net.period());
  OracleComponents oc = exact_latent_components(net, fft_grid(config.oracle_grid, config.welch.stride), T);
  LatentResult r = reconstruct_latent_from_inverse(oc.observed_inverse_grid(), config);
  for (NodeId id : net.observed()) r.node_periods.push_back(net.periods().at(id));
  return r;
}

}  // namespace cyclotopo
