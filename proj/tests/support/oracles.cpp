#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cyclotopo/error.hpp"
#include "cyclotopo/json_io.hpp"

#ifndef CYCLOTOPO_DATA_DIR
#error "CYCLOTOPO_DATA_DIR must be defined"
#endif

namespace cyclotopo::testing {

namespace {

void extend(const TopologyGraph& g, std::vector<NodeId>& path, NodeSet& on_path, NodeId target,
            std::vector<std::vector<NodeId>>& out) {
  NodeId last = path.back();
  if (last == target) {
    out.push_back(path);
    return;
  }
  for (NodeId v : g.neighbors(last)) {
    if (on_path.contains(v)) continue;
    path.push_back(v);
    on_path.insert(v);
    extend(g, path, on_path, target, out);
    on_path.erase(v);
    path.pop_back();
  }
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Complex random_phase(Rng& rng) { return std::polar(1.0, uniform(rng, -std::numbers::pi, std::numbers::pi)); }

Complex random_weight(Rng& rng, double lo, double hi, bool complex_weights) {
  double r = uniform(rng, lo, hi);
  if (complex_weights) return r * random_phase(rng);
  return std::bernoulli_distribution(0.5)(rng) ? r : -r;
}

// Common node dynamics g_i: a monic FIR with one or two further taps.
std::vector<Complex> node_filter(Rng& rng, bool complex_weights) {
  int extra = std::uniform_int_distribution<int>(1, 2)(rng);
  std::vector<Complex> taps{1.0};
  for (int k = 0; k < extra; ++k) taps.push_back(random_weight(rng, 0.3, 0.8, complex_weights));
  return taps;
}

std::vector<Complex> scaled(const std::vector<Complex>& taps, Complex b) {
  std::vector<Complex> out(taps);
  for (auto& c : out) c *= b;
  return out;
}

InputSpec random_input(Rng& rng, int max_period, bool complex_weights) {
  int period = std::uniform_int_distribution<int>(1, std::max(1, max_period))(rng);
  double variance = uniform(rng, 0.5, 2.0);
  if (period == 1) return InputSpec::white(variance);
  std::vector<Complex> mod;
  for (int p = 0; p < period; ++p) {
    double r = uniform(rng, 0.4, 1.6);
    mod.push_back(complex_weights ? r * random_phase(rng) : Complex(r));
  }
  return InputSpec::am_white(mod, variance);
}

bool well_posed(const NetworkSpec& net) {
  try {
    net.validate();
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

std::vector<std::vector<NodeId>> simple_paths(const TopologyGraph& g, NodeId i, NodeId j) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> path{i};
  NodeSet on_path{i};
  extend(g, path, on_path, j, out);
  return out;
}

bool sep_by_paths(const TopologyGraph& g, NodeId i, const NodeSet& cut, NodeId j) {
  for (const auto& path : simple_paths(g, i, j)) {
    bool hit = std::any_of(path.begin(), path.end(), [&](NodeId v) { return cut.contains(v); });
    if (!hit) return false;
  }
  return true;
}

bool cut_pair_by_paths(const TopologyGraph& g, NodeId a, NodeId b) {
  for (NodeId c : g.nodes())
    for (NodeId d : g.nodes()) {
      if (c >= d || c == a || c == b || d == a || d == b) continue;
      if (sep_by_paths(g, c, {a, b}, d)) return true;
    }
  return false;
}

TopologyGraph random_graph(Rng& rng, int n, double p) {
  TopologyGraph g;
  for (int v = 1; v <= n; ++v) g.add_node(v);
  std::bernoulli_distribution coin(p);
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      if (coin(rng)) g.add_edge(a, b);
  return g;
}

TopologyGraph random_tree(Rng& rng, int n) {
  TopologyGraph g;
  for (int v = 1; v <= n; ++v) g.add_node(v);
  if (n < 2) return g;
  if (n == 2) {
    g.add_edge(1, 2);
    return g;
  }
  std::vector<int> code(n - 2);
  for (auto& c : code) c = std::uniform_int_distribution<int>(1, n)(rng);
  std::vector<int> count(n + 1, 0);
  for (int c : code) ++count[c];
  for (int c : code) {
    int leaf = 1;
    while (count[leaf] != 0) ++leaf;
    g.add_edge(leaf, c);
    count[leaf] = -1;
    --count[c];
  }
  std::vector<int> rest;
  for (int v = 1; v <= n; ++v)
    if (count[v] == 0) rest.push_back(v);
  g.add_edge(rest[0], rest[1]);
  return g;
}

Eigen::MatrixXcd direct_polyphase(const std::vector<Complex>& impulse, int period, double omega) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(period, period);
  int len = static_cast<int>(impulse.size());
  for (int p = 0; p < period; ++p)
    for (int t = 0; t < period; ++t)
      for (int a = -len; a <= len; ++a) {
        int m = a * period + p - t;
        if (m < 0 || m >= len) continue;
        out(p, t) += impulse[m] * std::exp(Complex(0.0, -omega * a));
      }
  return out;
}

double two_node_variance(double g) { return (1.0 + g * g) / (1.0 - g * g * g * g); }

NetworkSpec random_structured_spec(Rng& rng, const SpecOptions& o) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    int n = std::uniform_int_distribution<int>(o.min_nodes, o.max_nodes)(rng);
    DirectedGraph dg;
    for (int v = 1; v <= n; ++v) dg.add_node(v);
    std::bernoulli_distribution coin(o.edge_probability);
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b)
        if (a != b && coin(rng)) dg.add_arc(a, b);
    if (o.equal_phase) {
      // nodes 1 and 2 share the children 3 and 4
      for (int child : {3, 4}) {
        dg.add_arc(1, child);
        dg.add_arc(2, child);
      }
    }
    auto report = check_assumptions(dg, {});
    if (!o.equal_phase && !report.at(1).passed) continue;
    if (o.equal_phase && report.at(1).passed) continue;
    if (dg.arcs().empty()) continue;

    std::map<NodeId, std::vector<Complex>> g;
    std::map<NodeId, Complex> source_phase;
    for (int v = 1; v <= n; ++v) {
      g[v] = node_filter(rng, o.complex_weights);
      source_phase[v] = o.complex_weights ? random_phase(rng) : Complex(1.0);
    }
    NetworkSpec net;
    for (int v = 1; v <= n; ++v) net.add_node(v, random_input(rng, o.max_input_period, o.complex_weights));
    for (auto [from, to] : dg.arcs()) {
      Complex b = o.equal_phase ? uniform(rng, 0.1, 0.3) * source_phase[from] : random_weight(rng, 0.1, 0.3, o.complex_weights);
      net.add_edge(from, to, FilterSpec::fir(scaled(g[to], b)));
    }
    if (well_posed(net)) return net;
  }
  throw std::runtime_error("random_structured_spec: no well-posed draw");
}

NetworkSpec random_radial_spec(Rng& rng, const RadialOptions& o) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    int n = std::uniform_int_distribution<int>(o.min_nodes, o.max_nodes)(rng);
    TopologyGraph tree = random_tree(rng, n);
    NodeSet leaves;
    for (NodeId v : tree.nodes())
      if (tree.degree(v) == 1) leaves.insert(v);
    std::vector<NodeId> candidates;
    for (NodeId v : tree.nodes()) {
      auto dist = hop_distances_from(tree, v);
      bool far = std::all_of(leaves.begin(), leaves.end(), [&](NodeId l) { return dist.at(l) >= 3; });
      if (far) candidates.push_back(v);
    }
    if (candidates.empty()) continue;
    std::shuffle(candidates.begin(), candidates.end(), rng);
    int want = std::uniform_int_distribution<int>(1, o.max_hidden)(rng);
    NodeSet hidden;
    for (NodeId c : candidates) {
      if (static_cast<int>(hidden.size()) >= want) break;
      auto dist = hop_distances_from(tree, c);
      if (std::all_of(hidden.begin(), hidden.end(), [&](NodeId h) { return dist.at(h) >= 4; })) hidden.insert(c);
    }

    std::map<NodeId, std::vector<Complex>> g;
    for (NodeId v : tree.nodes()) g[v] = node_filter(rng, o.complex_weights);
    NetworkSpec net;
    for (NodeId v : tree.nodes()) {
      InputSpec in = InputSpec::white(uniform(rng, 0.5, 2.0));
      if (o.cyclostationary && !hidden.contains(v) && std::bernoulli_distribution(0.3)(rng))
        in = random_input(rng, 2, o.complex_weights);
      net.add_node(v, in);
    }
    for (auto [a, b] : tree.edges()) {
      net.add_edge(a, b, FilterSpec::fir(scaled(g[b], random_weight(rng, 0.1, 0.3, o.complex_weights))));
      net.add_edge(b, a, FilterSpec::fir(scaled(g[a], random_weight(rng, 0.1, 0.3, o.complex_weights))));
    }
    net.set_hidden(hidden);
    if (!check_assumptions(net.directed_graph(), hidden, net.periods()).all_passed()) continue;
    if (well_posed(net)) return net;
  }
  throw std::runtime_error("random_radial_spec: no valid draw");
}

NetworkSpec chain11_spec(bool hidden) {
  std::string dir = CYCLOTOPO_DATA_DIR;
  return load_network(dir + (hidden ? "/chain11_latent.json" : "/chain11.json"));
}

DirectedGraph five_node_example() {
  DirectedGraph g;
  for (int v = 1; v <= 5; ++v) g.add_node(v);
  for (int v : {1, 3, 4}) {
    g.add_arc(v, 2);
    g.add_arc(2, v);
  }
  g.add_arc(5, 4);
  return g;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace cyclotopo::testing
