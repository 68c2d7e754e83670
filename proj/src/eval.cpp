#include "cyclotopo/eval.hpp"

#include <algorithm>
#include <vector>

namespace cyclotopo {

namespace {

struct Search {
  const TopologyGraph& rec;
  const TopologyGraph& truth;
  std::vector<NodeId> rec_hidden;
  std::vector<NodeId> truth_hidden;
  std::map<NodeId, NodeId> current;
  std::vector<bool> used;

  std::size_t best_tp = 0;
  bool have_best = false;
  std::map<NodeId, NodeId> best;
  bool placement = false;

  NodeId image(NodeId v) const {
    auto it = current.find(v);
    if (it != current.end()) return it->second;
    return v;
  }

  std::size_t true_positives() const {
    std::size_t tp = 0;
    for (auto [a, b] : rec.edges()) {
      NodeId x = image(a), y = image(b);
      if (x == y || x < 0 || y < 0) continue;
      if (truth.has_node(x) && truth.has_node(y) && truth.has_edge(x, y)) ++tp;
    }
    return tp;
  }

  NodeSet observed_neighbors(const TopologyGraph& g, NodeId h) const {
    NodeSet out;
    for (NodeId v : g.neighbors(h))
      if (g.label(v) == NodeLabel::observed) out.insert(v);
    return out;
  }

  bool placement_ok() const {
    if (rec_hidden.size() != truth_hidden.size()) return false;
    for (NodeId h : rec_hidden) {
      NodeId t = image(h);
      if (t < 0 || !truth.has_node(t)) return false;
      if (observed_neighbors(rec, h) != observed_neighbors(truth, t)) return false;
    }
    return true;
  }

  void run(std::size_t k) {
    if (k == rec_hidden.size()) {
      std::size_t tp = true_positives();
      bool place = placement_ok();
      placement = placement || place;
      if (!have_best || tp > best_tp) {
        have_best = true;
        best_tp = tp;
        best = current;
      }
      return;
    }
    NodeId h = rec_hidden[k];
    for (std::size_t t = 0; t < truth_hidden.size(); ++t) {
      if (used[t]) continue;
      used[t] = true;
      current[h] = truth_hidden[t];
      run(k + 1);
      used[t] = false;
    }
    // unmatched hidden nodes get labels that cannot occur in the truth
    current[h] = -1 - static_cast<NodeId>(k);
    run(k + 1);
    current.erase(h);
  }
};

}  // namespace

EvalMetrics evaluate(const TopologyGraph& reconstructed, const TopologyGraph& truth) {
  Search s{reconstructed, truth, {}, {}, {}, {}, 0, false, {}, false};
  for (NodeId v : reconstructed.nodes())
    if (reconstructed.label(v) == NodeLabel::hidden) s.rec_hidden.push_back(v);
  for (NodeId v : truth.nodes())
    if (truth.label(v) == NodeLabel::hidden) s.truth_hidden.push_back(v);
  s.used.assign(s.truth_hidden.size(), false);
  s.run(0);

  EvalMetrics m;
  m.true_positives = s.best_tp;
  std::size_t predicted = reconstructed.edges().size();
  std::size_t actual = truth.edges().size();
  m.false_positives = predicted - m.true_positives;
  m.false_negatives = actual - m.true_positives;
  m.precision = predicted ? static_cast<double>(m.true_positives) / static_cast<double>(predicted) : (actual ? 0.0 : 1.0);
  m.recall = actual ? static_cast<double>(m.true_positives) / static_cast<double>(actual) : 1.0;
  m.f1 = (m.precision + m.recall) > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.hidden_count_match = s.rec_hidden.size() == s.truth_hidden.size();
  m.hidden_placement_match = s.placement;
  for (auto [h, t] : s.best)
    if (t >= 0) m.hidden_mapping[h] = t;

  NodeSet obs_rec = reconstructed.nodes_with_label(NodeLabel::observed);
  NodeSet obs_truth = truth.nodes_with_label(NodeLabel::observed);
  m.exact_match = m.hidden_count_match && obs_rec == obs_truth && m.false_positives == 0 && m.false_negatives == 0;
  return m;
}

}  // namespace cyclotopo
