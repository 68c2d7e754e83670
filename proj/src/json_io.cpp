#include "cyclotopo/json_io.hpp"

#include <cmath>
#include <fstream>

#include "cyclotopo/error.hpp"

namespace cyclotopo {

namespace {

Json complex_list(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (auto c : v) a.push_back({c.real(), c.imag()});
  return a;
}

Complex complex_from(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError("expected a complex number [re, im], got " + j.dump());
}

std::vector<Complex> complex_list_from(const Json& j) {
  if (!j.is_array()) throw InputError("expected a list of complex numbers");
  std::vector<Complex> out;
  for (const auto& v : j) out.push_back(complex_from(v));
  return out;
}

Json nodeset(const NodeSet& s) { return Json(std::vector<NodeId>(s.begin(), s.end())); }

Json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad or missing field '") + key + "': " + e.what());
  }
}

}  // namespace

Json graph_to_json(const TopologyGraph& g) {
  Json j;
  j["nodes"] = Json::array();
  for (NodeId id : g.nodes())
    j["nodes"].push_back({{"id", id}, {"label", to_string(g.label(id))}, {"role", to_string(g.role(id))}});
  j["edges"] = Json::array();
  for (auto [a, b] : g.edges()) j["edges"].push_back({a, b});
  return j;
}

TopologyGraph graph_from_json(const Json& j) {
  TopologyGraph g;
  try {
    for (const auto& n : j.at("nodes")) {
      NodeId id = n.at("id").get<NodeId>();
      NodeLabel label = n.value("label", std::string("observed")) == "hidden" ? NodeLabel::hidden : NodeLabel::observed;
      g.add_node(id, label);
      std::string role = n.value("role", std::string("unknown"));
      g.set_role(id, role == "leaf" ? NodeRole::leaf : role == "nonleaf" ? NodeRole::nonleaf : NodeRole::unknown);
    }
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad graph document: ") + e.what());
  }
  return g;
}

Json filter_to_json(const FilterSpec& f) {
  Json j;
  j["kind"] = f.kind == FilterSpec::Kind::fir ? "fir" : "rational";
  j["numerator"] = complex_list(f.numerator);
  j["denominator"] = complex_list(f.denominator);
  return j;
}

FilterSpec filter_from_json(const Json& j) {
  if (!j.contains("numerator")) throw InputError("filter needs a numerator");
  auto num = complex_list_from(j.at("numerator"));
  std::vector<Complex> den{1.0};
  if (j.contains("denominator")) den = complex_list_from(j.at("denominator"));
  std::string kind = j.value("kind", std::string(den.size() > 1 ? "rational" : "fir"));
  if (kind == "fir" && den.size() > 1) throw InputError("fir filter with a nontrivial denominator");
  if (kind != "fir" && kind != "rational") throw InputError("unknown filter kind '" + kind + "'");
  FilterSpec f = FilterSpec::rational(num, den);
  f.validate();
  return f;
}

Json input_to_json(const InputSpec& in) {
  Json j;
  j["kind"] = in.kind == InputKind::white ? "white" : "am_white";
  j["period"] = in.period;
  j["modulation"] = complex_list(in.modulation);
  j["variance"] = in.variance;
  j["distribution"] = in.distribution == Distribution::gaussian_real ? "gaussian_real" : "gaussian_circular_complex";
  if (in.shaping) j["shaping"] = filter_to_json(*in.shaping);
  return j;
}

InputSpec input_from_json(const Json& j) {
  InputSpec in;
  std::string kind = j.value("kind", std::string("white"));
  if (kind == "white")
    in.kind = InputKind::white;
  else if (kind == "am_white")
    in.kind = InputKind::am_white;
  else
    throw InputError("unknown input kind '" + kind + "'");
  if (j.contains("modulation")) in.modulation = complex_list_from(j.at("modulation"));
  in.period = j.contains("period") ? get<int>(j, "period") : static_cast<int>(in.modulation.size());
  if (in.kind == InputKind::white && !j.contains("modulation")) in.period = j.value("period", 1);
  in.variance = j.value("variance", 1.0);
  std::string dist = j.value("distribution", std::string("gaussian_circular_complex"));
  if (dist == "gaussian_real")
    in.distribution = Distribution::gaussian_real;
  else if (dist == "gaussian_circular_complex")
    in.distribution = Distribution::gaussian_circular_complex;
  else
    throw InputError("unknown distribution '" + dist + "'");
  if (j.contains("shaping")) in.shaping = filter_from_json(j.at("shaping"));
  in.validate();
  return in;
}

Json network_to_json(const NetworkSpec& net) {
  Json j;
  j["nodes"] = Json::array();
  for (NodeId id : net.nodes()) j["nodes"].push_back({{"id", id}, {"input", input_to_json(net.input(id))}});
  j["edges"] = Json::array();
  for (const auto& [key, f] : net.filters()) {
    Json e;
    e["from"] = key.second;
    e["to"] = key.first;
    e["numerator"] = complex_list(f.numerator);
    e["denominator"] = complex_list(f.denominator);
    j["edges"].push_back(e);
  }
  j["hidden"] = nodeset(net.hidden());
  return j;
}

NetworkSpec network_from_json(const Json& j) {
  NetworkSpec net;
  if (!j.is_object() || !j.contains("nodes")) throw InputError("network document needs a nodes list");
  for (const auto& n : j.at("nodes")) {
    NodeId id = get<NodeId>(n, "id");
    InputSpec in = n.contains("input") ? input_from_json(n.at("input")) : InputSpec::white();
    net.add_node(id, in);
  }
  if (j.contains("edges"))
    for (const auto& e : j.at("edges")) net.add_edge(get<NodeId>(e, "from"), get<NodeId>(e, "to"), filter_from_json(e));
  if (j.contains("hidden")) {
    auto ids = j.at("hidden").get<std::vector<NodeId>>();
    net.set_hidden(NodeSet(ids.begin(), ids.end()));
  }
  net.validate();
  return net;
}

Json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(is, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

NetworkSpec load_network(const std::string& path) { return network_from_json(read_json_file(path)); }

LearnConfig config_from_json(const Json& j, LearnConfig c) {
  if (j.is_null()) return c;
  if (!j.is_object()) throw InputError("config must be a JSON object");
  try {
    auto count = [](const Json& v) {
      if (!v.is_number_integer() || v.get<long long>() < 0) throw InputError("expected a nonnegative integer, got " + v.dump());
      return v.get<std::size_t>();
    };
    for (const auto& [key, v] : j.items()) {
      if (key == "period") {
        if (v.is_null() || (v.is_string() && v.get<std::string>() == "auto"))
          c.period.reset();
        else
          c.period = v.get<int>();
      } else if (key == "max_period") {
        c.max_period = v.get<int>();
      } else if (key == "period_threshold") {
        c.period_threshold = v.get<double>();
      } else if (key == "segment") {
        c.welch.segment_length = count(v);
      } else if (key == "overlap") {
        c.welch.overlap = v.get<double>();
      } else if (key == "window") {
        std::string w = v.get<std::string>();
        if (w == "hann")
          c.welch.window = Window::hann;
        else if (w == "rect")
          c.welch.window = Window::rect;
        else
          throw InputError("unknown window '" + w + "'");
      } else if (key == "stride") {
        c.welch.stride = count(v);
      } else if (key == "ridge") {
        c.ridge = v.get<double>();
      } else if (key == "rho" || key == "tau") {
        c.rho = v.get<double>();
      } else if (key == "phase_statistic") {
        std::string s = v.get<std::string>();
        if (s == "auto")
          c.phase.statistic = PhaseStatistic::automatic;
        else if (s == "flatness")
          c.phase.statistic = PhaseStatistic::flatness;
        else if (s == "residual")
          c.phase.statistic = PhaseStatistic::residual;
        else
          throw InputError("unknown phase statistic '" + s + "'");
      } else if (key == "flatness_tol") {
        c.phase.flatness_tol = v.get<double>();
      } else if (key == "residual_tol") {
        c.phase.residual_tol = v.get<double>();
      } else if (key == "magnitude_floor") {
        c.phase.magnitude_floor = v.get<double>();
      } else if (key == "oracle_grid") {
        c.oracle_grid = count(v);
      } else {
        throw InputError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad config value: ") + e.what());
  }
  if (!(c.rho > 0.0)) throw InputError("rho must be positive");
  if (c.max_period < 1) throw InputError("max_period must be at least 1");
  if (c.period && *c.period < 1) throw InputError("period must be at least 1");
  if (c.welch.segment_length < 2) throw InputError("segment must be at least 2");
  if (c.welch.stride < 1) throw InputError("stride must be at least 1");
  if (!(c.welch.overlap >= 0.0 && c.welch.overlap < 1.0)) throw InputError("overlap must lie in [0, 1)");
  if (c.oracle_grid < 2) throw InputError("oracle_grid must be at least 2");
  if (c.phase.magnitude_floor < 0.0 || c.phase.magnitude_floor >= 1.0)
    throw InputError("magnitude_floor must lie in [0, 1)");
  return c;
}

Json config_to_json(const LearnConfig& c) {
  Json j;
  if (c.period)
    j["period"] = *c.period;
  else
    j["period"] = "auto";
  j["max_period"] = c.max_period;
  j["period_threshold"] = c.period_threshold;
  j["segment"] = c.welch.segment_length;
  j["overlap"] = c.welch.overlap;
  j["window"] = c.welch.window == Window::hann ? "hann" : "rect";
  j["stride"] = c.welch.stride;
  j["ridge"] = c.ridge;
  j["rho"] = c.rho;
  j["phase_statistic"] = c.phase.statistic == PhaseStatistic::automatic ? "auto"
                         : c.phase.statistic == PhaseStatistic::flatness ? "flatness"
                                                                         : "residual";
  j["flatness_tol"] = c.phase.flatness_tol;
  j["residual_tol"] = c.phase.residual_tol;
  j["magnitude_floor"] = c.phase.magnitude_floor;
  j["oracle_grid"] = c.oracle_grid;
  return j;
}

namespace {

Json diagnostics_json(const std::vector<EdgeDiagnostic>& ds) {
  Json a = Json::array();
  for (const auto& d : ds) {
    Json e;
    e["j"] = d.j;
    e["i"] = d.i;
    e["block_norm"] = number(d.block_norm);
    e["flatness"] = number(d.profile.flatness);
    e["mean_phase"] = number(d.profile.mean_phase);
    e["residual"] = number(d.profile.residual);
    e["decision"] = d.decision;
    a.push_back(e);
  }
  return a;
}

}  // namespace

Json full_result_to_json(const FullResult& r, const LearnConfig& config) {
  Json j;
  j["config"] = config_to_json(config);
  j["period"] = r.period;
  j["node_periods"] = r.node_periods;
  j["moral"] = graph_to_json(r.moral);
  j["topology"] = graph_to_json(r.topology);
  Json spurious = Json::array();
  for (const auto& d : r.diagnostics)
    if (d.decision == "spurious") spurious.push_back({d.j, d.i});
  j["spurious"] = spurious;
  j["warnings"] = r.warnings;
  return j;
}

Json latent_result_to_json(const LatentResult& r, const LearnConfig& config) {
  Json j;
  j["config"] = config_to_json(config);
  j["period"] = r.period;
  j["node_periods"] = r.node_periods;
  j["gc"] = graph_to_json(r.gc);
  j["observed_topology"] = graph_to_json(r.observed_topology);
  j["leaves"] = nodeset(r.leaves);
  j["nonleaves"] = nodeset(r.nonleaves);
  j["final"] = graph_to_json(r.final);
  Json hidden = Json::array();
  for (NodeId h : r.hidden_inserted) hidden.push_back({{"id", h}, {"neighbors", nodeset(r.final.neighbors(h))}});
  j["hidden"] = hidden;
  j["leaf_tests"] = diagnostics_json(r.leaf_tests);
  j["notes"] = r.notes;
  j["warnings"] = r.warnings;
  return j;
}

Json metrics_to_json(const EvalMetrics& m) {
  Json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["exact_match"] = m.exact_match;
  j["hidden_count_match"] = m.hidden_count_match;
  j["hidden_placement_match"] = m.hidden_placement_match;
  j["true_positives"] = m.true_positives;
  j["false_positives"] = m.false_positives;
  j["false_negatives"] = m.false_negatives;
  Json map = Json::object();
  for (auto [h, t] : m.hidden_mapping) map[std::to_string(h)] = t;
  j["hidden_mapping"] = map;
  return j;
}

}  // namespace cyclotopo
