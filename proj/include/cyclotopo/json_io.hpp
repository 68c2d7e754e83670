#pragma once

#include <string>

#include "json.hpp"

#include "cyclotopo/eval.hpp"
#include "cyclotopo/graph.hpp"
#include "cyclotopo/network.hpp"
#include "cyclotopo/topo_full.hpp"
#include "cyclotopo/topo_latent.hpp"

namespace cyclotopo {

using Json = nlohmann::ordered_json;

/// {nodes:[{id,label,role}], edges:[[i,j],...]}
Json graph_to_json(const TopologyGraph& g);
TopologyGraph graph_from_json(const Json& j);

Json filter_to_json(const FilterSpec& f);
FilterSpec filter_from_json(const Json& j);
Json input_to_json(const InputSpec& in);
InputSpec input_from_json(const Json& j);

/// {nodes:[{id,input}], edges:[{from,to,numerator,denominator}], hidden:[...]},
/// complex numbers as [re, im].
Json network_to_json(const NetworkSpec& net);
/// Also validates the network.
NetworkSpec network_from_json(const Json& j);
NetworkSpec load_network(const std::string& path);

/// Every key optional; unknown keys are an input error.
LearnConfig config_from_json(const Json& j, LearnConfig base = {});
Json config_to_json(const LearnConfig& c);

Json full_result_to_json(const FullResult& r, const LearnConfig& config);
/// {gc, observed_topology, leaves, nonleaves, final, hidden:[{id, neighbors}]}
/// plus period, config, notes and warnings.
Json latent_result_to_json(const LatentResult& r, const LearnConfig& config);
Json metrics_to_json(const EvalMetrics& m);

Json read_json_file(const std::string& path);

}  // namespace cyclotopo
