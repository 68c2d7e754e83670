#include "cyclotopo/cyclotopo.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <variant>

#include "cyclotopo/error.hpp"
#include "cyclotopo/json_io.hpp"
#include "cyclotopo/series_io.hpp"
#include "cyclotopo/spectral.hpp"
#include "cyclotopo/topo_full.hpp"
#include "cyclotopo/topo_latent.hpp"

using namespace cyclotopo;

struct ct_network {
  NetworkSpec spec;
};

struct ct_dataset {
  std::vector<ScalarSeries> series;
};

struct ct_result {
  std::variant<FullResult, LatentResult> value;
  LearnConfig config;
};

namespace {

thread_local std::string last_error;

template <class F>
ct_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return CT_OK;
  } catch (const InputError& e) {
    last_error = e.what();
    return CT_ERR_INPUT;
  } catch (const NumericalError& e) {
    last_error = e.what();
    return CT_ERR_NUMERICAL;
  } catch (const StructureError& e) {
    last_error = e.what();
    return CT_ERR_STRUCTURE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CT_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw InputError(std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

LearnConfig resolve(const char* config_json, bool oracle) {
  LearnConfig base = oracle ? LearnConfig::oracle_defaults() : LearnConfig{};
  if (!config_json || !*config_json) return base;
  Json j;
  try {
    j = Json::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j, base);
}

std::string config_comment(const LearnConfig& c) { return "config " + config_to_json(c).dump(); }

}  // namespace

extern "C" {

const char* ct_version(void) { return "0.1.0"; }

const char* ct_last_error(void) { return last_error.c_str(); }

void ct_string_free(char* s) { std::free(s); }

ct_status ct_network_load(const char* path, ct_network** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ct_network{load_network(path)};
  });
}

ct_status ct_network_parse(const char* json, ct_network** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    Json j;
    try {
      j = Json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("network is not valid JSON: ") + e.what());
    }
    *out = new ct_network{network_from_json(j)};
  });
}

void ct_network_free(ct_network* net) { delete net; }

ct_status ct_network_to_json(const ct_network* net, char** out) {
  return guarded([&] {
    require(net, "network");
    require(out, "out");
    *out = dup(network_to_json(net->spec).dump(2));
  });
}

ct_status ct_network_truth_json(const ct_network* net, char** out) {
  return guarded([&] {
    require(net, "network");
    require(out, "out");
    *out = dup(graph_to_json(net->spec.topology()).dump(2));
  });
}

ct_status ct_network_assumptions_json(const ct_network* net, char** out) {
  return guarded([&] {
    require(net, "network");
    require(out, "out");
    auto report = check_assumptions(net->spec.directed_graph(), net->spec.hidden(), net->spec.periods());
    Json j = Json::array();
    for (const auto& c : report.checks) {
      Json v = Json::array();
      for (auto [a, b] : c.violations) v.push_back({a, b});
      j.push_back({{"number", c.number}, {"name", c.name}, {"passed", c.passed}, {"violations", v}, {"detail", c.detail}});
    }
    *out = dup(j.dump(2));
  });
}

ct_status ct_simulate(const ct_network* net, uint64_t samples, uint64_t burn_in, uint64_t seed, int full_output,
                      ct_dataset** out) {
  return guarded([&] {
    require(net, "network");
    require(out, "out");
    SimulationOptions opt;
    opt.samples = samples;
    opt.burn_in = burn_in;
    opt.seed = seed;
    opt.full_output = full_output != 0;
    *out = new ct_dataset{simulate(net->spec, opt)};
  });
}

ct_status ct_dataset_load(const char* path, ct_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ct_dataset{load_series(path)};
  });
}

ct_status ct_dataset_save(const ct_dataset* ds, const char* path, const char* comment) {
  return guarded([&] {
    require(ds, "dataset");
    require(path, "path");
    std::vector<std::string> comments;
    if (comment && *comment) {
      std::istringstream is(comment);
      std::string line;
      while (std::getline(is, line)) comments.push_back(line);
    }
    save_series(path, ds->series, comments);
  });
}

ct_status ct_dataset_create(size_t node_count, size_t sample_count, const int* ids, const double* re, const double* im,
                            ct_dataset** out) {
  return guarded([&] {
    require(out, "out");
    if (node_count > 0) {
      require(ids, "ids");
      if (sample_count > 0) {
        require(re, "re");
        require(im, "im");
      }
    }
    auto* ds = new ct_dataset;
    for (size_t n = 0; n < node_count; ++n) {
      ScalarSeries s{ids[n], std::vector<Complex>(sample_count)};
      for (size_t k = 0; k < sample_count; ++k) s.samples[k] = Complex(re[n * sample_count + k], im[n * sample_count + k]);
      ds->series.push_back(std::move(s));
    }
    *out = ds;
  });
}

size_t ct_dataset_node_count(const ct_dataset* ds) { return ds ? ds->series.size() : 0; }

size_t ct_dataset_sample_count(const ct_dataset* ds) {
  return ds && !ds->series.empty() ? ds->series.front().size() : 0;
}

int ct_dataset_node_id(const ct_dataset* ds, size_t index) {
  return ds && index < ds->series.size() ? ds->series[index].node_id : -1;
}

ct_status ct_dataset_copy_node(const ct_dataset* ds, size_t index, double* re, double* im) {
  return guarded([&] {
    require(ds, "dataset");
    if (index >= ds->series.size()) throw InputError("node index out of range");
    const auto& s = ds->series[index].samples;
    for (size_t k = 0; k < s.size(); ++k) {
      if (re) re[k] = s[k].real();
      if (im) im[k] = s[k].imag();
    }
  });
}

ct_status ct_dataset_drop_nodes(ct_dataset* ds, const int* ids, size_t count) {
  return guarded([&] {
    require(ds, "dataset");
    if (count) require(ids, "ids");
    NodeSet drop(ids, ids + count);
    std::erase_if(ds->series, [&](const ScalarSeries& s) { return drop.contains(s.node_id); });
  });
}

void ct_dataset_free(ct_dataset* ds) { delete ds; }

ct_status ct_detect_period(const ct_dataset* ds, size_t index, int max_period, double threshold, int* out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "out");
    if (index >= ds->series.size()) throw InputError("node index out of range");
    *out = detect_period(ds->series[index], max_period, threshold);
  });
}

ct_status ct_learn(const ct_dataset* ds, const char* config_json, ct_result** out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "out");
    LearnConfig c = resolve(config_json, false);
    *out = new ct_result{reconstruct_topology(ds->series, c), c};
  });
}

ct_status ct_learn_latent(const ct_dataset* ds, const char* config_json, ct_result** out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "out");
    LearnConfig c = resolve(config_json, false);
    *out = new ct_result{reconstruct_latent(ds->series, c), c};
  });
}

ct_status ct_learn_oracle(const ct_network* net, const char* config_json, ct_result** out) {
  return guarded([&] {
    require(net, "network");
    require(out, "out");
    LearnConfig c = resolve(config_json, true);
    *out = new ct_result{reconstruct_topology_oracle(net->spec, c), c};
  });
}

ct_status ct_learn_latent_oracle(const ct_network* net, const char* config_json, ct_result** out) {
  return guarded([&] {
    require(net, "network");
    require(out, "out");
    LearnConfig c = resolve(config_json, true);
    *out = new ct_result{reconstruct_latent_oracle(net->spec, c), c};
  });
}

ct_status ct_result_json(const ct_result* r, char** out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    Json j = std::holds_alternative<FullResult>(r->value) ? full_result_to_json(std::get<FullResult>(r->value), r->config)
                                                          : latent_result_to_json(std::get<LatentResult>(r->value), r->config);
    *out = dup(j.dump(2));
  });
}

ct_status ct_result_diagnostics_csv(const ct_result* r, char** out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    std::ostringstream os;
    const auto& diags = std::holds_alternative<FullResult>(r->value) ? std::get<FullResult>(r->value).diagnostics
                                                                     : std::get<LatentResult>(r->value).leaf_tests;
    write_diagnostics_csv(os, diags, {config_comment(r->config)});
    *out = dup(os.str());
  });
}

ct_status ct_result_spectral_csv(const ct_result* r, char** out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    std::ostringstream os;
    const auto& grid = std::holds_alternative<FullResult>(r->value) ? std::get<FullResult>(r->value).inverse
                                                                    : std::get<LatentResult>(r->value).inverse;
    write_spectral_dump(os, grid, {config_comment(r->config)});
    *out = dup(os.str());
  });
}

ct_status ct_result_dot(const ct_result* r, const char* stage, char** out) {
  return guarded([&] {
    require(r, "result");
    require(stage, "stage");
    require(out, "out");
    std::string s = stage;
    const TopologyGraph* g = nullptr;
    if (const auto* full = std::get_if<FullResult>(&r->value)) {
      if (s == "moral") g = &full->moral;
      if (s == "topology") g = &full->topology;
    } else {
      const auto& lat = std::get<LatentResult>(r->value);
      if (s == "gc") g = &lat.gc;
      if (s == "observed_topology") g = &lat.observed_topology;
      if (s == "final") g = &lat.final;
    }
    if (!g) throw InputError("unknown stage '" + s + "' for this result");
    std::string name = s;
    *out = dup(to_dot(*g, name));
  });
}

void ct_result_free(ct_result* r) { delete r; }

ct_status ct_config_resolve(const char* config_json, int oracle, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup(config_to_json(resolve(config_json, oracle != 0)).dump());
  });
}

ct_status ct_eval(const char* graph_json, const ct_network* truth, char** out) {
  return guarded([&] {
    require(graph_json, "graph");
    require(truth, "truth");
    require(out, "out");
    Json j;
    try {
      j = Json::parse(graph_json);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("graph is not valid JSON: ") + e.what());
    }
    // result documents carry the graph under "final" or "topology"
    if (j.contains("final"))
      j = j["final"];
    else if (j.contains("topology"))
      j = j["topology"];
    EvalMetrics m = evaluate(graph_from_json(j), truth->spec.topology());
    *out = dup(metrics_to_json(m).dump(2));
  });
}

ct_status ct_oracle_dump(const ct_network* net, const char* config_json, int latent, char** out) {
  return guarded([&] {
    require(net, "network");
    require(out, "out");
    LearnConfig c = resolve(config_json, true);
    int T = c.period.value_or(net->spec.period());
    auto omegas = fft_grid(c.oracle_grid, c.welch.stride);
    SpectralGrid grid = latent ? exact_latent_components(net->spec, omegas, T).observed_inverse_grid()
                               : exact_inverse_psd(net->spec, omegas, T);
    std::ostringstream os;
    write_spectral_dump(os, grid, {config_comment(c)});
    *out = dup(os.str());
  });
}

}  // extern "C"
