// Command-line front end. Talks to the library only through cyclotopo.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cyclotopo/cyclotopo.h"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Failure {
  ct_status status;
  std::string message;
};

void check(ct_status s) {
  if (s != CT_OK) throw Failure{s, ct_last_error()};
}

void fail_input(const std::string& msg) { throw Failure{CT_ERR_INPUT, msg}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Network = std::unique_ptr<ct_network, Deleter<ct_network, ct_network_free>>;
using Dataset = std::unique_ptr<ct_dataset, Deleter<ct_dataset, ct_dataset_free>>;
using Result = std::unique_ptr<ct_result, Deleter<ct_result, ct_result_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  ct_string_free(s);
  return out;
}

Network load_network(const std::string& path) {
  ct_network* n = nullptr;
  check(ct_network_load(path.c_str(), &n));
  return Network(n);
}

Dataset load_dataset(const std::string& path) {
  ct_dataset* d = nullptr;
  check(ct_dataset_load(path.c_str(), &d));
  return Dataset(d);
}

Json parse(const std::string& text) { return Json::parse(text); }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail_input("cannot write " + path.string());
  os << text;
  if (!os) fail_input("write failed: " + path.string());
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail_input("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<int> parse_ids(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail_input("bad node id '" + item + "'");
    }
  }
  return out;
}

// Learner settings shared by learn, learn-latent, sweep and oracle-dump.
struct ConfigFlags {
  std::string config_file;
  std::optional<std::string> period;
  std::optional<int> max_period;
  std::optional<double> period_threshold;
  std::optional<int> segment;
  std::optional<double> overlap;
  std::optional<std::string> window;
  std::optional<int> stride;
  std::optional<double> ridge;
  std::optional<double> rho;
  std::optional<std::string> phase_statistic;
  std::optional<double> flatness_tol;
  std::optional<double> residual_tol;
  std::optional<double> magnitude_floor;
  std::optional<int> oracle_grid;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "JSON config file (flags take precedence)");
    app->add_option("--period", period, "lifting period, or 'auto'");
    app->add_option("--max-period", max_period, "largest period tried by detection");
    app->add_option("--period-threshold", period_threshold, "cyclic peak threshold over the median");
    app->add_option("--segment", segment, "Welch segment length in blocks");
    app->add_option("--overlap", overlap, "Welch overlap fraction");
    app->add_option("--window", window, "hann or rect");
    app->add_option("--stride", stride, "keep every stride-th frequency bin");
    app->add_option("--ridge", ridge, "ridge added before inversion");
    app->add_option("--rho,--tau", rho, "block-norm threshold");
    app->add_option("--phase-statistic", phase_statistic, "auto, flatness or residual");
    app->add_option("--flatness-tol", flatness_tol, "circular deviation tolerance in radians");
    app->add_option("--residual-tol", residual_tol, "noise-normalized residual tolerance");
    app->add_option("--magnitude-floor", magnitude_floor, "eigenvalue floor relative to the peak");
    app->add_option("--oracle-grid", oracle_grid, "frequency count of oracle spectra");
  }

  Json to_json() const {
    Json j = Json::object();
    if (!config_file.empty()) {
      try {
        j = Json::parse(read_text(config_file), nullptr, true, true);
      } catch (const nlohmann::json::exception& e) {
        fail_input(config_file + ": " + e.what());
      }
      if (!j.is_object()) fail_input(config_file + ": config must be a JSON object");
    }
    if (period) {
      if (*period == "auto")
        j["period"] = "auto";
      else {
        auto ids = parse_ids(*period);
        if (ids.size() != 1) fail_input("bad --period '" + *period + "'");
        j["period"] = ids[0];
      }
    }
    if (max_period) j["max_period"] = *max_period;
    if (period_threshold) j["period_threshold"] = *period_threshold;
    if (segment) j["segment"] = *segment;
    if (overlap) j["overlap"] = *overlap;
    if (window) j["window"] = *window;
    if (stride) j["stride"] = *stride;
    if (ridge) j["ridge"] = *ridge;
    if (rho) {
      j.erase("tau");
      j["rho"] = *rho;
    }
    if (phase_statistic) j["phase_statistic"] = *phase_statistic;
    if (flatness_tol) j["flatness_tol"] = *flatness_tol;
    if (residual_tol) j["residual_tol"] = *residual_tol;
    if (magnitude_floor) j["magnitude_floor"] = *magnitude_floor;
    if (oracle_grid) j["oracle_grid"] = *oracle_grid;
    return j;
  }
};

std::string effective_config(const ConfigFlags& flags, bool oracle) {
  char* out = nullptr;
  check(ct_config_resolve(flags.to_json().dump().c_str(), oracle ? 1 : 0, &out));
  return take(out);
}

std::string dot_with_header(const ct_result* r, const char* stage, const std::string& config) {
  char* out = nullptr;
  check(ct_result_dot(r, stage, &out));
  return "// config " + config + "\n" + take(out);
}

void write_result(const ct_result* r, const fs::path& dir, const std::vector<std::string>& stages,
                  const std::string& config) {
  fs::create_directories(dir);
  char* out = nullptr;
  check(ct_result_json(r, &out));
  std::string text = take(out);
  write_file(dir / "result.json", text + "\n");
  Json doc = parse(text);
  for (const auto& s : stages) {
    Json stage = {{"config", doc["config"]}, {"stage", s}};
    for (auto& [k, v] : doc[s].items()) stage[k] = v;
    write_file(dir / (s + ".json"), stage.dump(2) + "\n");
    write_file(dir / (s + ".dot"), dot_with_header(r, s.c_str(), config));
  }
  check(ct_result_diagnostics_csv(r, &out));
  write_file(dir / "diagnostics.csv", take(out));
  check(ct_result_spectral_csv(r, &out));
  write_file(dir / "spectral.csv", take(out));
  write_file(dir / "config.json", parse(config).dump(2) + "\n");
}

struct LearnArgs {
  std::string dataset;
  std::string spec;
  std::string out;
  std::string drop;
  bool oracle = false;
  ConfigFlags config;
};

void attach_learn(CLI::App* app, LearnArgs& a, bool latent) {
  app->add_option("dataset", a.dataset, "dataset file (CSV or .bin)");
  app->add_option("--spec", a.spec, "network spec, required with --oracle");
  app->add_option("-o,--out", a.out, "output directory (result JSON on stdout when omitted)");
  app->add_flag("--oracle", a.oracle, "use exact spectra of --spec instead of the dataset");
  if (latent) app->add_option("--drop", a.drop, "comma-separated node ids removed from the dataset");
  a.config.attach(app);
}

int run_learn(const LearnArgs& a, bool latent) {
  std::string config = effective_config(a.config, a.oracle);
  ct_result* r = nullptr;
  if (a.oracle) {
    if (a.spec.empty()) fail_input("--oracle requires --spec");
    Network net = load_network(a.spec);
    check(latent ? ct_learn_latent_oracle(net.get(), config.c_str(), &r) : ct_learn_oracle(net.get(), config.c_str(), &r));
  } else {
    if (a.dataset.empty()) fail_input("a dataset is required without --oracle");
    Dataset ds = load_dataset(a.dataset);
    if (!a.drop.empty()) {
      auto ids = parse_ids(a.drop);
      check(ct_dataset_drop_nodes(ds.get(), ids.data(), ids.size()));
    }
    check(latent ? ct_learn_latent(ds.get(), config.c_str(), &r) : ct_learn(ds.get(), config.c_str(), &r));
  }
  Result result(r);
  if (a.out.empty()) {
    char* out = nullptr;
    check(ct_result_json(result.get(), &out));
    std::cout << take(out) << "\n";
  } else {
    std::vector<std::string> stages = latent ? std::vector<std::string>{"gc", "observed_topology", "final"}
                                             : std::vector<std::string>{"moral", "topology"};
    write_result(result.get(), a.out, stages, config);
  }
  return 0;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string csv_bool(bool b) { return b ? "1" : "0"; }

int run(int argc, char** argv) {
  CLI::App app{"Topology learning for cyclostationary networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ct_version()));

  struct {
    std::string spec, out;
    std::size_t samples = 0;
    std::size_t burn_in = 10000;
    std::uint64_t seed = 1;
    bool full = false;
  } sim;
  auto* simulate = app.add_subcommand("simulate", "simulate a dataset from a network spec");
  simulate->add_option("--spec", sim.spec, "network spec JSON")->required();
  simulate->add_option("-N,--samples", sim.samples, "number of samples")->required();
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--burn-in", sim.burn_in, "discarded initial samples");
  simulate->add_flag("--full", sim.full, "also write hidden nodes");
  simulate->add_option("-o,--out", sim.out, "output file; .bin selects the binary format")->required();

  LearnArgs learn_args, latent_args;
  auto* learn = app.add_subcommand("learn", "learn the topology with every node observed");
  attach_learn(learn, learn_args, false);
  auto* learn_latent = app.add_subcommand("learn-latent", "learn a radial topology with hidden nodes");
  attach_learn(learn_latent, latent_args, true);

  struct {
    std::string result, truth, out;
  } ev;
  auto* eval = app.add_subcommand("eval", "compare a reconstruction with the true topology");
  eval->add_option("reconstructed", ev.result, "result or graph JSON")->required();
  eval->add_option("--truth", ev.truth, "network spec JSON")->required();
  eval->add_option("-o,--out", ev.out, "metrics JSON file (stdout when omitted)");

  struct {
    std::string spec, out, samples;
    std::string seeds = "1";
    std::size_t burn_in = 10000;
    bool latent = false, full = false;
    ConfigFlags config;
  } sw;
  auto* sweep = app.add_subcommand("sweep", "metrics over a grid of sample counts and seeds");
  sweep->add_option("--spec", sw.spec, "network spec JSON")->required();
  sweep->add_option("-N,--samples", sw.samples, "comma-separated sample counts")->required();
  sweep->add_option("--seeds", sw.seeds, "comma-separated seeds");
  sweep->add_option("--burn-in", sw.burn_in, "discarded initial samples");
  sweep->add_flag("--latent", sw.latent, "run the latent learner on observed nodes");
  sweep->add_option("-o,--out", sw.out, "CSV file (stdout when omitted)");
  sw.config.attach(sweep);

  struct {
    std::string spec, out;
    bool latent = false;
    ConfigFlags config;
  } od;
  auto* oracle_dump = app.add_subcommand("oracle-dump", "write the exact inverse PSD of a spec");
  oracle_dump->add_option("--spec", od.spec, "network spec JSON")->required();
  oracle_dump->add_flag("--latent", od.latent, "observed-node inverse after marginalizing hidden nodes");
  oracle_dump->add_option("-o,--out", od.out, "CSV file (stdout when omitted)");
  od.config.attach(oracle_dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (simulate->parsed()) {
    if (sim.samples == 0) fail_input("samples must be positive");
    Network net = load_network(sim.spec);
    ct_dataset* d = nullptr;
    check(ct_simulate(net.get(), sim.samples, sim.burn_in, sim.seed, sim.full ? 1 : 0, &d));
    Dataset ds(d);
    std::string comment = "spec " + fs::path(sim.spec).filename().string() + " samples " + std::to_string(sim.samples) +
                          " burn_in " + std::to_string(sim.burn_in) + " seed " + std::to_string(sim.seed);
    check(ct_dataset_save(ds.get(), sim.out.c_str(), comment.c_str()));
    return 0;
  }
  if (learn->parsed()) return run_learn(learn_args, false);
  if (learn_latent->parsed()) return run_learn(latent_args, true);

  if (eval->parsed()) {
    Network truth = load_network(ev.truth);
    char* out = nullptr;
    check(ct_eval(read_text(ev.result).c_str(), truth.get(), &out));
    std::string text = take(out) + "\n";
    if (ev.out.empty())
      std::cout << text;
    else
      write_file(ev.out, text);
    return 0;
  }

  if (sweep->parsed()) {
    std::vector<std::size_t> ns;
    for (const auto& s : split(sw.samples)) {
      try {
        long long v = std::stoll(s);
        if (v <= 0) throw std::invalid_argument(s);
        ns.push_back(static_cast<std::size_t>(v));
      } catch (const std::exception&) {
        fail_input("bad sample count '" + s + "'");
      }
    }
    std::vector<std::uint64_t> seeds;
    for (const auto& s : split(sw.seeds)) {
      try {
        seeds.push_back(std::stoull(s));
      } catch (const std::exception&) {
        fail_input("bad seed '" + s + "'");
      }
    }
    if (ns.empty()) fail_input("no sample counts given");
    if (seeds.empty()) fail_input("no seeds given");
    std::string config = effective_config(sw.config, false);
    Network net = load_network(sw.spec);

    std::ostringstream csv;
    csv << "# config " << config << "\n";
    csv << "samples,seed,precision,recall,f1,exact_match,hidden_count_match,hidden_placement_match,tp,fp,fn,error\n";
    for (std::size_t n : ns) {
      for (std::uint64_t seed : seeds) {
        ct_dataset* d = nullptr;
        check(ct_simulate(net.get(), n, sw.burn_in, seed, 0, &d));
        Dataset ds(d);
        ct_result* r = nullptr;
        ct_status s = sw.latent ? ct_learn_latent(ds.get(), config.c_str(), &r) : ct_learn(ds.get(), config.c_str(), &r);
        csv << n << "," << seed << ",";
        if (s == CT_ERR_STRUCTURE) {
          // a reconstruction that cannot be completed scores zero
          std::string msg = ct_last_error();
          for (char& c : msg)
            if (c == ',' || c == '\n') c = ' ';
          csv << "0,0,0,0,0,0,0,0,0," << msg << "\n";
          continue;
        }
        check(s);
        Result result(r);
        char* out = nullptr;
        check(ct_result_json(result.get(), &out));
        std::string doc = take(out);
        check(ct_eval(doc.c_str(), net.get(), &out));
        Json m = parse(take(out));
        csv << m["precision"].get<double>() << "," << m["recall"].get<double>() << "," << m["f1"].get<double>() << ","
            << csv_bool(m["exact_match"]) << "," << csv_bool(m["hidden_count_match"]) << ","
            << csv_bool(m["hidden_placement_match"]) << "," << m["true_positives"].get<long>() << "," << m["false_positives"].get<long>() << ","
            << m["false_negatives"].get<long>() << ",\n";
      }
    }
    if (sw.out.empty())
      std::cout << csv.str();
    else
      write_file(sw.out, csv.str());
    return 0;
  }

  if (oracle_dump->parsed()) {
    std::string config = effective_config(od.config, true);
    Network net = load_network(od.spec);
    char* out = nullptr;
    check(ct_oracle_dump(net.get(), config.c_str(), od.latent ? 1 : 0, &out));
    std::string text = take(out);
    if (od.out.empty())
      std::cout << text;
    else
      write_file(od.out, text);
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    switch (f.status) {
      case CT_ERR_INPUT:
        return 2;
      case CT_ERR_NUMERICAL:
      case CT_ERR_STRUCTURE:
        return 3;
      default:
        return 1;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
