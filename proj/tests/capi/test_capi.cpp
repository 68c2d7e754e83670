#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "cyclotopo/cyclotopo.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  ct_string_free(s);
  return out;
}

const std::string data_dir = CYCLOTOPO_DATA_DIR;

}  // namespace

TEST_CASE("version and errors") {
  CHECK(std::string(ct_version()) == "0.1.0");
  ct_network* net = nullptr;
  CHECK(ct_network_load("/nonexistent/spec.json", &net) == CT_ERR_INPUT);
  CHECK(net == nullptr);
  CHECK(std::string(ct_last_error()).find("/nonexistent/spec.json") != std::string::npos);
  CHECK(ct_network_parse("{not json", &net) == CT_ERR_INPUT);
  CHECK(ct_network_parse(nullptr, &net) == CT_ERR_INPUT);
  char* out = nullptr;
  CHECK(ct_config_resolve(R"({"bogus": 1})", 0, &out) == CT_ERR_INPUT);
  CHECK(std::string(ct_last_error()).find("bogus") != std::string::npos);
}

TEST_CASE("config resolution") {
  char* out = nullptr;
  REQUIRE(ct_config_resolve(nullptr, 1, &out) == CT_OK);
  std::string oracle = take(out);
  CHECK(oracle.find("\"rho\":1e-06") != std::string::npos);
  REQUIRE(ct_config_resolve(R"({"segment": 64})", 0, &out) == CT_OK);
  CHECK(take(out).find("\"segment\":64") != std::string::npos);
}

TEST_CASE("simulate, learn and evaluate") {
  ct_network* net = nullptr;
  REQUIRE(ct_network_load((data_dir + "/chain11.json").c_str(), &net) == CT_OK);
  ct_dataset* ds = nullptr;
  REQUIRE(ct_simulate(net, 4000, 1000, 7, 0, &ds) == CT_OK);
  CHECK(ct_dataset_node_count(ds) == 11);
  CHECK(ct_dataset_sample_count(ds) == 4000);
  CHECK(ct_dataset_node_id(ds, 0) == 1);
  int period = 0;
  REQUIRE(ct_detect_period(ds, 0, 8, 10.0, &period) == CT_OK);
  CHECK(period == 1);
  CHECK(ct_detect_period(ds, 99, 8, 10.0, &period) == CT_ERR_INPUT);

  std::vector<double> re(4000), im(4000);
  REQUIRE(ct_dataset_copy_node(ds, 1, re.data(), im.data()) == CT_OK);
  ct_dataset* copy = nullptr;
  int id = 5;
  REQUIRE(ct_dataset_create(1, 4000, &id, re.data(), im.data(), &copy) == CT_OK);
  CHECK(ct_dataset_node_id(copy, 0) == 5);
  ct_dataset_free(copy);

  ct_result* r = nullptr;
  REQUIRE(ct_learn_oracle(net, nullptr, &r) == CT_OK);
  char* json = nullptr;
  REQUIRE(ct_result_json(r, &json) == CT_OK);
  std::string doc = take(json);
  char* metrics = nullptr;
  REQUIRE(ct_eval(doc.c_str(), net, &metrics) == CT_OK);
  CHECK(take(metrics).find("\"exact_match\": true") != std::string::npos);
  char* dot = nullptr;
  REQUIRE(ct_result_dot(r, "topology", &dot) == CT_OK);
  CHECK(take(dot).rfind("graph", 0) == 0);
  CHECK(ct_result_dot(r, "final", &dot) == CT_ERR_INPUT);
  char* csv = nullptr;
  REQUIRE(ct_result_diagnostics_csv(r, &csv) == CT_OK);
  CHECK(take(csv).find("j,i,block_norm") != std::string::npos);
  ct_result_free(r);

  int drop[] = {10, 11};
  REQUIRE(ct_dataset_drop_nodes(ds, drop, 2) == CT_OK);
  CHECK(ct_dataset_node_count(ds) == 9);
  ct_dataset_free(ds);
  ct_network_free(net);
}

TEST_CASE("latent learner structure errors") {
  ct_network* net = nullptr;
  REQUIRE(ct_network_parse(R"({"nodes":[{"id":1},{"id":2},{"id":3}],
    "edges":[{"from":1,"to":2,"numerator":[0.2]},{"from":2,"to":1,"numerator":[0.2]},
             {"from":2,"to":3,"numerator":[0.2]},{"from":3,"to":2,"numerator":[0.2]},
             {"from":1,"to":3,"numerator":[0.2]},{"from":3,"to":1,"numerator":[0.2]}]})",
                           &net) == CT_OK);
  ct_result* r = nullptr;
  CHECK(ct_learn_latent_oracle(net, nullptr, &r) == CT_ERR_STRUCTURE);
  CHECK(r == nullptr);
  CHECK(std::string(ct_last_error()).find("non-leaf") != std::string::npos);
  ct_network_free(net);
}
