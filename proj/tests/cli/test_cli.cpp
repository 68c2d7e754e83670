#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string cli = CYCLOTOPO_CLI;
const std::string data_dir = CYCLOTOPO_DATA_DIR;

int run(const std::string& args) {
  std::string cmd = cli + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cyclotopo_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("simulate is deterministic") {
  TempDir tmp;
  std::string spec = data_dir + "/chain11.json";
  REQUIRE(run("simulate --spec " + spec + " -N 3000 --seed 4 -o " + (tmp / "a.csv")) == 0);
  REQUIRE(run("simulate --spec " + spec + " -N 3000 --seed 4 -o " + (tmp / "b.csv")) == 0);
  REQUIRE(run("simulate --spec " + spec + " -N 3000 --seed 5 -o " + (tmp / "c.csv")) == 0);
  CHECK(slurp(tmp / "a.csv") == slurp(tmp / "b.csv"));
  CHECK(slurp(tmp / "a.csv") != slurp(tmp / "c.csv"));
  CHECK(slurp(tmp / "a.csv").rfind("# spec ", 0) == 0);
  REQUIRE(run("simulate --spec " + spec + " -N 3000 --seed 4 -o " + (tmp / "a.bin")) == 0);
  CHECK(slurp(tmp / "a.bin").substr(0, 4) == "CYG1");
}

TEST_CASE("learn writes every stage") {
  TempDir tmp;
  std::string spec = data_dir + "/chain11.json";
  REQUIRE(run("simulate --spec " + spec + " -N 20000 --seed 2 -o " + (tmp / "x.csv")) == 0);
  REQUIRE(run("learn " + (tmp / "x.csv") + " -o " + (tmp / "out1")) == 0);
  REQUIRE(run("learn " + (tmp / "x.csv") + " -o " + (tmp / "out2")) == 0);
  for (const char* f : {"result.json", "config.json", "moral.json", "moral.dot", "topology.json", "topology.dot",
                        "diagnostics.csv", "spectral.csv"}) {
    CHECK_MESSAGE(fs::exists(tmp.path / "out1" / f), f);
    CHECK(slurp(tmp.path / "out1" / f) == slurp(tmp.path / "out2" / f));
  }
  auto config = nlohmann::json::parse(slurp(tmp.path / "out1" / "config.json"));
  CHECK(config["segment"] == 32);
  CHECK(slurp(tmp.path / "out1" / "topology.dot").rfind("// config", 0) == 0);

  REQUIRE(run("eval " + (tmp / "out1/result.json") + " --truth " + spec + " -o " + (tmp / "m.json")) == 0);
  auto m = nlohmann::json::parse(slurp(tmp / "m.json"));
  CHECK(m.contains("f1"));
}

TEST_CASE("flags override the config file") {
  TempDir tmp;
  {
    std::ofstream(tmp / "c.json") << R"({"segment": 64, "rho": 0.5})";
  }
  REQUIRE(run("learn --oracle --spec " + data_dir + "/chain11.json --config " + (tmp / "c.json") +
              " --rho 1e-6 --flatness-tol 1e-6 -o " + (tmp / "o")) == 0);
  auto config = nlohmann::json::parse(slurp(tmp.path / "o" / "config.json"));
  CHECK(config["segment"] == 64);
  CHECK(config["rho"] == 1e-6);
}

TEST_CASE("latent oracle and sweep") {
  TempDir tmp;
  std::string spec = data_dir + "/chain11_latent.json";
  REQUIRE(run("learn-latent --oracle --spec " + spec + " -o " + (tmp / "lat")) == 0);
  for (const char* f : {"gc.json", "observed_topology.json", "final.json", "final.dot"})
    CHECK_MESSAGE(fs::exists(tmp.path / "lat" / f), f);
  REQUIRE(run("eval " + (tmp / "lat/final.json") + " --truth " + spec + " -o " + (tmp / "m.json")) == 0);
  CHECK(nlohmann::json::parse(slurp(tmp / "m.json"))["exact_match"] == true);

  REQUIRE(run("sweep --spec " + data_dir + "/chain11.json -N 2000,4000 --seeds 1,2 -o " + (tmp / "s.csv")) == 0);
  std::istringstream rows(slurp(tmp / "s.csv"));
  std::string line;
  int count = 0;
  bool header = false;
  while (std::getline(rows, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      CHECK(line.rfind("samples,seed,precision", 0) == 0);
      header = true;
      continue;
    }
    ++count;
    CHECK(line.find(",0,0,0,") == std::string::npos);
  }
  CHECK(count == 4);
}

TEST_CASE("oracle dump") {
  TempDir tmp;
  REQUIRE(run("oracle-dump --spec " + data_dir + "/chain11_latent.json --latent -o " + (tmp / "d.csv")) == 0);
  std::string d = slurp(tmp / "d.csv");
  CHECK(d.find("omega,i,j,p,t,re,im") != std::string::npos);
  CHECK(d.find(",10,") == std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(run("") != 0);
  CHECK(run("learn") == 2);
  CHECK(run("learn /nonexistent.csv") == 2);
  CHECK(run("simulate --spec /nonexistent.json -N 10") == 2);
  {
    std::ofstream(tmp / "bad.json") << "{";
  }
  CHECK(run("oracle-dump --spec " + (tmp / "bad.json")) == 2);
  {
    std::ofstream(tmp / "unstable.json")
        << R"({"nodes":[{"id":1},{"id":2}],"edges":[{"from":1,"to":2,"numerator":[0,1.2]},{"from":2,"to":1,"numerator":[0,1.2]}]})";
  }
  CHECK(run("simulate --spec " + (tmp / "unstable.json") + " -N 5000 --burn-in 2000 -o " + (tmp / "u.csv")) == 3);
  {
    std::ofstream(tmp / "tri.json")
        << R"({"nodes":[{"id":1},{"id":2},{"id":3}],"edges":[{"from":1,"to":2,"numerator":[0.2]},{"from":2,"to":1,"numerator":[0.2]},{"from":2,"to":3,"numerator":[0.2]},{"from":3,"to":2,"numerator":[0.2]},{"from":1,"to":3,"numerator":[0.2]},{"from":3,"to":1,"numerator":[0.2]}]})";
  }
  CHECK(run("learn-latent --oracle --spec " + (tmp / "tri.json")) == 3);
}
