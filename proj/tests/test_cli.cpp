#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end checks against the installed binary (path injected by the build).

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(QAS_CLI_PATH) + " " + args + " > cli_stdout.txt 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_count(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += line.empty() ? 0 : 1;
  return n;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream(p) << content;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("cli_test_tmp") / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& file = "") const { return (path / file).string(); }
};

const char* kTinyVqeQas = R"({
  "iterations": 15,
  "supernets": 2,
  "ranking_samples": 10,
  "seed": 5,
  "retrain_epochs": 5
})";

}  // namespace

TEST_CASE("gen-data writes a deterministic CSV") {
  TempDir tmp("gendata");
  CHECK(run("gen-data --seed 11 --n 40 --out " + tmp.str("a.csv")) == 0);
  CHECK(line_count(tmp.path / "a.csv") == 41);  // header + 40 rows
  std::ifstream in(tmp.path / "a.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "x1,x2,x3,label,split");

  CHECK(run("gen-data --seed 11 --n 40 --out " + tmp.str("b.csv")) == 0);
  CHECK(slurp(tmp.path / "a.csv") == slurp(tmp.path / "b.csv"));

  CHECK(run("gen-data --seed 11 --n 0 --out " + tmp.str("c.csv")) != 0);
  CHECK_FALSE(fs::exists(tmp.path / "c.csv"));
}

TEST_CASE("search emits the full artifact set and reproduces numeric outputs") {
  TempDir tmp("search");
  write_file(tmp.path / "config.json",
             std::string(R"({"task": "vqe", "qas": )") + kTinyVqeQas + "}");

  CHECK(run("search --config " + tmp.str("config.json") + " --out " + tmp.str("run1")) == 0);
  for (const char* artifact :
       {"run_record.json", "loss_trajectory.csv", "ranking_hist.csv", "best_architecture.txt",
        "retrain_trajectory.csv", "ensemble.json", "manifest.json"}) {
    CHECK(fs::exists(tmp.path / "run1" / artifact));
  }
  CHECK(line_count(tmp.path / "run1" / "loss_trajectory.csv") == 16);  // header + T

  CHECK(run("search --config " + tmp.str("config.json") + " --out " + tmp.str("run2")) == 0);
  CHECK(slurp(tmp.path / "run1" / "loss_trajectory.csv") ==
        slurp(tmp.path / "run2" / "loss_trajectory.csv"));
  CHECK(slurp(tmp.path / "run1" / "best_architecture.txt") ==
        slurp(tmp.path / "run2" / "best_architecture.txt"));
  CHECK(slurp(tmp.path / "run1" / "ensemble.json") == slurp(tmp.path / "run2" / "ensemble.json"));
}

TEST_CASE("rank and retrain reuse a saved ensemble") {
  TempDir tmp("rank");
  write_file(tmp.path / "config.json",
             std::string(R"({"task": "vqe", "qas": )") + kTinyVqeQas + "}");
  REQUIRE(run("search --config " + tmp.str("config.json") + " --out " + tmp.str("run")) == 0);

  CHECK(run("rank --config " + tmp.str("config.json") + " --ensemble " +
            tmp.str("run/ensemble.json") + " --out " + tmp.str("rank_out")) == 0);
  CHECK(fs::exists(tmp.path / "rank_out" / "ranking.csv"));
  CHECK(line_count(tmp.path / "rank_out" / "ranking.csv") == 11);  // header + K

  const std::string arch = slurp(tmp.path / "run" / "best_architecture.txt");
  const std::string trimmed = arch.substr(0, arch.find_first_of("\r\n"));
  CHECK(run("retrain --config " + tmp.str("config.json") + " --ensemble " +
            tmp.str("run/ensemble.json") + " --arch '" + trimmed + "' --out " +
            tmp.str("retrain_out")) == 0);
  CHECK(fs::exists(tmp.path / "retrain_out" / "retrain_trajectory.csv"));
}

TEST_CASE("schema violations exit with code 2") {
  TempDir tmp("schema");
  SUBCASE("unknown top-level key") {
    write_file(tmp.path / "bad.json", R"({"task": "vqe", "tasc": 1})");
    CHECK(run("search --config " + tmp.str("bad.json")) == 2);
  }
  SUBCASE("unknown qas key") {
    write_file(tmp.path / "bad.json", R"({"task": "vqe", "qas": {"iteratons": 5}})");
    CHECK(run("search --config " + tmp.str("bad.json")) == 2);
  }
  SUBCASE("bad task name") {
    write_file(tmp.path / "bad.json", R"({"task": "qaoa"})");
    CHECK(run("search --config " + tmp.str("bad.json")) == 2);
  }
  SUBCASE("malformed JSON") {
    write_file(tmp.path / "bad.json", "{not json");
    CHECK(run("search --config " + tmp.str("bad.json")) == 2);
  }
  SUBCASE("space/task qubit mismatch") {
    write_file(tmp.path / "bad.json",
               R"({"task": "vqe", "space": {"n_qubits": 3, "n_layers": 2,
                   "pool": ["RY"], "pairs": [[0,1]]}})");
    CHECK(run("search --config " + tmp.str("bad.json")) == 2);
  }
  SUBCASE("missing ensemble for correlate") {
    write_file(tmp.path / "ok.json", R"({"task": "vqe"})");
    CHECK(run("correlate --config " + tmp.str("ok.json") + " --ensemble " +
              tmp.str("nope.json")) == 2);
  }
}

TEST_CASE("vqe-exact prints the hydrogen ground energy") {
  TempDir tmp("vqeexact");
  CHECK(run("vqe-exact") == 0);
  const double e = std::stod(slurp("cli_stdout.txt"));
  CHECK(e == doctest::Approx(-1.136).epsilon(0.009));
}

TEST_CASE("barren sweep emits one CSV row per depth") {
  TempDir tmp("barren");
  write_file(tmp.path / "config.json",
             R"({"task": "vqe",
                 "diagnostics": {"barren": {"depths": [2,3,4,5,6,7], "samples": 10}}})");
  CHECK(run("barren --config " + tmp.str("config.json") + " --out " + tmp.str("out")) == 0);
  CHECK(line_count(tmp.path / "out" / "barren_sweep.csv") == 7);  // header + 6 depths
}

TEST_CASE("correlate quick mode populates the correlation fields") {
  TempDir tmp("corr");
  write_file(tmp.path / "config.json",
             std::string(R"({"task": "classify", "dataset": {"n": 30, "seed": 3},
                 "diagnostics": {"correlation": {"n_subnets": 6, "independent_epochs": 2}},
                 "qas": )") +
                 kTinyVqeQas + "}");
  REQUIRE(run("search --config " + tmp.str("config.json") + " --out " + tmp.str("run")) == 0);
  CHECK(run("correlate --config " + tmp.str("config.json") + " --ensemble " +
            tmp.str("run/ensemble.json") + " --out " + tmp.str("out")) == 0);
  CHECK(fs::exists(tmp.path / "out" / "correlation.csv"));
  const std::string out = slurp("cli_stdout.txt");
  CHECK(out.find("rho_S=") != std::string::npos);
  CHECK(out.find("rho_K=") != std::string::npos);
  CHECK(line_count(tmp.path / "out" / "correlation.csv") == 7);  // header + 6 subnets
}
