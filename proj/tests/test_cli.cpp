#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "longnet/io.hpp"
#include "longnet/version.hpp"
#include "support/oracles.hpp"

using namespace longnet;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("longnet_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)), {});
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

/// Waves drift slowly from a random start.
fs::path drifting_panel(const fs::path& dir, std::size_t waves, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DirectedNetwork> ws{oracle::random_network(rng, 10, 0.3)};
  for (std::size_t t = 1; t < waves; ++t) {
    auto next = ws.back();
    for (int k = 0; k < 8; ++k) {
      const auto i = rng.below(10), j = rng.below(10);
      if (i != j) next.toggle(i, j);
    }
    ws.push_back(next);
  }
  return io::write_panel(NetworkPanel(ws), dir);
}

}  // namespace

TEST_CASE("help documents every subcommand") {
  const auto r = run({"--help"});
  CHECK(r.code == cli::kExitOk);
  for (const char* sub : {"simulate-dgp", "fit", "predict", "gof", "compare", "experiment", "replicate-knecht"})
    CHECK(r.out.find(sub) != std::string::npos);
  CHECK(r.out.find("LONGNET_OUT") != std::string::npos);
  CHECK(run({"fit", "--help"}).out.find("--derivative") != std::string::npos);
  CHECK(run({"frobnicate"}).code == cli::kExitConfig);
  CHECK(run({}).code == cli::kExitConfig);
}

TEST_CASE("fit reports") {
  const auto dir = scratch("fit");
  const auto panel3 = drifting_panel(dir / "p3", 3, 1);
  write(dir / "terms.json", R"([{"kind": "edges"}, {"kind": "reciprocity"}, {"kind": "memory_stability"}])");
  auto r = run({"-o", (dir / "t").string(), "fit", "--model", "tergm", "--panel", panel3.string(), "--terms",
                (dir / "terms.json").string(), "--bootstrap", "20"});
  REQUIRE(r.code == cli::kExitOk);
  const auto tj = io::read_json(dir / "t" / "fit.json");
  CHECK(tj["fit"]["theta"].size() == 3);
  CHECK(tj["fit"]["confidence_intervals"].size() == 3);
  CHECK(tj["version"] == std::string(kVersion));
  CHECK(tj["seed"] == 1);
  CHECK(fs::exists(dir / "t" / "coefficients.txt"));

  const auto panel2 = drifting_panel(dir / "p2", 2, 2);
  write(dir / "sterms.json", R"({"terms": [{"kind": "edges"}, {"kind": "reciprocity"}]})");
  r = run({"-o", (dir / "s").string(), "fit", "--model", "saom", "--panel", panel2.string(), "--terms",
           (dir / "sterms.json").string(), "--phase3", "100", "--max-runs", "1"});
  REQUIRE(r.code == cli::kExitOk);
  const auto sj = io::read_json(dir / "s" / "fit.json");
  CHECK(sj["fit"]["rates"].size() == 1);
  CHECK(sj["fit"]["beta"].size() == 2);

  write(dir / "bad.json", R"([{"kind": "triangles"}])");
  r = run({"-o", (dir / "b").string(), "fit", "--model", "tergm", "--panel", panel3.string(), "--terms",
           (dir / "bad.json").string()});
  CHECK(r.code == cli::kExitConfig);
  CHECK(fs::exists(dir / "b" / "error.json"));
}

TEST_CASE("malformed adjacency CSV exits 2 naming the row") {
  const auto dir = scratch("csv");
  write(dir / "w1.csv", "0,1,0\n0,0,1\n1,0,0\n");
  write(dir / "w2.csv", "0,1,0\n0,0\n1,0,0\n");
  write(dir / "manifest.json", R"({"waves": ["w1.csv", "w2.csv"]})");
  write(dir / "terms.json", R"([{"kind": "edges"}])");
  const auto r = run({"-o", (dir / "o").string(), "fit", "--model", "tergm", "--panel",
                      (dir / "manifest.json").string(), "--terms", (dir / "terms.json").string()});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("row 2") != std::string::npos);
}

TEST_CASE("numerical failures exit 3") {
  const auto dir = scratch("sep");
  DirectedNetwork a(4), b(4);
  a.set_tie(0, 1, true);
  b.set_tie(0, 1, true);
  const auto manifest = io::write_panel(NetworkPanel({a, b, b}), dir / "p");
  write(dir / "terms.json", R"([{"kind": "edges"}, {"kind": "memory_stability"}])");
  const auto r = run({"-o", (dir / "o").string(), "fit", "--model", "tergm", "--panel", manifest.string(),
                      "--terms", (dir / "terms.json").string(), "--bootstrap", "5"});
  CHECK(r.code == cli::kExitNumerical);
  CHECK(io::read_json(dir / "o" / "error.json")["error"]["kind"] == "numerical");
}

TEST_CASE("prediction with a persistent fixture") {
  const auto dir = scratch("predict");
  Rng rng(6);
  const auto w = oracle::random_network(rng, 8, 0.3);
  const auto manifest = io::write_panel(NetworkPanel({w, w, w}), dir / "p");
  write(dir / "fit.json", R"({"model": "tergm", "statistics": [{"kind": "edges"}, {"kind": "memory_stability"}],
                              "theta": [-1.0, 12.0], "lag_depth": 1})");
  auto r = run({"-o", (dir / "o").string(), "predict", "--fit", (dir / "fit.json").string(), "--panel",
                manifest.string(), "--draws", "20"});
  REQUIRE(r.code == cli::kExitOk);
  const auto pj = io::read_json(dir / "o" / "prediction.json");
  CHECK(pj["evaluation"]["roc"]["auc"].get<double>() == doctest::Approx(1.0));
  CHECK(pj["evaluation"]["gof"].size() == 5);
  CHECK(fs::exists(dir / "o" / "roc.svg"));
  CHECK(fs::exists(dir / "o" / "ensemble" / "draw_0020.csv"));
  CHECK(fs::exists(dir / "o" / "tie_probabilities.csv"));

  r = run({"-o", (dir / "o2").string(), "predict", "--fit", (dir / "fit.json").string(), "--panel",
           manifest.string(), "--draws", "20"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(slurp(dir / "o" / "prediction.json") == slurp(dir / "o2" / "prediction.json"));
  CHECK(slurp(dir / "o" / "ensemble" / "draw_0007.csv") == slurp(dir / "o2" / "ensemble" / "draw_0007.csv"));

  r = run({"-o", (dir / "z").string(), "predict", "--fit", (dir / "fit.json").string(), "--panel",
           manifest.string(), "--draws", "0"});
  CHECK(r.code == cli::kExitConfig);

  r = run({"-o", (dir / "g").string(), "gof", "--ensemble", (dir / "o" / "ensemble" / "ensemble.json").string(),
           "--kinds", "indegree,geodesic"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(io::read_json(dir / "g" / "gof.json")["gof"].size() == 2);
  CHECK(fs::exists(dir / "g" / "gof.svg"));

  r = run({"-o", (dir / "c").string(), "compare", "--tergm", (dir / "o" / "ensemble" / "ensemble.json").string(),
           "--saom", (dir / "o2" / "ensemble" / "ensemble.json").string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(io::read_json(dir / "c" / "compare.json")["diff_auc_roc"] == 0.0);
}

TEST_CASE("experiment command") {
  const auto dir = scratch("experiment");
  write(dir / "tiny.json", R"({"process": "saom_process", "replication_count": 2, "vertex_count": 10,
                               "predictive_draws": 3, "tergm_bootstrap_count": 10,
                               "saom_phase3_iterations": 40, "saom_max_runs": 1, "saom_rate": 8})");
  auto r = run({"-o", (dir / "a").string(), "experiment", "--config", (dir / "tiny.json").string()});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = io::read_json(dir / "a" / "experiment.json");
  CHECK(j["replications"].size() == 2);
  CHECK(j["config"]["vertex_count"] == 10);
  CHECK(j["version"] == std::string(kVersion));
  r = run({"-o", (dir / "b").string(), "experiment", "--config", (dir / "tiny.json").string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(slurp(dir / "a" / "experiment.json") == slurp(dir / "b" / "experiment.json"));

  write(dir / "missing.json", R"({"replication_count": 2})");
  r = run({"-o", (dir / "m").string(), "experiment", "--config", (dir / "missing.json").string()});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("process") != std::string::npos);
}

TEST_CASE("simulate-dgp honours LONGNET_OUT") {
  const auto dir = scratch("env");
  ::setenv("LONGNET_OUT", (dir / "env_out").string().c_str(), 1);
  auto r = run({"simulate-dgp", "--process", "tergm_process", "--seed", "3"});
  ::unsetenv("LONGNET_OUT");
  REQUIRE(r.code == cli::kExitOk);
  const auto j = io::read_json(dir / "env_out" / "simulate.json");
  CHECK(j["seed"] == 3);
  CHECK(j["passes_screen"] == true);
  CHECK(io::read_panel_manifest(dir / "env_out" / "panel" / "manifest.json").wave_count() == 5);
}
