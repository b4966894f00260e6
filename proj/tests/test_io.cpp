#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "longnet/error.hpp"
#include "longnet/io.hpp"
#include "support/oracles.hpp"

using namespace longnet;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("longnet_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("adjacency CSV parsing") {
  const auto net = io::parse_adjacency_csv("0,1,0\n0,0,1\n1,0,0\n");
  CHECK(net.edge_count() == 3);
  CHECK(net.tie(2, 0));
  CHECK(io::parse_adjacency_csv("0, 1\r\n1 ,0\r\n").edge_count() == 2);

  CHECK_THROWS_WITH_AS(io::parse_adjacency_csv("0,1,0\n0,0\n1,0,0\n"), doctest::Contains("row 2"),
                       InvalidNetwork);
  CHECK_THROWS_WITH_AS(io::parse_adjacency_csv("0,1\n1,x\n"), doctest::Contains("row 2"), InvalidNetwork);
  CHECK_THROWS_WITH_AS(io::parse_adjacency_csv("1,1\n1,0\n"), doctest::Contains("row 1"), InvalidNetwork);
  CHECK_THROWS_AS(io::parse_adjacency_csv("0,1\n1,0\n0,0\n"), InvalidNetwork);
  CHECK_THROWS_AS(io::parse_adjacency_csv("0,1\n1,0\n", {"a"}), InvalidNetwork);
}

TEST_CASE("adjacency CSV round trip") {
  Rng rng(4);
  const auto dir = scratch("csv");
  const auto net = oracle::random_network(rng, 12, 0.3);
  io::write_adjacency_csv(net, dir / "n.csv");
  CHECK(io::read_adjacency_csv(dir / "n.csv") == net);
  CHECK_THROWS_AS(io::read_adjacency_csv(dir / "missing.csv"), ConfigError);
}

TEST_CASE("panel manifest round trip") {
  Rng rng(9);
  const auto dir = scratch("panel");
  std::vector<std::string> labels{"ann", "bo", "cy", "di", "ed"};
  std::vector<DirectedNetwork> waves;
  for (int t = 0; t < 3; ++t) {
    DirectedNetwork w(labels);
    const auto r = oracle::random_network(rng, 5, 0.4);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        if (r.tie(i, j)) w.set_tie(i, j, true);
    waves.push_back(w);
  }
  Covariates covs;
  covs.vertex["sex"] = {1, 2, 1, 1, 2};
  DyadMatrix primary(5);
  primary(0, 1) = primary(1, 0) = 1.0;
  covs.dyad["primary"] = primary;
  const NetworkPanel panel(waves, covs);

  const auto manifest = io::write_panel(panel, dir);
  const auto back = io::read_panel_manifest(manifest);
  REQUIRE(back.wave_count() == 3);
  for (std::size_t t = 0; t < 3; ++t) CHECK(back.wave(t) == panel.wave(t));
  CHECK(back.wave(0).labels() == labels);
  CHECK(back.covariates().vertex.at("sex") == covs.vertex["sex"]);
  CHECK(back.covariates().dyad.at("primary")(1, 0) == 1.0);
  CHECK(back.covariates().dyad.at("primary")(2, 0) == 0.0);

  std::ofstream(dir / "bad.json") << R"({"waves": ["wave_1.csv"]})";
  CHECK_THROWS_AS(io::read_panel_manifest(dir / "bad.json"), ConfigError);
  std::ofstream(dir / "bad2.json") << R"({"wave": []})";
  CHECK_THROWS_AS(io::read_panel_manifest(dir / "bad2.json"), ConfigError);
}

TEST_CASE("term configuration") {
  const auto terms = io::parse_terms(io::json::parse(
      R"({"terms": [{"kind": "edges"}, {"kind": "covariate_match", "covariate": "sex"}, {"kind": "memory_stability"}]})"));
  REQUIRE(terms.size() == 3);
  CHECK(terms[1].label() == "covariate_match(sex)");
  CHECK(terms[2].lag == 1);
  CHECK(io::parse_terms(io::terms_to_json(terms)) == terms);
  CHECK(io::parse_terms(io::json::parse(R"([{"kind": "reciprocity"}])")).size() == 1);

  CHECK_THROWS_AS(io::parse_terms(io::json::parse(R"([{"kind": "triangles"}])")), ConfigError);
  CHECK_THROWS_AS(io::parse_terms(io::json::parse(R"([{"kind": "covariate_match"}])")), ConfigError);
  CHECK_THROWS_AS(io::parse_terms(io::json::parse(R"({"term": []})")), ConfigError);
}

TEST_CASE("JSON output is deterministic") {
  const auto dir = scratch("json");
  const io::json j{{"b", 0.1}, {"a", {1, 2, 3}}};
  io::write_json(j, dir / "x.json");
  io::write_json(io::read_json(dir / "x.json"), dir / "y.json");
  std::ifstream x(dir / "x.json"), y(dir / "y.json");
  const std::string sx((std::istreambuf_iterator<char>(x)), {}), sy((std::istreambuf_iterator<char>(y)), {});
  CHECK(sx == sy);
  CHECK(sx.back() == '\n');
}
