#include <doctest.h>

#include <cmath>

#include "longnet/error.hpp"
#include "longnet/numeric.hpp"
#include "longnet/tergm.hpp"
#include "support/oracles.hpp"

using namespace longnet;
using namespace longnet::tergm;

namespace {

StatisticSpec S(StatKind k) { return StatisticSpec::of(k); }

DirectedNetwork with_edges(std::size_t n, std::size_t count, Rng& rng) {
  DirectedNetwork net(n);
  while (net.edge_count() < count) {
    const std::size_t i = rng.below(n), j = rng.below(n);
    if (i != j) net.set_tie(i, j, true);
  }
  return net;
}

SamplerOptions sampler(std::size_t draws, std::uint64_t seed) {
  SamplerOptions o;
  o.draw_count = draws;
  o.seed = seed;
  return o;
}

NetworkPanel random_panel(std::uint64_t seed, std::size_t n, std::size_t T) {
  Rng rng(seed);
  std::vector<DirectedNetwork> waves{oracle::random_network(rng, n, 0.2)};
  for (std::size_t t = 1; t < T; ++t) {
    DirectedNetwork next = waves.back();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && rng.uniform() < 0.2) next.toggle(i, j);
    waves.push_back(next);
  }
  return NetworkPanel(waves);
}

}  // namespace

TEST_CASE("model validation") {
  CHECK_THROWS_AS((TergmModel{{}, {}}.validate()), ConfigError);
  CHECK_THROWS_AS((TergmModel{{S(StatKind::edges)}, {1, 2}}.validate()), ConfigError);
  TergmModel m{{S(StatKind::edges)}, {0.0}};
  m.lag_depth = 2;
  CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("edges-only MPLE recovers the pooled log-odds") {
  Rng rng(1);
  std::vector<DirectedNetwork> waves{DirectedNetwork(5), with_edges(5, 5, rng), with_edges(5, 5, rng),
                                     with_edges(5, 5, rng)};
  MpleOptions o;
  o.bootstrap_count = 20;
  const auto fit = fit_mple(NetworkPanel(waves), {S(StatKind::edges)}, o);
  CHECK(fit.model.theta[0] == doctest::Approx(std::log(0.25 / 0.75)).epsilon(1e-9));
  CHECK(fit.n_obs == 60);
  CHECK(fit.modeled_waves == 3);
}

TEST_CASE("perfect persistence separates the stability term") {
  Rng rng(2);
  const auto w = oracle::random_network(rng, 6, 0.3);
  NetworkPanel p({w, w, w});
  try {
    fit_mple(p, {S(StatKind::edges), S(StatKind::memory_stability)});
    FAIL("expected a separation error");
  } catch (const SeparationError& e) {
    CHECK(std::string(e.what()).find("memory_stability") != std::string::npos);
  }
}

TEST_CASE("MPLE fit invariants") {
  const auto panel = random_panel(3, 10, 4);
  const std::vector<StatisticSpec> specs{S(StatKind::edges), S(StatKind::reciprocity),
                                         S(StatKind::memory_stability)};
  MpleOptions o;
  o.bootstrap_count = 40;
  const auto fit = fit_mple(panel, specs, o);
  CHECK(fit.gradient_norm < 1e-6);
  REQUIRE(fit.bootstrap_replicates.size() + fit.bootstrap_failures == 40);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    double lo = 1e300, hi = -1e300;
    for (const auto& r : fit.bootstrap_replicates) lo = std::min(lo, r[k]), hi = std::max(hi, r[k]);
    CHECK(fit.model.theta[k] >= lo);
    CHECK(fit.model.theta[k] <= hi);
    CHECK(fit.confidence_intervals[k].first <= fit.confidence_intervals[k].second);
  }
  CHECK(fit.n_obs == 3 * 90);
}

TEST_CASE("design and bootstrap agree between serial and parallel paths") {
  const auto panel = random_panel(4, 12, 5);
  const std::vector<StatisticSpec> specs{S(StatKind::edges), S(StatKind::transitive_triplets),
                                         S(StatKind::delayed_reciprocity)};
  TermSet terms(specs, {}, 12);
  const auto a = build_mple_design(panel, terms, 1, Execution::serial);
  const auto b = build_mple_design(panel, terms, 1, Execution::parallel);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.wave_offset == b.wave_offset);

  MpleOptions o;
  o.bootstrap_count = 30;
  o.exec = Execution::serial;
  const auto fs = fit_mple(panel, specs, o);
  o.exec = Execution::parallel;
  const auto fp = fit_mple(panel, specs, o);
  CHECK(fs.model.theta == fp.model.theta);
  CHECK(fs.bootstrap_replicates == fp.bootstrap_replicates);
  CHECK(fs.confidence_intervals == fp.confidence_intervals);
}

TEST_CASE("Newton log-likelihood never decreases") {
  const auto panel = random_panel(5, 10, 4);
  TermSet terms({S(StatKind::edges), S(StatKind::reciprocity)}, {}, 10);
  const auto design = build_mple_design(panel, terms, 1);
  std::vector<double> w(design.waves(), 1.0);
  double prev = -1e300;
  for (int it = 1; it <= 8; ++it) {
    NewtonOptions o;
    o.max_iterations = it;
    o.gradient_tolerance = 1e-300;
    try {
      const auto r = fit_logit(design, w, {"edges", "reciprocity"}, o);
      CHECK(r.log_likelihood >= prev - 1e-12);
      prev = r.log_likelihood;
    } catch (const ConvergenceError& e) {
      const auto& th = e.last_iterate();
      double ll = 0;
      for (std::size_t r = 0; r < design.rows(); ++r) {
        const double eta = th[0] * design.x[2 * r] + th[1] * design.x[2 * r + 1];
        ll += design.y[r] * eta - std::log1p(std::exp(eta));
      }
      CHECK(ll >= prev - 1e-9);
      prev = ll;
    }
  }
}

TEST_CASE("sampler densities match independent-dyad closed forms") {
  const std::size_t n = 20;
  auto mean_density = [&](double edges) {
    TergmModel m{{S(StatKind::edges)}, {edges}};
    const auto sim = simulate(m, {}, {}, n, sampler(200, 17));
    std::vector<double> d;
    for (const auto& net : sim.draws) d.push_back(density(net));
    return mean(d);
  };
  CHECK(std::abs(mean_density(0.0) - 0.5) <= 0.02);
  CHECK(std::abs(mean_density(-2.1972) - 0.10) <= 0.02);
}

TEST_CASE("positive reciprocity raises the mutual-dyad count above independence") {
  const std::size_t n = 20;
  TergmModel m{{S(StatKind::edges), S(StatKind::reciprocity)}, {-1.0, 3.0}};
  const auto sim = simulate(m, {}, {}, n, sampler(100, 5));
  std::vector<double> mutual, dens;
  auto mutual_count = [](const DirectedNetwork& net) {
    double c = 0;
    for (std::size_t i = 0; i < net.size(); ++i)
      for (std::size_t j = i + 1; j < net.size(); ++j) c += net.tie(i, j) && net.tie(j, i);
    return c;
  };
  for (const auto& net : sim.draws) mutual.push_back(mutual_count(net)), dens.push_back(density(net));
  const double p = mean(dens);
  Rng rng(99);
  std::vector<double> baseline;
  for (int s = 0; s < 10000; ++s) baseline.push_back(mutual_count(oracle::random_network(rng, n, p)));
  const double se = std::sqrt(variance(baseline) / static_cast<double>(mutual.size()));
  CHECK(mean(mutual) > mean(baseline) + 3.0 * se);
}

TEST_CASE("memory terms need conditioning waves") {
  TergmModel m{{S(StatKind::edges), S(StatKind::memory_stability)}, {0.0, 1.0}};
  CHECK_THROWS_AS(simulate(m, {}, {}, 5, sampler(1, 1)), ConfigError);
}

TEST_CASE("seeded simulation is reproducible") {
  TergmModel m{{S(StatKind::edges), S(StatKind::transitive_triplets)}, {-1.0, 0.1}};
  const auto a = simulate(m, {}, {}, 12, sampler(5, 3));
  const auto b = simulate(m, {}, {}, 12, sampler(5, 3));
  const auto c = simulate(m, {}, {}, 12, sampler(5, 4));
  CHECK(a.draws == b.draws);
  CHECK_FALSE(a.draws == c.draws);
}

TEST_CASE("sampler matches the enumerated distribution for n = 3") {
  const auto exact = oracle::ergm_enumeration(3, -0.5, 1.0);
  TergmModel m{{S(StatKind::edges), S(StatKind::reciprocity)}, {-0.5, 1.0}};
  ErgmSampler chain(m, {}, nullptr, DirectedNetwork(3), 8);
  for (int s = 0; s < 1000; ++s) chain.step();
  std::vector<double> freq(exact.size(), 0.0);
  const int steps = 300000;
  for (int s = 0; s < steps; ++s) {
    chain.step();
    freq[oracle::network_index(chain.state())] += 1.0 / steps;
  }
  double tv = 0;
  for (std::size_t k = 0; k < exact.size(); ++k) tv += 0.5 * std::abs(freq[k] - exact[k]);
  CHECK(tv < 0.03);
}

TEST_CASE("forward simulation with dominant stability keeps waves fixed") {
  TergmModel m{{S(StatKind::edges), S(StatKind::memory_stability)}, {0.0, 10.0}};
  Rng rng(1);
  int identical = 0;
  const int runs = 40;
  for (int r = 0; r < runs; ++r) {
    const auto init = oracle::random_network(rng, 20, 0.3);
    const auto fw = forward_simulate_panel(m, init, 1, {}, sampler(1, 100 + r));
    identical += hamming_distance(fw.waves[0], fw.waves[1]) == 0;
  }
  CHECK(identical >= 0.95 * runs);
}

TEST_CASE("forward simulation with zero coefficients is memoryless") {
  TergmModel m{{S(StatKind::edges), S(StatKind::memory_stability)}, {0.0, 0.0}};
  Rng rng(2);
  const auto fw = forward_simulate_panel(m, oracle::random_network(rng, 20, 0.5), 20, {}, sampler(1, 9));
  CHECK(fw.waves.size() == 21);
  std::vector<double> jac;
  for (std::size_t t = 1; t < fw.waves.size(); ++t) {
    double inter = 0, uni = 0;
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 20; ++j) {
        const bool a = fw.waves[t - 1].tie(i, j), b = fw.waves[t].tie(i, j);
        inter += a && b;
        uni += a || b;
      }
    jac.push_back(inter / uni);
  }
  CHECK(std::abs(mean(jac) - 1.0 / 3.0) <= 0.05);
}

TEST_CASE("forward panel shape") {
  TergmModel m{{S(StatKind::edges), S(StatKind::memory_stability)}, {-1.0, 1.0}};
  const auto fw = forward_simulate_panel(m, DirectedNetwork(20), 5, {}, sampler(1, 1));
  CHECK(fw.waves.size() == 6);
  for (const auto& w : fw.waves) CHECK(w.size() == 20);
}
