#include <doctest.h>

#include <cmath>
#include <string>

#include "longnet/error.hpp"
#include "longnet/saom.hpp"

using namespace longnet;

TEST_CASE("method of moments recovers rate-40 simulated panels") {
  const std::vector<StatisticSpec> specs{StatisticSpec::of(StatKind::edges),
                                         StatisticSpec::of(StatKind::reciprocity),
                                         StatisticSpec::of(StatKind::transitive_triplets)};
  const std::vector<double> truth{-1.5, 1.0, 0.3};
  const saom::SaomModel model{specs, truth, std::vector<double>(6, 40.0)};
  const int reps = 30;
  int covered = 0, failures = 0;
  for (int r = 0; r < reps; ++r) {
    const auto waves = saom::simulate_panel(model, DirectedNetwork(20), {}, derive_seed(40, r, 0));
    saom::MomOptions o;
    o.seed = derive_seed(40, r, 1);
    try {
      const auto fit = saom::fit_mom(NetworkPanel(waves), specs, o);
      bool all = true;
      for (std::size_t k = 0; k < 3; ++k) all &= std::abs(fit.model.beta[k] - truth[k]) <= 3.0 * fit.se_beta[k];
      covered += all;
    } catch (const Error& e) {
      ++failures;
      MESSAGE("replication " << r << ": " << std::string(e.what()));
    }
  }
  MESSAGE("covered " << covered << "/" << reps << ", failures " << failures);
  CHECK(covered >= 0.9 * reps);
}
