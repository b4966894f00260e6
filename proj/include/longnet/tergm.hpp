#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "longnet/network.hpp"
#include "longnet/parallel.hpp"
#include "longnet/rng.hpp"
#include "longnet/statistics.hpp"

namespace longnet::tergm {

/// Coefficients are log-odds contributions per unit of each statistic.
struct TergmModel {
  std::vector<StatisticSpec> statistics;
  std::vector<double> theta;
  int lag_depth = 1;

  /// Throws ConfigError unless |theta| == |statistics| > 0 and lag_depth == 1.
  void validate() const;
  bool has_memory_terms() const;
};

/// Change-statistic design of the pseudolikelihood: one row per modeled wave
/// and ordered dyad, rows grouped by wave.
struct MpleDesign {
  std::size_t columns = 0;
  std::vector<double> x;                 ///< rows x columns, row-major
  std::vector<std::uint8_t> y;           ///< observed tie state
  std::vector<std::size_t> wave_offset;  ///< first row of each modeled wave, plus end

  std::size_t rows() const noexcept { return y.size(); }
  std::size_t waves() const noexcept { return wave_offset.empty() ? 0 : wave_offset.size() - 1; }
};

/// Builds rows for waves lag_depth..T-1 of the panel. The parallel path splits
/// over (wave, sender) blocks; the serial path is the reference.
MpleDesign build_mple_design(const NetworkPanel& panel, const TermSet& terms, int lag_depth,
                             Execution exec = Execution::parallel);

struct NewtonOptions {
  double gradient_tolerance = 1e-8;
  int max_iterations = 100;
};

struct LogitResult {
  std::vector<double> theta;
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
};

/// Maximizes the wave-weighted logistic log-likelihood by damped Newton steps.
/// Throws SeparationError when a column strictly separates the responses and
/// ConvergenceError when the iteration limit is reached.
LogitResult fit_logit(const MpleDesign& design, std::span<const double> wave_weights,
                      const std::vector<std::string>& column_names,
                      const NewtonOptions& options = {});

struct TergmFit {
  TergmModel model;
  std::vector<std::vector<double>> bootstrap_replicates;
  std::vector<std::pair<double, double>> confidence_intervals;
  std::vector<double> bootstrap_se;
  double confidence_level = 0.95;
  std::size_t n_obs = 0;
  std::size_t modeled_waves = 0;
  std::size_t bootstrap_failures = 0;
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
};

struct MpleOptions {
  std::size_t bootstrap_count = 200;
  double confidence_level = 0.95;
  std::uint64_t seed = 1;
  NewtonOptions newton;
  Execution exec = Execution::parallel;
};

/// Maximum pseudolikelihood fit with a temporal block bootstrap: each replicate
/// resamples the modeled waves with replacement and refits. Intervals are
/// bootstrap percentile intervals. Replicates that fail to fit are dropped and
/// counted in bootstrap_failures.
TergmFit fit_mple(const NetworkPanel& panel, const std::vector<StatisticSpec>& specs,
                  const MpleOptions& options = {});

/// Single-dyad-toggle Metropolis-Hastings chain on the (T)ERGM conditional
/// distribution given an optional previous wave.
class ErgmSampler {
 public:
  ErgmSampler(const TergmModel& model, const Covariates& covariates,
              const DirectedNetwork* previous, DirectedNetwork start, std::uint64_t seed);

  /// One proposal; returns whether it was accepted.
  bool step();
  const DirectedNetwork& state() const noexcept { return state_; }

 private:
  TermSet terms_;
  std::vector<double> theta_;
  const DirectedNetwork* previous_;
  DirectedNetwork state_;
  Rng rng_;
  std::vector<double> delta_;
};

struct SamplerOptions {
  std::optional<std::size_t> burn_in;   ///< default 10 n^2
  std::optional<std::size_t> thinning;  ///< default n^2
  std::size_t draw_count = 1;
  std::uint64_t seed = 1;
};

struct SimulationResult {
  std::vector<DirectedNetwork> draws;
  std::size_t steps = 0;
  std::size_t accepted = 0;
  /// Post-burn-in fraction of steps spent at density < 0.01 or > 0.99.
  double extreme_fraction = 0.0;
  bool degeneracy_warning = false;
};

/// Runs one chain and records draw_count states, one every `thinning` steps
/// after burn-in. The chain starts from the last conditioning wave when one is
/// given, otherwise from the empty network. Throws ConfigError when memory terms
/// are present without conditioning waves.
SimulationResult simulate(const TergmModel& model, std::span<const DirectedNetwork> conditioning,
                          const Covariates& covariates, std::size_t n,
                          const SamplerOptions& options);

struct ForwardResult {
  std::vector<DirectedNetwork> waves;  ///< initial followed by `steps` simulated waves
  bool degeneracy_warning = false;
};

/// Each step conditions on the previous wave and keeps a single draw.
ForwardResult forward_simulate_panel(const TergmModel& model, const DirectedNetwork& initial,
                                     std::size_t steps, const Covariates& covariates,
                                     const SamplerOptions& per_step);

}  // namespace longnet::tergm
