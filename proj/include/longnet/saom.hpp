#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "longnet/network.hpp"
#include "longnet/parallel.hpp"
#include "longnet/rng.hpp"
#include "longnet/statistics.hpp"

namespace longnet::saom {

/// Constant-rate actor-oriented model. `rates` holds one expected number of
/// opportunities per actor for each transition period.
struct SaomModel {
  std::vector<StatisticSpec> statistics;
  std::vector<double> beta;
  std::vector<double> rates;

  void validate() const;
};

struct MiniStep {
  std::size_t actor = 0;
  std::optional<std::size_t> toggled;  ///< alter whose tie was flipped; empty = stay
};

struct MiniStepTrace {
  std::vector<MiniStep> steps;
  DirectedNetwork final_network;
};

/// Evaluates the choice distribution of one actor and executes mini-steps.
/// Holds scratch buffers, so one instance per thread.
class ChoiceModel {
 public:
  ChoiceModel(std::vector<StatisticSpec> statistics, std::vector<double> beta,
              const Covariates& covariates, std::size_t n);

  /// Probabilities over the n alternatives for `actor`: entry a != actor is
  /// "toggle actor->a", entry `actor` is "stay". Softmax of the objective with
  /// max-subtraction.
  std::span<const double> probabilities(const DirectedNetwork& net,
                                        const DirectedNetwork* previous, std::size_t actor);

  /// Samples an alternative for `actor` (returns actor for "stay") without
  /// modifying the network. A non-empty `score` accumulates the gradient of the
  /// log choice probability with respect to beta.
  std::size_t choose(const DirectedNetwork& net, const DirectedNetwork* previous,
                     std::size_t actor, Rng& rng, std::span<double> score = {});

  const TermSet& terms() const noexcept { return terms_; }
  const std::vector<double>& beta() const noexcept { return beta_; }
  void set_beta(std::span<const double> beta);

 private:
  TermSet terms_;
  std::vector<double> beta_;
  std::vector<double> changes_;
  std::vector<double> probs_;
};

/// One mini-step for `actor`: returns the chosen alternative (actor itself = stay).
std::size_t mini_step(const SaomModel& model, const DirectedNetwork& net, std::size_t actor,
                      const DirectedNetwork* previous, const Covariates& covariates, Rng& rng);

/// Smallest k with P(Poisson(mean) <= k) >= u. Monotone in both arguments,
/// which keeps common-random-number couplings tight.
std::uint64_t poisson_quantile(double mean, double u);

/// Random streams of one period simulation. Equal seeds reproduce the same
/// opportunity count uniform, actor sequence and choice uniforms.
struct PeriodStreams {
  explicit PeriodStreams(std::uint64_t seed)
      : count_uniform(Rng(derive_seed(seed, 0)).uniform()), steps(derive_seed(seed, 1)) {}
  double count_uniform;
  Rng steps;
};

/// Runs one period in place: M ~ Poisson(n * rate) opportunities, each given to
/// a uniformly chosen actor. The period's start network is the memory-term
/// reference. Returns the number of opportunities. A non-empty `beta_score`
/// accumulates the beta part of the path score.
std::size_t run_period(ChoiceModel& choice, DirectedNetwork& net, const DirectedNetwork& start,
                       double rate, PeriodStreams& streams, std::vector<MiniStep>* trace = nullptr,
                       std::span<double> beta_score = {});

/// Simulates transition period `period` (0-based index into model.rates).
MiniStepTrace simulate_period(const SaomModel& model, const DirectedNetwork& start,
                              std::size_t period, const Covariates& covariates,
                              std::uint64_t seed);

/// Consecutive periods from `start`; returns the period-end networks.
std::vector<DirectedNetwork> simulate_panel(const SaomModel& model, const DirectedNetwork& start,
                                            const Covariates& covariates, std::uint64_t seed);

/// How the moment derivative matrix D is estimated in phases 1 and 3.
enum class DerivativeMethod {
  /// Finite differences with common random numbers.
  finite_differences,
  /// Covariance of the simulated moments with the score of the simulated path.
  score_function,
};

struct MomOptions {
  DerivativeMethod derivative = DerivativeMethod::score_function;
  std::size_t phase1_iterations = 100;  ///< simulations per phase 1 round
  int phase1_rounds = 5;                ///< derivative estimate + Newton step, first run only
  double initial_gain = 0.2;
  int subphases = 4;
  std::size_t phase3_iterations = 500;
  std::size_t phase3_derivative_iterations = 100;  ///< finite differences only; capped at phase3_iterations
  int max_runs = 6;  ///< phases 1-3 restart from the best estimate so far until max |t| < 0.1
  double diagonalize = 0.0;       ///< weight of diag(D) blended into the beta block of the update matrix
  double max_beta_step = 1.0;     ///< largest |change| of any beta in one update
  double max_rate_step = 0.5;     ///< largest relative change of a rate in one update
  double min_rate = 1e-3;
  double max_rate = 100.0;
  double beta_epsilon = 0.1;      ///< finite-difference step for betas
  double rate_epsilon = 0.05;     ///< relative finite-difference step for rates
  std::uint64_t seed = 1;
  Execution exec = Execution::parallel;
};

struct SaomFit {
  SaomModel model;
  std::vector<double> se_rates;
  std::vector<double> se_beta;
  /// Convergence t-ratios: rates first, then betas.
  std::vector<double> t_ratios;
  double max_abs_t = 0.0;
  bool converged = false;  ///< max |t| < 0.1
  std::vector<std::string> warnings;

  std::vector<std::string> parameter_names;
  std::vector<double> observed;
  std::vector<double> simulated_mean;
  std::vector<double> simulated_sd;
  std::vector<std::vector<double>> derivative;
  std::vector<std::vector<double>> covariance;  ///< of the parameter estimates
  std::size_t phase2_iterations = 0;  ///< summed over runs
  int runs = 0;
};

/// Unconditional method-of-moments fit by three-phase Robbins-Monro stochastic
/// approximation. Moments: the Hamming change of every period (one rate each)
/// and the sum over waves 2..T of each statistic's global value (one beta each).
///
/// Throws DerivativeSingularError if a parameter has no effect on any moment
/// in phase 1. Non-convergence (max |t| >= 0.25) is reported as a warning.
SaomFit fit_mom(const NetworkPanel& panel, const std::vector<StatisticSpec>& specs,
                const MomOptions& options = {});

/// Independent simulations of one period from `last_observed`, using the rate
/// of the final fitted period unless `rate` is given.
std::vector<DirectedNetwork> forward_predict(const SaomModel& model,
                                             const DirectedNetwork& last_observed,
                                             const Covariates& covariates, std::size_t draw_count,
                                             std::uint64_t seed,
                                             std::optional<double> rate = std::nullopt,
                                             Execution exec = Execution::parallel);

}  // namespace longnet::saom
