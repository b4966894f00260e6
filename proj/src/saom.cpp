#include "longnet/saom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "longnet/error.hpp"

namespace longnet::saom {

void SaomModel::validate() const {
  if (statistics.empty()) throw ConfigError("a SAOM needs at least one statistic");
  if (beta.size() != statistics.size())
    throw ConfigError("beta has " + std::to_string(beta.size()) + " entries for " +
                      std::to_string(statistics.size()) + " statistics");
  for (double r : rates)
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("every period rate must be > 0");
  for (const auto& s : statistics) validate_spec(s);
}

ChoiceModel::ChoiceModel(std::vector<StatisticSpec> statistics, std::vector<double> beta,
                         const Covariates& covariates, std::size_t n)
    : terms_(std::move(statistics), covariates, n),
      beta_(std::move(beta)),
      changes_(n * terms_.size()),
      probs_(n) {
  if (beta_.size() != terms_.size()) throw ConfigError("beta/statistics length mismatch");
}

void ChoiceModel::set_beta(std::span<const double> beta) { beta_.assign(beta.begin(), beta.end()); }

std::span<const double> ChoiceModel::probabilities(const DirectedNetwork& net,
                                                   const DirectedNetwork* previous,
                                                   std::size_t actor) {
  const std::size_t n = net.size();
  const std::size_t p = terms_.size();
  terms_.egocentric_changes(net, previous, actor, changes_);
  auto row = net.row(actor);
  double top = 0.0;  // "stay" has objective change 0
  for (std::size_t a = 0; a < n; ++a) {
    if (a == actor) {
      probs_[a] = 0.0;
      continue;
    }
    double f = 0.0;
    const double* c = changes_.data() + a * p;
    for (std::size_t k = 0; k < p; ++k) f += beta_[k] * c[k];
    probs_[a] = row[a] ? -f : f;
    top = std::max(top, probs_[a]);
  }
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    probs_[a] = std::exp(probs_[a] - top);
    total += probs_[a];
  }
  for (auto& v : probs_) v /= total;
  return probs_;
}

std::size_t ChoiceModel::choose(const DirectedNetwork& net, const DirectedNetwork* previous,
                                std::size_t actor, Rng& rng, std::span<double> score) {
  auto probs = probabilities(net, previous, actor);
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t chosen = actor;  // rounding slack goes to "stay"
  for (std::size_t a = 0; a < probs.size(); ++a) {
    cumulative += probs[a];
    if (u < cumulative) {
      chosen = a;
      break;
    }
  }
  if (!score.empty()) {
    // d log p(chosen) / d beta = signed change of the chosen alternative minus
    // its expectation over all alternatives ("stay" contributes zero).
    const std::size_t p = terms_.size();
    auto row = net.row(actor);
    for (std::size_t a = 0; a < probs.size(); ++a) {
      if (a == actor) continue;
      const double sign = row[a] ? -1.0 : 1.0;
      const double weight = (a == chosen ? 1.0 : 0.0) - probs[a];
      const double* c = changes_.data() + a * p;
      for (std::size_t k = 0; k < p; ++k) score[k] += weight * sign * c[k];
    }
  }
  return chosen;
}

std::size_t mini_step(const SaomModel& model, const DirectedNetwork& net, std::size_t actor,
                      const DirectedNetwork* previous, const Covariates& covariates, Rng& rng) {
  if (actor >= net.size()) throw InvalidDyad("actor index out of range");
  ChoiceModel choice(model.statistics, model.beta, covariates, net.size());
  choice.terms().require_previous(previous);
  return choice.choose(net, previous, actor, rng);
}

std::uint64_t poisson_quantile(double mean, double u) {
  if (!(mean > 0.0)) return 0;
  // P(X <= k) = Q(k + 1, mean), the regularized upper incomplete gamma.
  auto cdf = [mean](std::uint64_t k) { return boost::math::gamma_q(static_cast<double>(k) + 1.0, mean); };
  std::uint64_t lo = 0;
  std::uint64_t hi = static_cast<std::uint64_t>(mean + 20.0 * std::sqrt(mean) + 40.0);
  while (cdf(hi) < u) hi *= 2;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (cdf(mid) >= u)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

std::size_t run_period(ChoiceModel& choice, DirectedNetwork& net, const DirectedNetwork& start,
                       double rate, PeriodStreams& streams, std::vector<MiniStep>* trace,
                       std::span<double> beta_score) {
  const std::size_t n = net.size();
  const auto count = static_cast<std::size_t>(
      poisson_quantile(static_cast<double>(n) * rate, streams.count_uniform));
  const DirectedNetwork* previous = choice.terms().needs_previous() ? &start : nullptr;
  if (trace) trace->reserve(trace->size() + count);
  for (std::size_t m = 0; m < count; ++m) {
    const std::size_t actor = streams.steps.below(n);
    const std::size_t alt = choice.choose(net, previous, actor, streams.steps, beta_score);
    if (alt != actor) net.toggle(actor, alt);
    if (trace) trace->push_back(MiniStep{actor, alt != actor ? std::optional(alt) : std::nullopt});
  }
  return count;
}

MiniStepTrace simulate_period(const SaomModel& model, const DirectedNetwork& start,
                              std::size_t period, const Covariates& covariates,
                              std::uint64_t seed) {
  model.validate();
  if (period >= model.rates.size())
    throw ConfigError("no rate set for period " + std::to_string(period + 1));
  ChoiceModel choice(model.statistics, model.beta, covariates, start.size());
  MiniStepTrace trace;
  trace.final_network = start;
  PeriodStreams streams(seed);
  run_period(choice, trace.final_network, start, model.rates[period], streams, &trace.steps);
  return trace;
}

std::vector<DirectedNetwork> simulate_panel(const SaomModel& model, const DirectedNetwork& start,
                                            const Covariates& covariates, std::uint64_t seed) {
  model.validate();
  ChoiceModel choice(model.statistics, model.beta, covariates, start.size());
  std::vector<DirectedNetwork> waves;
  DirectedNetwork current = start;
  for (std::size_t r = 0; r < model.rates.size(); ++r) {
    const DirectedNetwork period_start = current;
    PeriodStreams streams(derive_seed(seed, r));
    run_period(choice, current, period_start, model.rates[r], streams);
    waves.push_back(current);
  }
  return waves;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Moment function of the unconditional estimator: every period restarts at
/// the observed wave.
class MomentSimulator {
 public:
  MomentSimulator(const NetworkPanel& panel, const std::vector<StatisticSpec>& specs)
      : panel_(panel),
        specs_(specs),
        periods_(panel.wave_count() - 1),
        p_(specs.size()),
        terms_(specs, panel.covariates(), panel.vertex_count()) {}

  std::size_t periods() const noexcept { return periods_; }
  std::size_t parameters() const noexcept { return periods_ + p_; }

  VectorXd observed() const {
    VectorXd s = VectorXd::Zero(static_cast<Eigen::Index>(parameters()));
    std::vector<double> h(p_);
    for (std::size_t r = 0; r < periods_; ++r) {
      s[static_cast<Eigen::Index>(r)] =
          static_cast<double>(hamming_distance(panel_.wave(r), panel_.wave(r + 1)));
      terms_.global(panel_.wave(r + 1), &panel_.wave(r), h);
      for (std::size_t k = 0; k < p_; ++k) s[static_cast<Eigen::Index>(periods_ + k)] += h[k];
    }
    return s;
  }

  /// Statistics contributed by period r: Hamming change and end-of-period h.
  void simulate_period_stats(ChoiceModel& choice, const VectorXd& theta, std::size_t r,
                             std::uint64_t seed, double& hamming, std::span<double> h) const {
    const DirectedNetwork& start = panel_.wave(r);
    DirectedNetwork net = start;
    PeriodStreams streams(derive_seed(seed, r));
    run_period(choice, net, start, theta[static_cast<Eigen::Index>(r)], streams);
    hamming = static_cast<double>(hamming_distance(start, net));
    terms_.global(net, &start, h);
  }

  VectorXd simulate(const VectorXd& theta, std::uint64_t seed) const {
    ChoiceModel choice = make_choice(theta);
    VectorXd s = VectorXd::Zero(static_cast<Eigen::Index>(parameters()));
    std::vector<double> h(p_);
    for (std::size_t r = 0; r < periods_; ++r) {
      double ham = 0.0;
      simulate_period_stats(choice, theta, r, seed, ham, h);
      s[static_cast<Eigen::Index>(r)] = ham;
      for (std::size_t k = 0; k < p_; ++k) s[static_cast<Eigen::Index>(periods_ + k)] += h[k];
    }
    return s;
  }

  /// Statistics plus the score of the simulated path: (M - n rate) / rate for
  /// each period's rate, the summed choice scores for beta.
  VectorXd simulate_with_score(const VectorXd& theta, std::uint64_t seed, VectorXd& score) const {
    ChoiceModel choice = make_choice(theta);
    const auto P = static_cast<Eigen::Index>(parameters());
    VectorXd s = VectorXd::Zero(P);
    score.setZero(P);
    std::vector<double> h(p_), beta_score(p_, 0.0);
    const double n = static_cast<double>(panel_.vertex_count());
    for (std::size_t r = 0; r < periods_; ++r) {
      const auto ri = static_cast<Eigen::Index>(r);
      const DirectedNetwork& start = panel_.wave(r);
      DirectedNetwork net = start;
      PeriodStreams streams(derive_seed(seed, r));
      const double rate = theta[ri];
      const auto count = static_cast<double>(run_period(choice, net, start, rate, streams, nullptr, beta_score));
      score[ri] = (count - n * rate) / rate;
      s[ri] = static_cast<double>(hamming_distance(start, net));
      terms_.global(net, &start, h);
      for (std::size_t k = 0; k < p_; ++k) s[static_cast<Eigen::Index>(periods_ + k)] += h[k];
    }
    for (std::size_t k = 0; k < p_; ++k) score[static_cast<Eigen::Index>(periods_ + k)] = beta_score[k];
    return s;
  }

  /// Finite-difference derivative columns with common random numbers. Returns
  /// the unperturbed statistics; `jac` receives (S(theta + eps e_k) - S(theta)) / eps.
  VectorXd simulate_with_derivative(const VectorXd& theta, const VectorXd& eps,
                                    std::uint64_t seed, MatrixXd& jac) const {
    const auto P = static_cast<Eigen::Index>(parameters());
    const VectorXd base = simulate(theta, seed);
    jac.setZero(P, P);
    // A rate only drives its own period; only that period is re-simulated.
    {
      ChoiceModel choice = make_choice(theta);
      std::vector<double> h(p_), h0(p_);
      for (std::size_t r = 0; r < periods_; ++r) {
        const auto col = static_cast<Eigen::Index>(r);
        double ham0 = 0.0, ham1 = 0.0;
        simulate_period_stats(choice, theta, r, seed, ham0, h0);
        VectorXd shifted = theta;
        shifted[col] += eps[col];
        simulate_period_stats(choice, shifted, r, seed, ham1, h);
        jac(col, col) = (ham1 - ham0) / eps[col];
        for (std::size_t k = 0; k < p_; ++k)
          jac(static_cast<Eigen::Index>(periods_ + k), col) = (h[k] - h0[k]) / eps[col];
      }
    }
    for (std::size_t k = 0; k < p_; ++k) {
      const auto col = static_cast<Eigen::Index>(periods_ + k);
      VectorXd shifted = theta;
      shifted[col] += eps[col];
      jac.col(col) = (simulate(shifted, seed) - base) / eps[col];
    }
    return base;
  }

 private:
  ChoiceModel make_choice(const VectorXd& theta) const {
    std::vector<double> beta(p_);
    for (std::size_t k = 0; k < p_; ++k) beta[k] = theta[static_cast<Eigen::Index>(periods_ + k)];
    return ChoiceModel(specs_, std::move(beta), panel_.covariates(), panel_.vertex_count());
  }

  const NetworkPanel& panel_;
  std::vector<StatisticSpec> specs_;
  std::size_t periods_;
  std::size_t p_;
  TermSet terms_;
};

std::vector<std::vector<double>> to_rows(const MatrixXd& m) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()),
                                        std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return rows;
}

std::vector<double> to_vec(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

SaomFit fit_mom(const NetworkPanel& panel, const std::vector<StatisticSpec>& specs,
                const MomOptions& options) {
  if (panel.wave_count() < 2) throw ConfigError("a SAOM fit needs at least two waves");
  if (specs.empty()) throw ConfigError("a SAOM needs at least one statistic");
  for (const auto& s : specs) validate_spec(s);
  if (options.subphases < 1) throw ConfigError("subphases must be >= 1");
  if (options.phase1_iterations < 2) throw ConfigError("phase1_iterations must be >= 2");
  if (options.phase1_rounds < 1) throw ConfigError("phase1_rounds must be >= 1");
  if (options.phase3_iterations < 2) throw ConfigError("phase3_iterations must be >= 2");
  if (options.max_runs < 1) throw ConfigError("max_runs must be >= 1");
  if (!(options.min_rate > 0.0) || !(options.max_rate > options.min_rate))
    throw ConfigError("rate bounds must satisfy 0 < min_rate < max_rate");

  const MomentSimulator sim(panel, specs);
  const std::size_t R = sim.periods();
  const std::size_t p = specs.size();
  const std::size_t P = R + p;
  const auto PI = static_cast<Eigen::Index>(P);
  const std::size_t n = panel.vertex_count();
  const VectorXd observed = sim.observed();

  SaomFit fit;
  for (std::size_t r = 0; r < R; ++r) fit.parameter_names.push_back("rate_period_" + std::to_string(r + 1));
  for (const auto& s : specs) fit.parameter_names.push_back(s.label());

  // Starting values: rates from the fraction of changed dyads under uniform
  // toggling, the edges term from the mean observed density, others 0.
  VectorXd theta = VectorXd::Zero(PI);
  const double dyads = static_cast<double>(n * (n - 1));
  for (std::size_t r = 0; r < R; ++r) {
    const double f = std::min(observed[static_cast<Eigen::Index>(r)] / dyads, 0.45);
    const double rate = -0.5 * static_cast<double>(n) * std::log(1.0 - 2.0 * f);
    theta[static_cast<Eigen::Index>(r)] = std::clamp(rate, 0.5, options.max_rate);
  }
  double mean_density = 0.0;
  for (std::size_t t = 1; t < panel.wave_count(); ++t) mean_density += density(panel.wave(t));
  mean_density = std::clamp(mean_density / static_cast<double>(R), 0.01, 0.99);
  for (std::size_t k = 0; k < p; ++k)
    if (specs[k].kind == StatKind::edges)
      theta[static_cast<Eigen::Index>(R + k)] = std::log(mean_density / (1.0 - mean_density));

  auto epsilons = [&](const VectorXd& th) {
    VectorXd eps(PI);
    for (std::size_t r = 0; r < R; ++r)
      eps[static_cast<Eigen::Index>(r)] = std::max(0.01, options.rate_epsilon * th[static_cast<Eigen::Index>(r)]);
    for (std::size_t k = 0; k < p; ++k) eps[static_cast<Eigen::Index>(R + k)] = options.beta_epsilon;
    return eps;
  };
  auto clamp_rates = [&](VectorXd& th) {
    for (std::size_t r = 0; r < R; ++r) {
      auto& v = th[static_cast<Eigen::Index>(r)];
      v = std::clamp(v, options.min_rate, options.max_rate);
    }
  };
  // Truncated update: betas move at most max_beta_step (jointly scaled), rates
  // at most max_rate_step of their current value.
  auto apply_step = [&](VectorXd& th, VectorXd step) {
    double beta_max = 0.0;
    for (std::size_t k = 0; k < p; ++k) beta_max = std::max(beta_max, std::abs(step[static_cast<Eigen::Index>(R + k)]));
    if (beta_max > options.max_beta_step)
      step.tail(static_cast<Eigen::Index>(p)) *= options.max_beta_step / beta_max;
    for (std::size_t r = 0; r < R; ++r) {
      const auto i = static_cast<Eigen::Index>(r);
      const double bound = options.max_rate_step * th[i];
      step[i] = std::clamp(step[i], -bound, bound);
    }
    th += step;
    clamp_rates(th);
  };

  struct Batch {
    std::vector<VectorXd> stats;
    VectorXd mean;
    MatrixXd derivative;
  };
  // Simulates `count` panels at th; the first `derivative_count` feed the
  // finite-difference derivative, all of them feed the score-function one.
  auto run_batch = [&](const VectorXd& th, std::size_t count, std::size_t derivative_count,
                       std::uint64_t stream) {
    Batch batch;
    batch.stats.resize(count);
    const bool score = options.derivative == DerivativeMethod::score_function;
    if (score) derivative_count = count;
    std::vector<MatrixXd> jac(score ? 0 : derivative_count);
    std::vector<VectorXd> scores(score ? count : 0);
    const VectorXd eps = epsilons(th);
    parallel_for(count, options.exec, [&](std::size_t it) {
      const std::uint64_t seed = derive_seed(options.seed, stream, it);
      if (score)
        batch.stats[it] = sim.simulate_with_score(th, seed, scores[it]);
      else if (it < derivative_count)
        batch.stats[it] = sim.simulate_with_derivative(th, eps, seed, jac[it]);
      else
        batch.stats[it] = sim.simulate(th, seed);
    });
    batch.mean = VectorXd::Zero(PI);
    for (const auto& v : batch.stats) batch.mean += v;
    batch.mean /= static_cast<double>(count);
    batch.derivative = MatrixXd::Zero(PI, PI);
    if (score) {
      VectorXd score_mean = VectorXd::Zero(PI);
      for (const auto& v : scores) score_mean += v;
      score_mean /= static_cast<double>(count);
      for (std::size_t it = 0; it < count; ++it)
        batch.derivative += (batch.stats[it] - batch.mean) * (scores[it] - score_mean).transpose();
      batch.derivative /= static_cast<double>(count - 1);
    } else if (derivative_count > 0) {
      for (const auto& j : jac) batch.derivative += j;
      batch.derivative /= static_cast<double>(derivative_count);
    }
    return batch;
  };

  // Update matrix: block-diagonal in (rates, betas). Each rate is driven only
  // by its own period's Hamming change; the beta block is blended towards its
  // diagonal. Diagonal entries are kept positive.
  auto make_update_inverse = [&](const MatrixXd& D) {
    for (Eigen::Index k = 0; k < PI; ++k) {
      if (D.col(k).cwiseAbs().maxCoeff() == 0.0) {
        throw DerivativeSingularError("parameter '" + fit.parameter_names[static_cast<std::size_t>(k)] +
                                      "' has no effect on any simulated statistic");
      }
    }
    const auto pb = static_cast<Eigen::Index>(p);
    MatrixXd update = MatrixXd::Zero(PI, PI);
    update.bottomRightCorner(pb, pb) = (1.0 - options.diagonalize) * D.bottomRightCorner(pb, pb);
    for (Eigen::Index k = 0; k < PI; ++k) {
      const double floor = 1e-3 * std::max(1.0, D.col(k).cwiseAbs().maxCoeff());
      update(k, k) = std::max(D(k, k), floor);
    }
    Eigen::FullPivLU<MatrixXd> lu(update);
    if (!lu.isInvertible()) throw DerivativeSingularError("phase 1 derivative matrix is singular");
    return MatrixXd(lu.inverse());
  };

  const std::size_t n3 = options.phase3_iterations;
  const std::size_t n3d = std::min(options.phase3_derivative_iterations, n3);
  std::uint64_t stream = 0;
  Batch phase3;
  MatrixXd cov;
  // The run with the smallest max |t| is reported; a later run may drift away
  // from an earlier, better one when some moment barely responds to its parameter.
  struct Best {
    VectorXd theta;
    Batch phase3;
    MatrixXd cov;
    double worst = std::numeric_limits<double>::infinity();
  } best;
  for (int run = 0; run < options.max_runs; ++run) {
    // Phase 1: derivative estimates with truncated Newton steps. Later runs
    // start near the solution and take a single round.
    MatrixXd update_inv;
    const int rounds = run == 0 ? options.phase1_rounds : 1;
    for (int round = 0; round < rounds; ++round) {
      const Batch phase1 = run_batch(theta, options.phase1_iterations, options.phase1_iterations, ++stream);
      update_inv = make_update_inverse(phase1.derivative);
      if (run == 0) apply_step(theta, -update_inv * (phase1.mean - observed));
    }

    // Phase 2: Robbins-Monro iterations; each subphase ends at its running mean.
    double gain = options.initial_gain;
    const std::uint64_t phase2_stream = ++stream;
    std::size_t index = 0;
    for (int sub = 0; sub < options.subphases; ++sub) {
      const auto length = static_cast<std::size_t>(
          std::ceil(static_cast<double>(7 + P) * std::pow(2.52, static_cast<double>(sub))));
      VectorXd running = VectorXd::Zero(PI);
      for (std::size_t it = 0; it < length; ++it) {
        const VectorXd s = sim.simulate(theta, derive_seed(options.seed, phase2_stream, index++));
        apply_step(theta, -gain * (update_inv * (s - observed)));
        running += theta;
      }
      theta = running / static_cast<double>(length);
      clamp_rates(theta);
      gain *= 0.5;
    }
    fit.phase2_iterations += index;
    fit.runs = run + 1;

    // Phase 3: moments, covariance and derivative at the estimate.
    phase3 = run_batch(theta, n3, n3d, ++stream);
    cov = MatrixXd::Zero(PI, PI);
    for (const auto& v : phase3.stats) cov += (v - phase3.mean) * (v - phase3.mean).transpose();
    cov /= static_cast<double>(n3 - 1);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < PI; ++k) {
      const double sd = std::sqrt(cov(k, k));
      const double diff = phase3.mean[k] - observed[k];
      worst = std::max(worst, sd > 0.0 ? std::abs(diff) / sd : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()));
    }
    if (best.theta.size() == 0 || worst < best.worst) best = Best{theta, phase3, cov, worst};
    if (worst < 0.1) break;
    theta = best.theta;
  }
  theta = best.theta;
  phase3 = std::move(best.phase3);
  cov = std::move(best.cov);
  const VectorXd& mean3 = phase3.mean;
  const MatrixXd& D3 = phase3.derivative;

  fit.model.statistics = specs;
  fit.model.rates.assign(R, 0.0);
  fit.model.beta.assign(p, 0.0);
  for (std::size_t r = 0; r < R; ++r) fit.model.rates[r] = theta[static_cast<Eigen::Index>(r)];
  for (std::size_t k = 0; k < p; ++k) fit.model.beta[k] = theta[static_cast<Eigen::Index>(R + k)];
  fit.observed = to_vec(observed);
  fit.simulated_mean = to_vec(mean3);
  fit.derivative = to_rows(D3);

  fit.t_ratios.assign(P, 0.0);
  fit.simulated_sd.assign(P, 0.0);
  bool uninformative = false;
  for (std::size_t k = 0; k < P; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const double sd = std::sqrt(std::max(0.0, cov(i, i)));
    fit.simulated_sd[k] = sd;
    const double diff = mean3[i] - observed[i];
    if (sd > 0.0) {
      fit.t_ratios[k] = diff / sd;
    } else if (k >= R) {
      fit.t_ratios[k] = std::numeric_limits<double>::quiet_NaN();
      uninformative = true;
      fit.warnings.push_back("statistic '" + fit.parameter_names[k] +
                             "' does not vary across simulations; its coefficient is not identified");
    } else {
      fit.t_ratios[k] = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
  }
  fit.max_abs_t = 0.0;
  for (double t : fit.t_ratios)
    fit.max_abs_t = std::isnan(t) ? std::numeric_limits<double>::infinity() : std::max(fit.max_abs_t, std::abs(t));
  fit.converged = !uninformative && fit.max_abs_t < 0.1;
  if (fit.max_abs_t >= 0.25) {
    fit.warnings.push_back("non-convergence: max |t-ratio| = " + std::to_string(fit.max_abs_t) +
                           " (>= 0.25)");
  }

  fit.se_rates.assign(R, std::numeric_limits<double>::quiet_NaN());
  fit.se_beta.assign(p, std::numeric_limits<double>::quiet_NaN());
  Eigen::FullPivLU<MatrixXd> lu3(D3);
  lu3.setThreshold(1e-10);
  if (lu3.isInvertible()) {
    const MatrixXd inv = lu3.inverse();
    const MatrixXd vcov = inv * cov * inv.transpose();
    fit.covariance = to_rows(vcov);
    for (std::size_t r = 0; r < R; ++r)
      fit.se_rates[r] = std::sqrt(std::max(0.0, vcov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r))));
    for (std::size_t k = 0; k < p; ++k) {
      const auto i = static_cast<Eigen::Index>(R + k);
      fit.se_beta[k] = std::sqrt(std::max(0.0, vcov(i, i)));
    }
  } else {
    fit.warnings.push_back("phase 3 derivative matrix is singular; standard errors unavailable");
  }
  return fit;
}

std::vector<DirectedNetwork> forward_predict(const SaomModel& model,
                                             const DirectedNetwork& last_observed,
                                             const Covariates& covariates, std::size_t draw_count,
                                             std::uint64_t seed, std::optional<double> rate,
                                             Execution exec) {
  if (!rate && model.rates.empty()) throw ConfigError("the model has no fitted rate");
  const double r = rate.value_or(model.rates.back());
  if (r < 0.0) throw ConfigError("rate must be >= 0");
  std::vector<DirectedNetwork> draws(draw_count);
  parallel_for(draw_count, exec, [&](std::size_t d) {
    ChoiceModel choice(model.statistics, model.beta, covariates, last_observed.size());
    DirectedNetwork net = last_observed;
    PeriodStreams streams(derive_seed(seed, d));
    run_period(choice, net, last_observed, r, streams);
    draws[d] = std::move(net);
  });
  return draws;
}

}  // namespace longnet::saom
