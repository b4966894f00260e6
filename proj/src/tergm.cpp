#include "longnet/tergm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "longnet/error.hpp"
#include "longnet/numeric.hpp"

namespace longnet::tergm {

void TergmModel::validate() const {
  if (statistics.empty()) throw ConfigError("a TERGM needs at least one statistic");
  if (theta.size() != statistics.size())
    throw ConfigError("theta has " + std::to_string(theta.size()) + " entries for " +
                      std::to_string(statistics.size()) + " statistics");
  if (lag_depth != 1) throw ConfigError("only lag depth 1 is supported");
  for (const auto& s : statistics) validate_spec(s);
}

bool TergmModel::has_memory_terms() const {
  return std::any_of(statistics.begin(), statistics.end(),
                     [](const StatisticSpec& s) { return is_memory(s.kind); });
}

MpleDesign build_mple_design(const NetworkPanel& panel, const TermSet& terms, int lag_depth,
                             Execution exec) {
  const std::size_t n = panel.vertex_count();
  const std::size_t p = terms.size();
  const std::size_t first = static_cast<std::size_t>(lag_depth);
  if (panel.wave_count() <= first)
    throw ConfigError("the panel needs more than " + std::to_string(lag_depth) + " waves");
  const std::size_t waves = panel.wave_count() - first;
  const std::size_t per_wave = n * (n - 1);

  MpleDesign design;
  design.columns = p;
  design.x.assign(waves * per_wave * p, 0.0);
  design.y.assign(waves * per_wave, 0);
  design.wave_offset.resize(waves + 1);
  for (std::size_t w = 0; w <= waves; ++w) design.wave_offset[w] = w * per_wave;

  // Block (w, i) owns rows [w*per_wave + i*(n-1), ... + n-1).
  parallel_for(waves * n, exec, [&](std::size_t block) {
    const std::size_t w = block / n;
    const std::size_t i = block % n;
    const DirectedNetwork& current = panel.wave(first + w);
    const DirectedNetwork* previous = &panel.wave(first + w - 1);
    std::size_t row = w * per_wave + i * (n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      terms.change(current, previous, i, j, {design.x.data() + row * p, p});
      design.y[row] = current.tie(i, j) ? 1 : 0;
      ++row;
    }
  });
  return design;
}

namespace {

double log1pexp(double eta) { return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

double logistic(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

struct Evaluation {
  double loglik = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd information;
};

double loglik_only(const MpleDesign& d, const std::vector<double>& row_weight,
                   const Eigen::VectorXd& theta) {
  const std::size_t p = d.columns;
  double ll = 0.0;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    const double w = row_weight[r];
    if (w == 0.0) continue;
    const double* x = d.x.data() + r * p;
    double eta = 0.0;
    for (std::size_t k = 0; k < p; ++k) eta += x[k] * theta[static_cast<Eigen::Index>(k)];
    ll += w * (d.y[r] * eta - log1pexp(eta));
  }
  return ll;
}

Evaluation evaluate(const MpleDesign& d, const std::vector<double>& row_weight,
                    const Eigen::VectorXd& theta) {
  const auto p = static_cast<Eigen::Index>(d.columns);
  Evaluation ev;
  ev.gradient = Eigen::VectorXd::Zero(p);
  ev.information = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    const double w = row_weight[r];
    if (w == 0.0) continue;
    Eigen::Map<const Eigen::VectorXd> x(d.x.data() + r * d.columns, p);
    const double eta = x.dot(theta);
    const double mu = logistic(eta);
    ev.loglik += w * (d.y[r] * eta - log1pexp(eta));
    ev.gradient += w * (d.y[r] - mu) * x;
    ev.information.selfadjointView<Eigen::Lower>().rankUpdate(x, w * mu * (1.0 - mu));
  }
  ev.information = ev.information.selfadjointView<Eigen::Lower>();
  return ev;
}

void check_separation(const MpleDesign& d, const std::vector<double>& row_weight,
                      const std::vector<std::string>& names) {
  const std::size_t p = d.columns;
  std::size_t ones = 0, zeros = 0;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    if (row_weight[r] == 0.0) continue;
    (d.y[r] ? ones : zeros) += 1;
  }
  if (ones == 0 || zeros == 0) {
    throw SeparationError(names.empty() ? std::string("edges") : names.front(),
                          std::string("response is constant (every modeled dyad is ") +
                              (ones == 0 ? "0" : "1") + "); coefficients are not identified");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p; ++k) {
    double min1 = inf, max1 = -inf, min0 = inf, max0 = -inf;
    for (std::size_t r = 0; r < d.rows(); ++r) {
      if (row_weight[r] == 0.0) continue;
      const double v = d.x[r * p + k];
      if (d.y[r]) {
        min1 = std::min(min1, v);
        max1 = std::max(max1, v);
      } else {
        min0 = std::min(min0, v);
        max0 = std::max(max0, v);
      }
    }
    if (max0 < min1 || max1 < min0) {
      throw SeparationError(names.at(k), "statistic '" + names.at(k) +
                                             "' perfectly separates tied from untied dyads");
    }
  }
}

}  // namespace

LogitResult fit_logit(const MpleDesign& design, std::span<const double> wave_weights,
                      const std::vector<std::string>& column_names, const NewtonOptions& options) {
  if (wave_weights.size() != design.waves()) throw ConfigError("one weight per modeled wave");
  std::vector<double> row_weight(design.rows());
  for (std::size_t w = 0; w < design.waves(); ++w)
    std::fill(row_weight.begin() + static_cast<std::ptrdiff_t>(design.wave_offset[w]),
              row_weight.begin() + static_cast<std::ptrdiff_t>(design.wave_offset[w + 1]),
              wave_weights[w]);
  check_separation(design, row_weight, column_names);

  const auto p = static_cast<Eigen::Index>(design.columns);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  auto to_vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };

  Evaluation ev = evaluate(design, row_weight, theta);
  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    const double gnorm = ev.gradient.norm();
    if (gnorm < options.gradient_tolerance) {
      return LogitResult{to_vec(theta), ev.loglik, gnorm, iter};
    }
    if (iter == options.max_iterations) break;
    Eigen::LDLT<Eigen::MatrixXd> solver(ev.information);
    if (solver.info() != Eigen::Success || !solver.isPositive() ||
        solver.vectorD().minCoeff() <= 1e-12 * std::max(1.0, solver.vectorD().maxCoeff())) {
      throw ConvergenceError("pseudolikelihood information matrix is singular (collinear statistics?)",
                             to_vec(theta));
    }
    const Eigen::VectorXd direction = solver.solve(ev.gradient);
    // Step halving keeps the (concave) log-likelihood from decreasing.
    double step = 1.0;
    Eigen::VectorXd candidate = theta + direction;
    double ll = loglik_only(design, row_weight, candidate);
    const double slack = 1e-12 * (1.0 + std::abs(ev.loglik));
    int halvings = 0;
    while (!(ll >= ev.loglik - slack) && halvings < 40) {
      step *= 0.5;
      candidate = theta + step * direction;
      ll = loglik_only(design, row_weight, candidate);
      ++halvings;
    }
    if (!(ll >= ev.loglik - slack)) {
      throw ConvergenceError("damped Newton step failed to increase the pseudolikelihood",
                             to_vec(theta));
    }
    theta = candidate;
    ev = evaluate(design, row_weight, theta);
  }
  throw ConvergenceError("pseudolikelihood maximization did not converge in " +
                             std::to_string(options.max_iterations) + " iterations",
                         to_vec(theta));
}

TergmFit fit_mple(const NetworkPanel& panel, const std::vector<StatisticSpec>& specs,
                  const MpleOptions& options) {
  TergmModel model{specs, std::vector<double>(specs.size(), 0.0), 1};
  model.validate();
  if (options.bootstrap_count < 1) throw ConfigError("bootstrap_count must be >= 1");
  if (!(options.confidence_level > 0.0 && options.confidence_level < 1.0))
    throw ConfigError("confidence_level must lie in (0, 1)");
  if (panel.wave_count() < static_cast<std::size_t>(model.lag_depth) + 1)
    throw ConfigError("the panel needs at least lag_depth + 1 waves");

  const TermSet terms(specs, panel.covariates(), panel.vertex_count());
  const MpleDesign design = build_mple_design(panel, terms, model.lag_depth, options.exec);
  std::vector<std::string> names;
  for (const auto& s : specs) names.push_back(s.label());

  const std::size_t waves = design.waves();
  const std::vector<double> unit(waves, 1.0);
  const LogitResult point = fit_logit(design, unit, names, options.newton);

  TergmFit fit;
  model.theta = point.theta;
  fit.model = model;
  fit.confidence_level = options.confidence_level;
  fit.n_obs = design.rows();
  fit.modeled_waves = waves;
  fit.log_likelihood = point.log_likelihood;
  fit.gradient_norm = point.gradient_norm;
  fit.iterations = point.iterations;

  std::vector<std::optional<std::vector<double>>> replicates(options.bootstrap_count);
  parallel_for(options.bootstrap_count, options.exec, [&](std::size_t b) {
    Rng rng(derive_seed(options.seed, b));
    std::vector<double> weights(waves, 0.0);
    for (std::size_t draw = 0; draw < waves; ++draw) weights[rng.below(waves)] += 1.0;
    try {
      replicates[b] = fit_logit(design, weights, names, options.newton).theta;
    } catch (const NumericalError&) {
      replicates[b].reset();
    }
  });
  for (auto& r : replicates) {
    if (r)
      fit.bootstrap_replicates.push_back(std::move(*r));
    else
      ++fit.bootstrap_failures;
  }

  const double alpha = 1.0 - options.confidence_level;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    std::vector<double> column;
    column.reserve(fit.bootstrap_replicates.size());
    for (const auto& r : fit.bootstrap_replicates) column.push_back(r[k]);
    fit.confidence_intervals.emplace_back(quantile(column, alpha / 2.0),
                                          quantile(column, 1.0 - alpha / 2.0));
    fit.bootstrap_se.push_back(column.size() >= 2 ? std::sqrt(variance(column))
                                                  : std::numeric_limits<double>::quiet_NaN());
  }
  return fit;
}

ErgmSampler::ErgmSampler(const TergmModel& model, const Covariates& covariates,
                         const DirectedNetwork* previous, DirectedNetwork start, std::uint64_t seed)
    : terms_(model.statistics, covariates, start.size()),
      theta_(model.theta),
      previous_(previous),
      state_(std::move(start)),
      rng_(seed),
      delta_(model.statistics.size()) {
  model.validate();
  terms_.require_previous(previous_);
  if (state_.size() < 2) throw InvalidNetwork("the sampler needs at least two vertices");
}

bool ErgmSampler::step() {
  const std::size_t n = state_.size();
  const std::size_t i = rng_.below(n);
  std::size_t j = rng_.below(n - 1);
  if (j >= i) ++j;
  terms_.change(state_, previous_, i, j, delta_);
  double log_ratio = 0.0;
  for (std::size_t k = 0; k < delta_.size(); ++k) log_ratio += theta_[k] * delta_[k];
  if (state_.tie(i, j)) log_ratio = -log_ratio;
  const double u = rng_.uniform();
  if (log_ratio >= 0.0 || u < std::exp(log_ratio)) {
    state_.toggle(i, j);
    return true;
  }
  return false;
}

SimulationResult simulate(const TergmModel& model, std::span<const DirectedNetwork> conditioning,
                          const Covariates& covariates, std::size_t n,
                          const SamplerOptions& options) {
  model.validate();
  if (model.has_memory_terms() && conditioning.empty())
    throw ConfigError("memory terms need at least one conditioning wave");
  const DirectedNetwork* previous = conditioning.empty() ? nullptr : &conditioning.back();
  if (previous != nullptr) n = previous->size();
  DirectedNetwork start = previous != nullptr ? *previous : DirectedNetwork(n);

  const std::size_t burn_in = options.burn_in.value_or(10 * n * n);
  const std::size_t thinning = std::max<std::size_t>(1, options.thinning.value_or(n * n));
  ErgmSampler sampler(model, covariates, previous, std::move(start), options.seed);

  SimulationResult result;
  for (std::size_t s = 0; s < burn_in; ++s) result.accepted += sampler.step();
  const double dyads = static_cast<double>(n * (n - 1));
  std::size_t extreme = 0, post = 0;
  for (std::size_t d = 0; d < options.draw_count; ++d) {
    for (std::size_t s = 0; s < thinning; ++s) {
      result.accepted += sampler.step();
      const double dens = static_cast<double>(sampler.state().edge_count()) / dyads;
      extreme += (dens < 0.01 || dens > 0.99);
      ++post;
    }
    result.draws.push_back(sampler.state());
  }
  result.steps = burn_in + post;
  result.extreme_fraction = post ? static_cast<double>(extreme) / static_cast<double>(post) : 0.0;
  result.degeneracy_warning = result.extreme_fraction > 0.99;
  return result;
}

ForwardResult forward_simulate_panel(const TergmModel& model, const DirectedNetwork& initial,
                                     std::size_t steps, const Covariates& covariates,
                                     const SamplerOptions& per_step) {
  if (steps < 1) throw ConfigError("forward simulation needs steps >= 1");
  ForwardResult out;
  out.waves.push_back(initial);
  for (std::size_t s = 0; s < steps; ++s) {
    SamplerOptions opts = per_step;
    opts.draw_count = 1;
    opts.seed = derive_seed(per_step.seed, s);
    auto sim = simulate(model, std::span<const DirectedNetwork>(&out.waves.back(), 1), covariates,
                        initial.size(), opts);
    out.degeneracy_warning = out.degeneracy_warning || sim.degeneracy_warning;
    out.waves.push_back(std::move(sim.draws.front()));
  }
  return out;
}

}  // namespace longnet::tergm
