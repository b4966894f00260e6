#include "longnet/experiments.hpp"

#include <cmath>
#include <set>

#include "longnet/error.hpp"
#include "longnet/numeric.hpp"
#include "longnet/report.hpp"

namespace longnet::experiments {

using nlohmann::json;

std::string_view process_name(Process p) noexcept {
  return p == Process::tergm_process ? "tergm_process" : "saom_process";
}

Process parse_process(std::string_view name) {
  if (name == "tergm_process") return Process::tergm_process;
  if (name == "saom_process") return Process::saom_process;
  throw ConfigError("unknown process '" + std::string(name) +
                    "' (expected tergm_process or saom_process)");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("invalid experiment config: " + field + " " + why);
  };
  if (replication_count < 1) fail("replication_count", "must be >= 1");
  if (vertex_count < 3) fail("vertex_count", "must be >= 3");
  if (wave_count < 4) fail("wave_count", "must be >= 4 (three retained waves)");
  if (predictive_draws < 1) fail("predictive_draws", "must be >= 1");
  if (!(density_lower > 0.0 && density_lower < density_upper && density_upper < 1.0))
    fail("density_bounds", "must satisfy 0 < lower < upper < 1");
  if (!(parameter_min < parameter_max)) fail("parameter_range", "must satisfy min < max");
  if (!(parameter_step > 0.0)) fail("parameter_step", "must be > 0");
  if (!(saom_rate > 0.0)) fail("saom_rate", "must be > 0");
  if (max_screening_attempts < 1) fail("max_screening_attempts", "must be >= 1");
  if (tergm_bootstrap_count < 1) fail("tergm_bootstrap_count", "must be >= 1");
  if (saom_phase3_iterations < 2) fail("saom_phase3_iterations", "must be >= 2");
  if (saom_max_runs < 1) fail("saom_max_runs", "must be >= 1");
}

namespace {

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("experiment config key '") + key + "' has the wrong type");
  }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v{};
  read_field(j, key, v);
  out = v;
}

void read_pair(const json& j, const char* key, double& a, double& b) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(std::string("experiment config key '") + key + "' must be [lower, upper]");
  a = v[0].get<double>();
  b = v[1].get<double>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  static const std::set<std::string> known = {
      "process", "replication_count", "vertex_count", "wave_count", "predictive_draws",
      "density_bounds", "parameter_range", "parameter_step", "saom_rate", "master_seed",
      "max_screening_attempts", "tergm_bootstrap_count", "sampler_burn_in",
      "sampler_thinning", "saom_phase3_iterations", "saom_max_runs"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown experiment config key '" + key + "'");
  if (!j.contains("process")) throw ConfigError("experiment config is missing key 'process'");
  ExperimentConfig c;
  std::string process;
  read_field(j, "process", process);
  c.process = parse_process(process);
  read_field(j, "replication_count", c.replication_count);
  read_field(j, "vertex_count", c.vertex_count);
  read_field(j, "wave_count", c.wave_count);
  read_field(j, "predictive_draws", c.predictive_draws);
  read_pair(j, "density_bounds", c.density_lower, c.density_upper);
  read_pair(j, "parameter_range", c.parameter_min, c.parameter_max);
  read_field(j, "parameter_step", c.parameter_step);
  read_field(j, "saom_rate", c.saom_rate);
  read_field(j, "master_seed", c.master_seed);
  read_field(j, "max_screening_attempts", c.max_screening_attempts);
  read_field(j, "tergm_bootstrap_count", c.tergm_bootstrap_count);
  read_optional(j, "sampler_burn_in", c.sampler_burn_in);
  read_optional(j, "sampler_thinning", c.sampler_thinning);
  read_field(j, "saom_phase3_iterations", c.saom_phase3_iterations);
  read_field(j, "saom_max_runs", c.saom_max_runs);
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["process"] = std::string(process_name(c.process));
  j["replication_count"] = c.replication_count;
  j["vertex_count"] = c.vertex_count;
  j["wave_count"] = c.wave_count;
  j["predictive_draws"] = c.predictive_draws;
  j["density_bounds"] = {c.density_lower, c.density_upper};
  j["parameter_range"] = {c.parameter_min, c.parameter_max};
  j["parameter_step"] = c.parameter_step;
  j["saom_rate"] = c.saom_rate;
  j["master_seed"] = c.master_seed;
  j["max_screening_attempts"] = c.max_screening_attempts;
  j["tergm_bootstrap_count"] = c.tergm_bootstrap_count;
  j["sampler_burn_in"] = c.sampler_burn_in ? json(*c.sampler_burn_in) : json(nullptr);
  j["sampler_thinning"] = c.sampler_thinning ? json(*c.sampler_thinning) : json(nullptr);
  j["saom_phase3_iterations"] = c.saom_phase3_iterations;
  j["saom_max_runs"] = c.saom_max_runs;
  return j;
}

Theta draw_theta(const ExperimentConfig& config, Rng& rng) {
  const auto lo = std::llround(config.parameter_min / config.parameter_step);
  const auto hi = std::llround(config.parameter_max / config.parameter_step);
  Theta theta{};
  for (auto& v : theta) {
    const auto k = static_cast<long long>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    v = static_cast<double>(lo + k) * config.parameter_step;
  }
  return theta;
}

bool passes_screen(const ExperimentConfig& config, double d) noexcept {
  return d >= config.density_lower && d <= config.density_upper;
}

namespace {

const std::vector<StatisticSpec>& base_specs() {
  static const std::vector<StatisticSpec> specs = {StatisticSpec::of(StatKind::edges),
                                                   StatisticSpec::of(StatKind::reciprocity),
                                                   StatisticSpec::of(StatKind::transitive_triplets)};
  return specs;
}

std::vector<StatisticSpec> tergm_specs() {
  auto s = base_specs();
  s.push_back(StatisticSpec::of(StatKind::memory_stability));
  return s;
}

tergm::SamplerOptions sampler_options(std::optional<std::size_t> burn_in,
                                      std::optional<std::size_t> thinning, std::size_t draws,
                                      std::uint64_t seed) {
  tergm::SamplerOptions o;
  o.burn_in = burn_in;
  o.thinning = thinning;
  o.draw_count = draws;
  o.seed = seed;
  return o;
}

/// Generates a panel; with `screen` set, returns early (panel left empty) when
/// the first generated wave fails the density screen.
GeneratedPanel generate_tergm(const Theta& theta, const ExperimentConfig& config,
                              std::uint64_t seed, bool screen, bool& rejected) {
  const std::size_t n = config.vertex_count;
  tergm::TergmModel initial{base_specs(), {theta[0], theta[1], theta[2]}};
  const auto first = tergm::simulate(
      initial, {}, {}, n,
      sampler_options(config.sampler_burn_in, config.sampler_thinning, 1, derive_seed(seed, 0)));
  GeneratedPanel out;
  out.screen_density = density(first.draws.front());
  rejected = !passes_screen(config, out.screen_density);
  if (screen && rejected) return out;
  tergm::TergmModel forward{tergm_specs(), {theta[0], theta[1], theta[2], theta[3]}};
  auto fw = tergm::forward_simulate_panel(
      forward, first.draws.front(), config.wave_count - 1, {},
      sampler_options(config.sampler_burn_in, config.sampler_thinning, 1, derive_seed(seed, 1)));
  fw.waves.erase(fw.waves.begin());
  out.panel = NetworkPanel(std::move(fw.waves));
  out.degeneracy_warning = first.degeneracy_warning || fw.degeneracy_warning;
  return out;
}

GeneratedPanel generate_saom(const Theta& theta, const ExperimentConfig& config,
                             std::uint64_t seed, bool screen, bool& rejected) {
  const std::size_t n = config.vertex_count;
  saom::ChoiceModel choice(base_specs(), {theta[0], theta[1], theta[2]}, {}, n);
  std::vector<DirectedNetwork> waves;
  DirectedNetwork current(n);
  GeneratedPanel out;
  for (std::size_t r = 0; r + 1 < config.wave_count; ++r) {
    const DirectedNetwork start = current;
    saom::PeriodStreams streams(derive_seed(seed, r));
    saom::run_period(choice, current, start, config.saom_rate, streams);
    waves.push_back(current);
    if (r == 0) {
      out.screen_density = density(current);
      rejected = !passes_screen(config, out.screen_density);
      if (screen && rejected) return out;
    }
  }
  out.panel = NetworkPanel(std::move(waves));
  return out;
}

}  // namespace

GeneratedPanel generate_tergm_process(const Theta& theta, const ExperimentConfig& config,
                                      std::uint64_t seed) {
  config.validate();
  bool rejected = false;
  return generate_tergm(theta, config, seed, false, rejected);
}

GeneratedPanel generate_saom_process(const Theta& theta, const ExperimentConfig& config,
                                     std::uint64_t seed) {
  config.validate();
  bool rejected = false;
  return generate_saom(theta, config, seed, false, rejected);
}

ScreenedDraw sample_parameters(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  for (std::size_t attempt = 0; attempt < config.max_screening_attempts; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    const Theta theta = draw_theta(config, rng);
    const std::uint64_t gen_seed = derive_seed(seed, attempt, 1);
    bool rejected = false;
    GeneratedPanel g = config.process == Process::tergm_process
                           ? generate_tergm(theta, config, gen_seed, true, rejected)
                           : generate_saom(theta, config, gen_seed, true, rejected);
    if (!rejected) return ScreenedDraw{theta, attempt + 1, std::move(g)};
  }
  throw ScreeningExhaustedError("no parameter draw passed the density screen in " +
                                std::to_string(config.max_screening_attempts) + " attempts");
}

ReplicationRecord run_replication(const ExperimentConfig& config, std::size_t index) {
  ReplicationRecord rec;
  rec.index = index;
  rec.seed = derive_seed(config.master_seed, index);
  std::string stage = "parameter sampling";
  try {
    const ScreenedDraw draw = sample_parameters(config, derive_seed(rec.seed, 0));
    rec.theta = draw.theta;
    rec.screening_attempts = draw.attempts;
    rec.degeneracy_warning = draw.generated.degeneracy_warning;
    const NetworkPanel& panel = draw.generated.panel;
    for (const auto& w : panel.waves()) rec.wave_densities.push_back(density(w));
    const std::size_t T = panel.wave_count();
    const NetworkPanel train = panel.slice(0, T - 1);
    const DirectedNetwork& last = train.wave(T - 2);
    const DirectedNetwork& target = panel.wave(T - 1);

    stage = "TERGM fit";
    tergm::MpleOptions mo;
    mo.bootstrap_count = config.tergm_bootstrap_count;
    mo.seed = derive_seed(rec.seed, 1);
    mo.exec = Execution::serial;
    const auto tfit = tergm::fit_mple(train, tergm_specs(), mo);
    stage = "TERGM prediction";
    auto tsim = tergm::simulate(tfit.model, std::span<const DirectedNetwork>(&last, 1), {},
                                config.vertex_count,
                                sampler_options(config.sampler_burn_in, config.sampler_thinning,
                                                config.predictive_draws, derive_seed(rec.seed, 2)));
    if (tsim.degeneracy_warning) rec.tergm.warnings.push_back("degenerate predictive chain");

    stage = "SAOM fit";
    saom::MomOptions so;
    so.seed = derive_seed(rec.seed, 3);
    so.exec = Execution::serial;
    so.phase3_iterations = config.saom_phase3_iterations;
    so.max_runs = config.saom_max_runs;
    const auto sfit = saom::fit_mom(train, base_specs(), so);
    stage = "SAOM prediction";
    auto sdraws = saom::forward_predict(sfit.model, last, {}, config.predictive_draws,
                                        derive_seed(rec.seed, 4), std::nullopt, Execution::serial);

    stage = "evaluation";
    const auto te = evaluation::make_ensemble(target, std::move(tsim.draws), Execution::serial);
    const auto se = evaluation::make_ensemble(target, std::move(sdraws), Execution::serial);
    for (const auto& s : tfit.model.statistics) rec.tergm.names.push_back(s.label());
    rec.tergm.estimates = tfit.model.theta;
    rec.saom.names = sfit.parameter_names;
    rec.saom.estimates = sfit.model.rates;
    rec.saom.estimates.insert(rec.saom.estimates.end(), sfit.model.beta.begin(), sfit.model.beta.end());
    rec.saom.warnings = sfit.warnings;
    rec.tergm.auc_roc = evaluation::roc_curve(te).auc;
    rec.tergm.auc_pr = evaluation::pr_curve(te).auc;
    rec.saom.auc_roc = evaluation::roc_curve(se).auc;
    rec.saom.auc_pr = evaluation::pr_curve(se).auc;
    for (auto kind : evaluation::kAllAuxKinds) {
      const auto tg = evaluation::auxiliary_gof(te, kind);
      const auto sg = evaluation::auxiliary_gof(se, kind);
      std::vector<double> a, b, c;
      for (std::size_t k = 0; k < tg.bins.size(); ++k) {
        a.push_back(tg.bins[k].target);
        b.push_back(tg.bins[k].median);
        c.push_back(sg.bins[k].median);
      }
      rec.diff_endogenous.push_back(evaluation::diff_endogenous(a, b, c));
      rec.gof_target.push_back(std::move(a));
      rec.tergm.gof_medians.push_back(std::move(b));
      rec.saom.gof_medians.push_back(std::move(c));
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.failure = stage + ": " + e.what();
  }
  return rec;
}

Aggregate aggregate(const std::vector<ReplicationRecord>& records) {
  Aggregate agg;
  std::vector<double> roc_t, roc_s, pr_t, pr_s;
  const std::size_t kinds = std::size(evaluation::kAllAuxKinds);
  std::vector<std::vector<double>> endo(kinds);
  for (const auto& r : records) {
    if (!r.ok) {
      ++agg.failed;
      continue;
    }
    ++agg.successful;
    roc_t.push_back(r.tergm.auc_roc);
    roc_s.push_back(r.saom.auc_roc);
    pr_t.push_back(r.tergm.auc_pr);
    pr_s.push_back(r.saom.auc_pr);
    for (std::size_t k = 0; k < kinds; ++k) endo[k].push_back(r.diff_endogenous[k]);
  }
  if (agg.successful == 0) {
    agg.notes.push_back("no successful replications");
    return agg;
  }
  agg.mean_auc_roc_tergm = mean(roc_t);
  agg.mean_auc_roc_saom = mean(roc_s);
  agg.mean_auc_pr_tergm = mean(pr_t);
  agg.mean_auc_pr_saom = mean(pr_s);
  agg.diff_auc_roc = evaluation::diff_auc(roc_t, roc_s);
  agg.diff_auc_pr = evaluation::diff_auc(pr_t, pr_s);
  try {
    agg.t_roc = evaluation::two_sample_t(roc_t, roc_s);
    agg.p_roc_greater = evaluation::one_sided_p_greater(*agg.t_roc);
  } catch (const Error& e) {
    agg.notes.push_back(std::string("AUC-ROC t-test: ") + e.what());
  }
  try {
    agg.t_pr = evaluation::two_sample_t(pr_t, pr_s);
    agg.p_pr_greater = evaluation::one_sided_p_greater(*agg.t_pr);
  } catch (const Error& e) {
    agg.notes.push_back(std::string("AUC-PR t-test: ") + e.what());
  }
  for (std::size_t k = 0; k < kinds; ++k) {
    QuartileSummary q;
    q.q1 = quantile(endo[k], 0.25);
    q.median = quantile(endo[k], 0.5);
    q.q3 = quantile(endo[k], 0.75);
    q.includes_zero = q.q1 <= 0.0 && 0.0 <= q.q3;
    agg.diff_endogenous.push_back(q);
  }
  return agg;
}

ExperimentReport run_experiment(const ExperimentConfig& config, Execution exec) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  report.replications.resize(config.replication_count);
  parallel_for(config.replication_count, exec,
               [&](std::size_t i) { report.replications[i] = run_replication(config, i); });
  report.aggregate = aggregate(report.replications);
  return report;
}

namespace {

json model_json(const ModelOutcome& m) {
  return json{{"parameters", m.names}, {"estimates", m.estimates}, {"warnings", m.warnings},
              {"auc_roc", m.auc_roc}, {"auc_pr", m.auc_pr}, {"gof_medians", m.gof_medians}};
}

}  // namespace

json report_to_json(const ExperimentReport& report) {
  json reps = json::array();
  for (const auto& r : report.replications) {
    json j;
    j["index"] = r.index;
    j["seed"] = r.seed;
    j["ok"] = r.ok;
    if (!r.ok) j["failure"] = r.failure;
    j["theta"] = r.theta;
    j["screening_attempts"] = r.screening_attempts;
    j["wave_densities"] = r.wave_densities;
    j["degeneracy_warning"] = r.degeneracy_warning;
    if (r.ok) {
      j["tergm"] = model_json(r.tergm);
      j["saom"] = model_json(r.saom);
      j["gof_target"] = r.gof_target;
      json endo;
      for (std::size_t k = 0; k < r.diff_endogenous.size(); ++k)
        endo[std::string(evaluation::aux_name(evaluation::kAllAuxKinds[k]))] = r.diff_endogenous[k];
      j["diff_endogenous"] = endo;
    }
    reps.push_back(j);
  }
  const Aggregate& a = report.aggregate;
  json agg;
  agg["successful"] = a.successful;
  agg["failed"] = a.failed;
  agg["mean_auc_roc"] = {{"tergm", a.mean_auc_roc_tergm}, {"saom", a.mean_auc_roc_saom}};
  agg["mean_auc_pr"] = {{"tergm", a.mean_auc_pr_tergm}, {"saom", a.mean_auc_pr_saom}};
  agg["diff_auc_roc"] = a.diff_auc_roc;
  agg["diff_auc_pr"] = a.diff_auc_pr;
  agg["t_test_roc"] = a.t_roc ? report::to_json(*a.t_roc) : json(nullptr);
  agg["t_test_pr"] = a.t_pr ? report::to_json(*a.t_pr) : json(nullptr);
  json endo;
  for (std::size_t k = 0; k < a.diff_endogenous.size(); ++k) {
    const auto& q = a.diff_endogenous[k];
    endo[std::string(evaluation::aux_name(evaluation::kAllAuxKinds[k]))] =
        json{{"q1", q.q1}, {"median", q.median}, {"q3", q.q3}, {"iqr_includes_zero", q.includes_zero}};
  }
  agg["diff_endogenous"] = endo;
  agg["notes"] = a.notes;
  return json{{"config", config_to_json(report.config)},
              {"replications", reps},
              {"aggregate", agg}};
}

std::vector<StatisticSpec> knecht_specification(const KnechtConfig& config) {
  return {StatisticSpec::of(StatKind::edges),
          StatisticSpec::of(StatKind::reciprocity),
          StatisticSpec::of(StatKind::transitive_triplets),
          StatisticSpec::of(StatKind::three_cycles),
          StatisticSpec::of(StatKind::transitive_ties),
          StatisticSpec::of(StatKind::indegree_popularity_sqrt),
          StatisticSpec::of(StatKind::outdegree_popularity_sqrt),
          StatisticSpec::of(StatKind::outdegree_activity_1_5),
          StatisticSpec::of(StatKind::covariate_match, config.school_covariate),
          StatisticSpec::of(StatKind::covariate_receiver, config.sex_covariate),
          StatisticSpec::of(StatKind::covariate_sender, config.sex_covariate),
          StatisticSpec::of(StatKind::covariate_match, config.sex_covariate)};
}

KnechtReport replicate_knecht(const NetworkPanel& panel, const KnechtConfig& config,
                              Execution exec) {
  if (panel.wave_count() < 3) throw ConfigError("the replication needs at least three waves");
  const auto& covs = panel.covariates();
  if (!covs.vertex.count(config.sex_covariate))
    throw ConfigError("missing vertex covariate '" + config.sex_covariate + "'");
  if (!covs.vertex.count(config.school_covariate) && !covs.dyad.count(config.school_covariate))
    throw ConfigError("missing covariate '" + config.school_covariate + "'");
  const std::size_t T = panel.wave_count();
  const NetworkPanel train = panel.slice(0, T - 1);
  const DirectedNetwork& last = train.wave(T - 2);
  const DirectedNetwork& target = panel.wave(T - 1);

  KnechtReport r;
  r.config = config;
  const auto specs = knecht_specification(config);
  auto tspecs = specs;
  tspecs.push_back(StatisticSpec::of(StatKind::memory_stability));

  tergm::MpleOptions mo;
  mo.bootstrap_count = config.bootstrap_count;
  mo.seed = derive_seed(config.seed, 1);
  mo.exec = exec;
  r.tergm_fit = tergm::fit_mple(train, tspecs, mo);
  auto tsim = tergm::simulate(r.tergm_fit.model, std::span<const DirectedNetwork>(&last, 1), covs,
                              panel.vertex_count(),
                              sampler_options(config.sampler_burn_in, config.sampler_thinning,
                                              config.predictive_draws, derive_seed(config.seed, 2)));

  saom::MomOptions so;
  so.seed = derive_seed(config.seed, 3);
  so.exec = exec;
  so.max_runs = config.saom_max_runs;
  r.saom_fit = saom::fit_mom(train, specs, so);
  auto sdraws = saom::forward_predict(r.saom_fit.model, last, covs, config.predictive_draws,
                                      derive_seed(config.seed, 4), std::nullopt, exec);

  r.tergm_ensemble = evaluation::make_ensemble(target, std::move(tsim.draws), exec);
  r.saom_ensemble = evaluation::make_ensemble(target, std::move(sdraws), exec);
  r.tergm_roc = evaluation::roc_curve(r.tergm_ensemble);
  r.tergm_pr = evaluation::pr_curve(r.tergm_ensemble);
  r.saom_roc = evaluation::roc_curve(r.saom_ensemble);
  r.saom_pr = evaluation::pr_curve(r.saom_ensemble);
  for (auto kind : evaluation::kAllAuxKinds) {
    r.tergm_gof.push_back(evaluation::auxiliary_gof(r.tergm_ensemble, kind));
    r.saom_gof.push_back(evaluation::auxiliary_gof(r.saom_ensemble, kind));
  }
  return r;
}

}  // namespace longnet::experiments
