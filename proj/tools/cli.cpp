#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "longnet/error.hpp"
#include "longnet/evaluation.hpp"
#include "longnet/experiments.hpp"
#include "longnet/io.hpp"
#include "longnet/parallel.hpp"
#include "longnet/report.hpp"
#include "longnet/saom.hpp"
#include "longnet/svg.hpp"
#include "longnet/tergm.hpp"
#include "longnet/version.hpp"

namespace longnet::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
namespace ev = evaluation;

json envelope(const std::string& command, const json& config, std::uint64_t seed) {
  return json{{"version", kVersion}, {"command", command}, {"seed", seed}, {"config", config}};
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw ConfigError("cannot create output directory '" + dir.string() + "'");
}

std::string draw_name(std::size_t d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "draw_%04zu.csv", d + 1);
  return buf;
}

/// Writes target.csv, draw CSVs and ensemble.json into dir.
void write_ensemble(const ev::PredictionEnsemble& e, const fs::path& dir) {
  ensure_dir(dir);
  io::write_adjacency_csv(e.target, dir / "target.csv");
  json j{{"target", "target.csv"}, {"draws", json::array()}};
  for (std::size_t d = 0; d < e.draws.size(); ++d) {
    io::write_adjacency_csv(e.draws[d], dir / draw_name(d));
    j["draws"].push_back(draw_name(d));
  }
  io::write_json(j, dir / "ensemble.json");
}

ev::PredictionEnsemble read_ensemble(const fs::path& manifest, Execution exec) {
  const json j = io::read_json(manifest);
  if (!j.is_object() || !j.contains("target") || !j.contains("draws") || !j["draws"].is_array())
    throw ConfigError("ensemble manifest '" + manifest.string() + "' needs 'target' and 'draws'");
  const fs::path base = manifest.parent_path();
  DirectedNetwork target = io::read_adjacency_csv(base / j["target"].get<std::string>());
  std::vector<DirectedNetwork> draws;
  for (const auto& d : j["draws"])
    draws.push_back(io::read_adjacency_csv(base / d.get<std::string>(), target.labels()));
  return ev::make_ensemble(std::move(target), std::move(draws), exec);
}

std::vector<ev::AuxKind> parse_kinds(const std::vector<std::string>& names) {
  if (names.empty()) return {std::begin(ev::kAllAuxKinds), std::end(ev::kAllAuxKinds)};
  std::vector<ev::AuxKind> out;
  for (const auto& n : names) out.push_back(ev::parse_aux(n));
  return out;
}

std::string gof_svg(const std::vector<ev::GofTable>& tables, const std::string& model) {
  std::vector<std::string> panels;
  for (const auto& t : tables) {
    std::vector<svg::Box> boxes;
    for (const auto& b : t.bins) boxes.push_back({b.label, b.draws, b.target});
    panels.push_back(svg::boxplots(model + ": " + std::string(ev::aux_name(t.kind)), "count", boxes));
  }
  return svg::stack(panels);
}

void write_curves(const fs::path& dir, const std::vector<std::pair<std::string, ev::CurveResult>>& roc,
                  const std::vector<std::pair<std::string, ev::CurveResult>>& pr) {
  std::vector<svg::Series> a, b;
  auto label = [](const std::string& name, double auc) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " (AUC %.3f)", auc);
    return name + buf;
  };
  for (const auto& [name, c] : roc) a.push_back({label(name, c.auc), c.points});
  for (const auto& [name, c] : pr) b.push_back({label(name, c.auc), c.points});
  if (!a.empty()) io::write_text(svg::curves("ROC", "false positive rate", "true positive rate", a), dir / "roc.svg");
  if (!b.empty()) io::write_text(svg::curves("Precision-recall", "recall", "precision", b), dir / "pr.svg");
}

std::optional<ev::CurveResult> try_curve(bool roc, const ev::PredictionEnsemble& e) {
  try {
    return roc ? ev::roc_curve(e) : ev::pr_curve(e);
  } catch (const UndefinedCurveError&) {
    return std::nullopt;
  }
}

struct Globals {
  std::string out_dir;
  int threads = 0;
};

// ---- simulate-dgp ----------------------------------------------------------

struct SimulateArgs {
  std::string process;
  std::string config;
  std::vector<double> theta;
  std::uint64_t seed = 1;
};

void cmd_simulate(const SimulateArgs& a, const fs::path& out, std::ostream& os) {
  experiments::ExperimentConfig c;
  if (!a.config.empty()) c = experiments::config_from_json(io::read_json(a.config));
  else if (a.process.empty()) throw ConfigError("simulate-dgp needs --process or --config");
  if (!a.process.empty()) c.process = experiments::parse_process(a.process);
  c.validate();
  ensure_dir(out);

  experiments::ScreenedDraw draw;
  if (!a.theta.empty()) {
    if (a.theta.size() != 4) throw ConfigError("--theta needs four values");
    std::copy(a.theta.begin(), a.theta.end(), draw.theta.begin());
    draw.generated = c.process == experiments::Process::tergm_process
                         ? experiments::generate_tergm_process(draw.theta, c, a.seed)
                         : experiments::generate_saom_process(draw.theta, c, a.seed);
  } else {
    draw = experiments::sample_parameters(c, a.seed);
  }
  const fs::path manifest = io::write_panel(draw.generated.panel, out / "panel");

  json cfg = experiments::config_to_json(c);
  cfg["theta"] = a.theta.empty() ? json(nullptr) : json(a.theta);
  json r = envelope("simulate-dgp", cfg, a.seed);
  std::vector<double> densities;
  for (const auto& w : draw.generated.panel.waves()) densities.push_back(density(w));
  r["theta"] = draw.theta;
  r["screening_attempts"] = draw.attempts;
  r["screen_density"] = draw.generated.screen_density;
  r["passes_screen"] = experiments::passes_screen(c, draw.generated.screen_density);
  r["wave_densities"] = densities;
  r["degeneracy_warning"] = draw.generated.degeneracy_warning;
  r["panel_manifest"] = "panel/manifest.json";
  io::write_json(r, out / "simulate.json");
  os << "wrote " << manifest.string() << " and " << (out / "simulate.json").string() << "\n";
}

// ---- fit -------------------------------------------------------------------

struct FitArgs {
  std::string model;
  std::string panel;
  std::string terms;
  std::uint64_t seed = 1;
  std::size_t bootstrap = 200;
  double confidence = 0.95;
  int max_runs = 6;
  std::size_t phase3 = 500;
  std::string derivative = "score";
};

void cmd_fit(const FitArgs& a, const fs::path& out, std::ostream& os) {
  const NetworkPanel panel = io::read_panel_manifest(a.panel);
  const auto specs = io::parse_terms(io::read_json(a.terms));
  json cfg{{"model", a.model}, {"panel", a.panel}, {"terms", io::terms_to_json(specs)}};
  json r;
  std::string table;
  if (a.model == "tergm") {
    tergm::MpleOptions o;
    o.bootstrap_count = a.bootstrap;
    o.confidence_level = a.confidence;
    o.seed = a.seed;
    cfg["bootstrap"] = a.bootstrap;
    cfg["confidence"] = a.confidence;
    ensure_dir(out);
    const auto fit = tergm::fit_mple(panel, specs, o);
    r = envelope("fit", cfg, a.seed);
    r["fit"] = report::to_json(fit);
    table = report::coefficient_table(fit);
  } else {
    saom::MomOptions o;
    o.seed = a.seed;
    o.max_runs = a.max_runs;
    o.phase3_iterations = a.phase3;
    if (a.derivative == "fd") o.derivative = saom::DerivativeMethod::finite_differences;
    cfg["max_runs"] = a.max_runs;
    cfg["phase3_iterations"] = a.phase3;
    cfg["derivative"] = a.derivative;
    ensure_dir(out);
    const auto fit = saom::fit_mom(panel, specs, o);
    r = envelope("fit", cfg, a.seed);
    r["fit"] = report::to_json(fit);
    table = report::coefficient_table(fit);
  }
  io::write_json(r, out / "fit.json");
  io::write_text(table, out / "coefficients.txt");
  os << table << "wrote " << (out / "fit.json").string() << "\n";
}

// ---- predict ---------------------------------------------------------------

struct PredictArgs {
  std::string fit;
  std::string panel;
  std::size_t draws = 100;
  std::uint64_t seed = 1;
  std::optional<std::size_t> burn_in;
  std::optional<std::size_t> thinning;
  std::optional<double> rate;
};

void cmd_predict(const PredictArgs& a, const fs::path& out, std::ostream& os) {
  if (a.draws == 0) throw ConfigError("--draws must be at least 1");
  json fit = io::read_json(a.fit);
  if (fit.is_object() && fit.contains("fit")) fit = fit["fit"];
  const NetworkPanel panel = io::read_panel_manifest(a.panel);
  if (panel.wave_count() < 2)
    throw ConfigError("prediction needs a panel with a held-out final wave (at least two waves)");
  const std::size_t T = panel.wave_count();
  const DirectedNetwork& last = panel.wave(T - 2);
  const DirectedNetwork& target = panel.wave(T - 1);

  json cfg{{"fit", a.fit}, {"panel", a.panel}, {"draws", a.draws}};
  std::vector<DirectedNetwork> draws;
  if (!fit.is_object() || !fit.contains("model")) throw ConfigError("missing key 'model' in model file");
  if (fit["model"] == "tergm") {
    const auto model = report::tergm_model_from_json(fit);
    tergm::SamplerOptions o;
    o.burn_in = a.burn_in;
    o.thinning = a.thinning;
    o.draw_count = a.draws;
    o.seed = a.seed;
    cfg["burn_in"] = optional_json(a.burn_in);
    cfg["thinning"] = optional_json(a.thinning);
    auto sim = tergm::simulate(model, std::span<const DirectedNetwork>(&last, 1), panel.covariates(),
                               panel.vertex_count(), o);
    draws = std::move(sim.draws);
    cfg["degeneracy_warning"] = sim.degeneracy_warning;
  } else {
    const auto model = report::saom_model_from_json(fit);
    cfg["rate"] = optional_json(a.rate);
    draws = saom::forward_predict(model, last, panel.covariates(), a.draws, a.seed, a.rate);
  }
  ensure_dir(out);
  const auto ensemble = ev::make_ensemble(target, std::move(draws));
  write_ensemble(ensemble, out / "ensemble");
  io::write_matrix_csv(ensemble.tie_probabilities, out / "tie_probabilities.csv");
  json r = envelope("predict", cfg, a.seed);
  r["model"] = fit["model"];
  r["evaluation"] = report::evaluate_ensemble(ensemble);
  io::write_json(r, out / "prediction.json");
  std::vector<std::pair<std::string, ev::CurveResult>> roc, pr;
  const std::string name = fit["model"].get<std::string>();
  if (auto c = try_curve(true, ensemble)) roc.emplace_back(name, *c);
  if (auto c = try_curve(false, ensemble)) pr.emplace_back(name, *c);
  write_curves(out, roc, pr);
  if (!roc.empty()) os << "AUC-ROC " << roc.front().second.auc << "\n";
  if (!pr.empty()) os << "AUC-PR  " << pr.front().second.auc << "\n";
  os << "wrote " << (out / "prediction.json").string() << "\n";
}

// ---- gof -------------------------------------------------------------------

struct GofArgs {
  std::string ensemble;
  std::vector<std::string> kinds;
  std::string name = "model";
  bool drop_unreachable = false;
};

void cmd_gof(const GofArgs& a, const fs::path& out, std::ostream& os) {
  const auto kinds = parse_kinds(a.kinds);
  const auto e = read_ensemble(a.ensemble, Execution::parallel);
  std::vector<ev::GofTable> tables;
  const auto unreachable = a.drop_unreachable ? ev::Unreachable::drop : ev::Unreachable::bucket;
  for (auto k : kinds) tables.push_back(ev::auxiliary_gof(e, k, unreachable));
  json names = json::array();
  for (auto k : kinds) names.push_back(std::string(ev::aux_name(k)));
  json r = envelope("gof", json{{"ensemble", a.ensemble}, {"kinds", names}, {"name", a.name},
                                       {"drop_unreachable", a.drop_unreachable}}, 0);
  json t = json::array();
  for (const auto& g : tables) t.push_back(report::to_json(g));
  r["gof"] = t;
  ensure_dir(out);
  io::write_json(r, out / "gof.json");
  io::write_text(gof_svg(tables, a.name), out / "gof.svg");
  os << "wrote " << (out / "gof.json").string() << "\n";
}

// ---- compare ---------------------------------------------------------------

struct CompareArgs {
  std::string tergm;
  std::string saom;
};

void cmd_compare(const CompareArgs& a, const fs::path& out, std::ostream& os) {
  const auto te = read_ensemble(a.tergm, Execution::parallel);
  const auto se = read_ensemble(a.saom, Execution::parallel);
  if (!(te.target == se.target)) throw ConfigError("the two ensembles predict different targets");
  json r = envelope("compare", json{{"tergm", a.tergm}, {"saom", a.saom}}, 0);
  r["tergm"] = report::evaluate_ensemble(te);
  r["saom"] = report::evaluate_ensemble(se);
  std::vector<std::pair<std::string, ev::CurveResult>> roc, pr;
  const auto tr = try_curve(true, te), sr = try_curve(true, se);
  const auto tp = try_curve(false, te), sp = try_curve(false, se);
  if (tr && sr) {
    r["diff_auc_roc"] = tr->auc - sr->auc;
    roc = {{"TERGM", *tr}, {"SAOM", *sr}};
  }
  if (tp && sp) {
    r["diff_auc_pr"] = tp->auc - sp->auc;
    pr = {{"TERGM", *tp}, {"SAOM", *sp}};
  }
  json endo;
  for (auto k : ev::kAllAuxKinds) {
    const auto tg = ev::auxiliary_gof(te, k), sg = ev::auxiliary_gof(se, k);
    std::vector<double> target, tm, sm;
    for (std::size_t b = 0; b < tg.bins.size(); ++b) {
      target.push_back(tg.bins[b].target);
      tm.push_back(tg.bins[b].median);
      sm.push_back(sg.bins[b].median);
    }
    endo[std::string(ev::aux_name(k))] = ev::diff_endogenous(target, tm, sm);
  }
  r["diff_endogenous"] = endo;
  ensure_dir(out);
  io::write_json(r, out / "compare.json");
  write_curves(out, roc, pr);
  os << "wrote " << (out / "compare.json").string() << "\n";
}

// ---- experiment ------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::optional<std::size_t> replications;
  std::optional<std::uint64_t> seed;
};

void cmd_experiment(const ExperimentArgs& a, const fs::path& out, std::ostream& os) {
  auto c = experiments::config_from_json(io::read_json(a.config));
  if (a.replications) c.replication_count = *a.replications;
  if (a.seed) c.master_seed = *a.seed;
  c.validate();
  ensure_dir(out);
  const auto report = experiments::run_experiment(c);
  json r = envelope("experiment", experiments::config_to_json(c), c.master_seed);
  r.update(experiments::report_to_json(report));
  io::write_json(r, out / "experiment.json");

  std::vector<double> roc_t, roc_s, pr_t, pr_s;
  std::vector<std::vector<double>> endo(std::size(ev::kAllAuxKinds));
  for (const auto& rec : report.replications) {
    if (!rec.ok) continue;
    roc_t.push_back(rec.tergm.auc_roc);
    roc_s.push_back(rec.saom.auc_roc);
    pr_t.push_back(rec.tergm.auc_pr);
    pr_s.push_back(rec.saom.auc_pr);
    for (std::size_t k = 0; k < endo.size(); ++k) endo[k].push_back(rec.diff_endogenous[k]);
  }
  const std::string proc(experiments::process_name(c.process));
  io::write_text(svg::stack({svg::boxplots("AUC-ROC, " + proc, "AUC", {{"TERGM", roc_t, {}}, {"SAOM", roc_s, {}}}),
                             svg::boxplots("AUC-PR, " + proc, "AUC", {{"TERGM", pr_t, {}}, {"SAOM", pr_s, {}}})}),
                 out / "auc.svg");
  std::vector<svg::Box> boxes;
  for (std::size_t k = 0; k < endo.size(); ++k)
    boxes.push_back({std::string(ev::aux_name(ev::kAllAuxKinds[k])), endo[k], {}});
  io::write_text(svg::boxplots("diff_endogenous, " + proc, "difference", boxes, 0.0),
                 out / "diff_endogenous.svg");

  const auto& g = report.aggregate;
  os << proc << ": " << g.successful << " successful, " << g.failed << " failed replications\n";
  if (g.successful > 0)
    os << "mean AUC-ROC TERGM " << g.mean_auc_roc_tergm << " SAOM " << g.mean_auc_roc_saom
       << "; mean AUC-PR TERGM " << g.mean_auc_pr_tergm << " SAOM " << g.mean_auc_pr_saom << "\n";
  os << "wrote " << (out / "experiment.json").string() << "\n";
}

// ---- replicate-knecht ------------------------------------------------------

struct KnechtArgs {
  std::string panel;
  experiments::KnechtConfig config;
};

void cmd_knecht(const KnechtArgs& a, const fs::path& out, std::ostream& os) {
  const NetworkPanel panel = io::read_panel_manifest(a.panel);
  const auto& c = a.config;
  json cfg{{"panel", a.panel},
           {"sex_covariate", c.sex_covariate},
           {"school_covariate", c.school_covariate},
           {"predictive_draws", c.predictive_draws},
           {"bootstrap_count", c.bootstrap_count},
           {"sampler_burn_in", optional_json(c.sampler_burn_in)},
           {"sampler_thinning", optional_json(c.sampler_thinning)},
           {"saom_max_runs", c.saom_max_runs}};
  ensure_dir(out);
  const auto k = experiments::replicate_knecht(panel, c);
  json r = envelope("replicate-knecht", cfg, c.seed);
  r["vertex_count"] = panel.vertex_count();
  r["wave_count"] = panel.wave_count();
  r["tergm_fit"] = report::to_json(k.tergm_fit);
  r["saom_fit"] = report::to_json(k.saom_fit);
  r["tergm_prediction"] = report::evaluate_ensemble(k.tergm_ensemble);
  r["saom_prediction"] = report::evaluate_ensemble(k.saom_ensemble);
  io::write_json(r, out / "knecht.json");
  const std::string tables = report::coefficient_table(k.tergm_fit) + "\n" + report::coefficient_table(k.saom_fit);
  io::write_text(tables, out / "coefficients.txt");
  write_curves(out, {{"TERGM", k.tergm_roc}, {"SAOM", k.saom_roc}}, {{"TERGM", k.tergm_pr}, {"SAOM", k.saom_pr}});
  io::write_text(gof_svg(k.tergm_gof, "TERGM"), out / "gof_tergm.svg");
  io::write_text(gof_svg(k.saom_gof, "SAOM"), out / "gof_saom.svg");
  os << tables << "AUC-ROC TERGM " << k.tergm_roc.auc << " SAOM " << k.saom_roc.auc << "\n"
     << "AUC-PR  TERGM " << k.tergm_pr.auc << " SAOM " << k.saom_pr.auc << "\n"
     << "wrote " << (out / "knecht.json").string() << "\n";
}

void write_error(const fs::path& out, const std::string& command, const std::string& kind,
                 const std::string& message) {
  if (command.empty()) return;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) return;
  json r{{"version", kVersion}, {"command", command}, {"error", {{"kind", kind}, {"message", message}}}};
  std::ofstream f(out / "error.json");
  if (f) f << r.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Longitudinal network models: TERGM (pseudolikelihood) and SAOM (method of moments) "
               "fitting, out-of-sample prediction and comparison.",
               "longnet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  app.footer(
      "Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.\n"
      "The default output directory is $LONGNET_OUT, else ./longnet_out.");

  Globals g;
  const char* env_out = std::getenv("LONGNET_OUT");
  g.out_dir = env_out && *env_out ? env_out : "longnet_out";
  app.add_option("-o,--out", g.out_dir, "Output directory (default: $LONGNET_OUT or ./longnet_out)");
  app.add_option("--threads", g.threads, "Worker thread cap (default: machine parallelism)")
      ->check(CLI::PositiveNumber);
  app.fallthrough();

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate-dgp", "Generate a screened panel from the TERGM or SAOM process");
  s->add_option("--process", sim.process, "tergm_process or saom_process")
      ->check(CLI::IsMember({"tergm_process", "saom_process"}));
  s->add_option("--config", sim.config, "Experiment config JSON (vertex count, waves, screen, rate)")
      ->check(CLI::ExistingFile);
  s->add_option("--theta", sim.theta, "Four parameters; skips sampling and screening")->delimiter(',');
  s->add_option("--seed", sim.seed, "Random seed")->capture_default_str();

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit a TERGM by MPLE or a SAOM by method of moments");
  f->add_option("--model", fit.model, "tergm or saom")->required()->check(CLI::IsMember({"tergm", "saom"}));
  f->add_option("--panel", fit.panel, "Panel manifest JSON")->required()->check(CLI::ExistingFile);
  f->add_option("--terms", fit.terms, "Model terms JSON")->required()->check(CLI::ExistingFile);
  f->add_option("--seed", fit.seed, "Random seed")->capture_default_str();
  f->add_option("--bootstrap", fit.bootstrap, "TERGM bootstrap replicates")->capture_default_str();
  f->add_option("--confidence", fit.confidence, "TERGM interval level")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  f->add_option("--max-runs", fit.max_runs, "SAOM estimation runs before giving up on convergence")
      ->check(CLI::PositiveNumber)->capture_default_str();
  f->add_option("--phase3", fit.phase3, "SAOM phase 3 simulations")->capture_default_str();
  f->add_option("--derivative", fit.derivative, "SAOM derivative estimator: score or fd")
      ->check(CLI::IsMember({"score", "fd"}))->capture_default_str();

  PredictArgs pred;
  auto* p = app.add_subcommand("predict", "Simulate the held-out final wave from a fitted model");
  p->add_option("--fit", pred.fit, "fit.json written by the fit command")->required()->check(CLI::ExistingFile);
  p->add_option("--panel", pred.panel, "Panel manifest; its final wave is the target")
      ->required()->check(CLI::ExistingFile);
  p->add_option("--draws", pred.draws, "Predictive draws")->capture_default_str();
  p->add_option("--seed", pred.seed, "Random seed")->capture_default_str();
  p->add_option("--burn-in", pred.burn_in, "TERGM sampler burn-in (default 10 n^2)");
  p->add_option("--thinning", pred.thinning, "TERGM sampler thinning (default n^2)");
  p->add_option("--rate", pred.rate, "SAOM rate for the predicted period (default: last fitted rate)");

  GofArgs gof;
  auto* o = app.add_subcommand("gof", "Auxiliary-statistic goodness of fit of a prediction ensemble");
  o->add_option("--ensemble", gof.ensemble, "ensemble.json written by predict")
      ->required()->check(CLI::ExistingFile);
  o->add_option("--kinds", gof.kinds,
                "Subset of indegree,outdegree,edgewise_sp,dyadwise_sp,geodesic (default all)")
      ->delimiter(',');
  o->add_option("--name", gof.name, "Model name used in figure titles")->capture_default_str();
  o->add_flag("--drop-unreachable", gof.drop_unreachable,
              "Omit unreachable pairs from the geodesic distribution instead of an 'inf' bin");

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Compare TERGM and SAOM ensembles predicting the same wave");
  c->add_option("--tergm", cmp.tergm, "TERGM ensemble.json")->required()->check(CLI::ExistingFile);
  c->add_option("--saom", cmp.saom, "SAOM ensemble.json")->required()->check(CLI::ExistingFile);

  ExperimentArgs exp;
  auto* e = app.add_subcommand("experiment", "Run a simulation study comparing both models");
  e->add_option("--config", exp.config, "Experiment config JSON (\"process\" is required)")
      ->required()->check(CLI::ExistingFile);
  e->add_option("--replications", exp.replications, "Override replication_count");
  e->add_option("--seed", exp.seed, "Override master_seed");

  KnechtArgs kn;
  auto* k = app.add_subcommand("replicate-knecht",
                               "Fit both models to waves 1..T-1 of a classroom panel and predict wave T");
  k->add_option("--panel", kn.panel, "Panel manifest with sex and primary-school covariates")
      ->required()->check(CLI::ExistingFile);
  k->add_option("--sex", kn.config.sex_covariate, "Vertex covariate coding sex")->capture_default_str();
  k->add_option("--school", kn.config.school_covariate, "Covariate coding shared primary school")
      ->capture_default_str();
  k->add_option("--draws", kn.config.predictive_draws, "Predictive draws per model")->capture_default_str();
  k->add_option("--bootstrap", kn.config.bootstrap_count, "TERGM bootstrap replicates")->capture_default_str();
  k->add_option("--seed", kn.config.seed, "Random seed")->capture_default_str();
  k->add_option("--burn-in", kn.config.sampler_burn_in, "TERGM sampler burn-in (default 10 n^2)");
  k->add_option("--thinning", kn.config.sampler_thinning, "TERGM sampler thinning (default n^2)");
  k->add_option("--max-runs", kn.config.saom_max_runs, "SAOM estimation runs")->capture_default_str();

  std::vector<const char*> argv{"longnet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const fs::path out_dir = g.out_dir;
  std::string command;
  if (g.threads > 0) set_threads(g.threads);
  try {
    if (s->parsed()) command = "simulate-dgp", cmd_simulate(sim, out_dir, out);
    else if (f->parsed()) command = "fit", cmd_fit(fit, out_dir, out);
    else if (p->parsed()) command = "predict", cmd_predict(pred, out_dir, out);
    else if (o->parsed()) command = "gof", cmd_gof(gof, out_dir, out);
    else if (c->parsed()) command = "compare", cmd_compare(cmp, out_dir, out);
    else if (e->parsed()) command = "experiment", cmd_experiment(exp, out_dir, out);
    else if (k->parsed()) command = "replicate-knecht", cmd_knecht(kn, out_dir, out);
  } catch (const NumericalError& ex) {
    err << "numerical failure: " << ex.what() << "\n";
    write_error(out_dir, command, "numerical", ex.what());
    return kExitNumerical;
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << "\n";
    write_error(out_dir, command, "config", ex.what());
    return kExitConfig;
  } catch (const fs::filesystem_error& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& ex) {
    err << "error: malformed JSON input: " << ex.what() << "\n";
    write_error(out_dir, command, "config", ex.what());
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace longnet::cli
