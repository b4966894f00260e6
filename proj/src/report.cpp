#include "longnet/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "longnet/error.hpp"
#include "longnet/io.hpp"

namespace longnet::report {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string("missing key '") + key + "' in model file");
  return j.at(key);
}

std::vector<double> numbers(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_array()) throw ConfigError(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string("'") + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::string> labels(const std::vector<StatisticSpec>& specs) {
  std::vector<std::string> out;
  for (const auto& s : specs) out.push_back(s.label());
  return out;
}

std::string fixed(double v, int digits = 4) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

json to_json(const tergm::TergmFit& fit) {
  json j;
  j["model"] = "tergm";
  j["statistics"] = io::terms_to_json(fit.model.statistics);
  j["labels"] = labels(fit.model.statistics);
  j["theta"] = fit.model.theta;
  j["lag_depth"] = fit.model.lag_depth;
  j["confidence_level"] = fit.confidence_level;
  json ci = json::array();
  for (const auto& [lo, hi] : fit.confidence_intervals) ci.push_back({lo, hi});
  j["confidence_intervals"] = ci;
  j["bootstrap_se"] = fit.bootstrap_se;
  j["bootstrap_replicates"] = fit.bootstrap_replicates;
  j["bootstrap_failures"] = fit.bootstrap_failures;
  j["n_obs"] = fit.n_obs;
  j["modeled_waves"] = fit.modeled_waves;
  j["log_pseudolikelihood"] = fit.log_likelihood;
  j["gradient_norm"] = fit.gradient_norm;
  j["newton_iterations"] = fit.iterations;
  return j;
}

json to_json(const saom::SaomFit& fit) {
  json j;
  j["model"] = "saom";
  j["statistics"] = io::terms_to_json(fit.model.statistics);
  j["labels"] = labels(fit.model.statistics);
  j["beta"] = fit.model.beta;
  j["rates"] = fit.model.rates;
  j["se_beta"] = fit.se_beta;
  j["se_rates"] = fit.se_rates;
  j["parameter_names"] = fit.parameter_names;
  j["t_ratios"] = fit.t_ratios;
  j["max_abs_t"] = fit.max_abs_t;
  j["converged"] = fit.converged;
  j["warnings"] = fit.warnings;
  j["observed_moments"] = fit.observed;
  j["simulated_mean"] = fit.simulated_mean;
  j["simulated_sd"] = fit.simulated_sd;
  j["derivative"] = fit.derivative;
  j["covariance"] = fit.covariance;
  j["phase2_iterations"] = fit.phase2_iterations;
  j["runs"] = fit.runs;
  return j;
}

tergm::TergmModel tergm_model_from_json(const json& j) {
  if (require(j, "model") != "tergm") throw ConfigError("model file is not a TERGM fit");
  tergm::TergmModel m;
  m.statistics = io::parse_terms(require(j, "statistics"));
  m.theta = numbers(j, "theta");
  if (j.contains("lag_depth")) m.lag_depth = j.at("lag_depth").get<int>();
  m.validate();
  return m;
}

saom::SaomModel saom_model_from_json(const json& j) {
  if (require(j, "model") != "saom") throw ConfigError("model file is not a SAOM fit");
  saom::SaomModel m;
  m.statistics = io::parse_terms(require(j, "statistics"));
  m.beta = numbers(j, "beta");
  m.rates = numbers(j, "rates");
  m.validate();
  return m;
}

json to_json(const evaluation::CurveResult& curve) {
  json pts = json::array();
  for (const auto& [x, y] : curve.points) pts.push_back({x, y});
  return json{{"auc", curve.auc}, {"points", pts}};
}

json to_json(const evaluation::GofTable& table) {
  json bins = json::array();
  for (const auto& b : table.bins)
    bins.push_back({{"bin", b.label}, {"target", b.target}, {"median", b.median}, {"draws", b.draws}});
  return json{{"statistic", std::string(evaluation::aux_name(table.kind))}, {"bins", bins}};
}

json to_json(const evaluation::TTest& test) {
  return json{{"t", test.t}, {"df", test.df}, {"p_two_sided", test.p},
              {"p_greater", evaluation::one_sided_p_greater(test)}};
}

json evaluate_ensemble(const evaluation::PredictionEnsemble& ensemble) {
  json j;
  j["draw_count"] = ensemble.draws.size();
  j["target_density"] = density(ensemble.target);
  try {
    j["roc"] = to_json(evaluation::roc_curve(ensemble));
  } catch (const UndefinedCurveError& e) {
    j["roc"] = json{{"error", e.what()}};
  }
  try {
    j["pr"] = to_json(evaluation::pr_curve(ensemble));
  } catch (const UndefinedCurveError& e) {
    j["pr"] = json{{"error", e.what()}};
  }
  json gof = json::array();
  for (auto kind : evaluation::kAllAuxKinds) gof.push_back(to_json(evaluation::auxiliary_gof(ensemble, kind)));
  j["gof"] = gof;
  return j;
}

std::string coefficient_table(const tergm::TergmFit& fit) {
  std::ostringstream out;
  const int pct = static_cast<int>(std::lround(fit.confidence_level * 100.0));
  out << "TERGM (MPLE, " << fit.n_obs << " dyad-wave observations, " << fit.bootstrap_replicates.size()
      << " bootstrap replicates)\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %10s %10s %22s\n", "term", "estimate", "boot.se",
                (std::to_string(pct) + "% percentile CI").c_str());
  out << line;
  for (std::size_t k = 0; k < fit.model.theta.size(); ++k) {
    const auto& ci = fit.confidence_intervals[k];
    std::snprintf(line, sizeof line, "%-34s %10s %10s %22s\n", fit.model.statistics[k].label().c_str(),
                  fixed(fit.model.theta[k]).c_str(), fixed(fit.bootstrap_se[k]).c_str(),
                  ("[" + fixed(ci.first) + ", " + fixed(ci.second) + "]").c_str());
    out << line;
  }
  return out.str();
}

std::string coefficient_table(const saom::SaomFit& fit) {
  std::ostringstream out;
  out << "SAOM (method of moments, " << fit.runs << " run(s), max |t| = " << fixed(fit.max_abs_t, 3)
      << (fit.converged ? ", converged" : ", not converged") << ")\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %10s %10s %10s\n", "parameter", "estimate", "s.e.", "t-ratio");
  out << line;
  const std::size_t R = fit.model.rates.size();
  for (std::size_t k = 0; k < fit.parameter_names.size(); ++k) {
    const double est = k < R ? fit.model.rates[k] : fit.model.beta[k - R];
    const double se = k < R ? fit.se_rates[k] : fit.se_beta[k - R];
    std::snprintf(line, sizeof line, "%-34s %10s %10s %10s\n", fit.parameter_names[k].c_str(),
                  fixed(est).c_str(), fixed(se).c_str(), fixed(fit.t_ratios[k], 3).c_str());
    out << line;
  }
  for (const auto& w : fit.warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace longnet::report
