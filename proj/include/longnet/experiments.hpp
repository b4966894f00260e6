#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "longnet/evaluation.hpp"
#include "longnet/network.hpp"
#include "longnet/parallel.hpp"
#include "longnet/rng.hpp"
#include "longnet/saom.hpp"
#include "longnet/statistics.hpp"
#include "longnet/tergm.hpp"

namespace longnet::experiments {

enum class Process { tergm_process, saom_process };

std::string_view process_name(Process p) noexcept;
Process parse_process(std::string_view name);

/// Defaults are desk scale; the full study uses 100 replications.
struct ExperimentConfig {
  Process process = Process::tergm_process;
  std::size_t replication_count = 30;
  std::size_t vertex_count = 20;
  std::size_t wave_count = 6;  ///< generated waves including the dropped first one
  std::size_t predictive_draws = 10;
  double density_lower = 0.03;
  double density_upper = 0.97;
  double parameter_min = -3.0;
  double parameter_max = 3.0;
  double parameter_step = 0.001;
  double saom_rate = 40.0;
  std::uint64_t master_seed = 1;
  std::size_t max_screening_attempts = 1000;

  std::size_t tergm_bootstrap_count = 100;
  std::optional<std::size_t> sampler_burn_in;   ///< default 10 n^2
  std::optional<std::size_t> sampler_thinning;  ///< default n^2
  std::size_t saom_phase3_iterations = 500;
  int saom_max_runs = 2;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Every key is optional except "process"; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

using Theta = std::array<double, 4>;

/// One uniform draw per component from the grid min, min + step, ..., max.
Theta draw_theta(const ExperimentConfig& config, Rng& rng);

struct GeneratedPanel {
  NetworkPanel panel;          ///< retained waves (wave_count - 1)
  double screen_density = 0.0;  ///< density of the first generated wave
  bool degeneracy_warning = false;
};

/// ERGM draw from (edges, reciprocity, transitive triplets) = theta[0..2], then
/// forward TERGM steps adding memory_stability = theta[3]; the ERGM draw is
/// dropped. The screen is applied to the ERGM draw.
GeneratedPanel generate_tergm_process(const Theta& theta, const ExperimentConfig& config,
                                      std::uint64_t seed);

/// SAOM periods from the empty network with objective (edges, reciprocity,
/// transitive triplets) = theta[0..2] at the configured rate; the empty start is
/// dropped. theta[3] is unused. The screen is applied to the end of period 1.
GeneratedPanel generate_saom_process(const Theta& theta, const ExperimentConfig& config,
                                     std::uint64_t seed);

struct ScreenedDraw {
  Theta theta{};
  std::size_t attempts = 0;
  GeneratedPanel generated;
};

/// Draws theta and generates a panel until the screen passes. Throws
/// ScreeningExhaustedError after max_screening_attempts consecutive rejections.
ScreenedDraw sample_parameters(const ExperimentConfig& config, std::uint64_t seed);

bool passes_screen(const ExperimentConfig& config, double density) noexcept;

struct ModelOutcome {
  std::vector<std::string> names;
  std::vector<double> estimates;
  std::vector<std::string> warnings;
  double auc_roc = 0.0;
  double auc_pr = 0.0;
  /// Per auxiliary kind, bin medians of the predictive draws.
  std::vector<std::vector<double>> gof_medians;
};

struct ReplicationRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string failure;
  Theta theta{};
  std::size_t screening_attempts = 0;
  std::vector<double> wave_densities;
  bool degeneracy_warning = false;
  ModelOutcome tergm;
  ModelOutcome saom;
  std::vector<std::vector<double>> gof_target;  ///< per auxiliary kind
  std::vector<double> diff_endogenous;          ///< per auxiliary kind
};

struct QuartileSummary {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  bool includes_zero = false;
};

struct Aggregate {
  std::size_t successful = 0;
  std::size_t failed = 0;
  double mean_auc_roc_tergm = 0.0;
  double mean_auc_roc_saom = 0.0;
  double mean_auc_pr_tergm = 0.0;
  double mean_auc_pr_saom = 0.0;
  double diff_auc_roc = 0.0;
  double diff_auc_pr = 0.0;
  std::optional<evaluation::TTest> t_roc;
  std::optional<evaluation::TTest> t_pr;
  std::optional<double> p_roc_greater;  ///< one-sided, TERGM > SAOM
  std::optional<double> p_pr_greater;
  std::vector<QuartileSummary> diff_endogenous;  ///< per auxiliary kind
  std::vector<std::string> notes;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReplicationRecord> replications;
  Aggregate aggregate;
};

/// Fits both models on waves 1..T-1 of a retained panel, predicts wave T and
/// evaluates both ensembles. Failures are returned in the record.
ReplicationRecord run_replication(const ExperimentConfig& config, std::size_t index);

/// Replications run in parallel with seeds derived from master_seed by index.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                Execution exec = Execution::parallel);

Aggregate aggregate(const std::vector<ReplicationRecord>& records);

nlohmann::json report_to_json(const ExperimentReport& report);

/// Settings of the real-data replication.
struct KnechtConfig {
  std::string sex_covariate = "sex";
  std::string school_covariate = "primary";
  std::size_t predictive_draws = 100;
  std::size_t bootstrap_count = 500;
  std::uint64_t seed = 1;
  std::optional<std::size_t> sampler_burn_in;
  std::optional<std::size_t> sampler_thinning;
  int saom_max_runs = 6;
};

/// Model specification shared by both models (the TERGM adds memory_stability).
std::vector<StatisticSpec> knecht_specification(const KnechtConfig& config);

struct KnechtReport {
  KnechtConfig config;
  tergm::TergmFit tergm_fit;
  saom::SaomFit saom_fit;
  evaluation::PredictionEnsemble tergm_ensemble;
  evaluation::PredictionEnsemble saom_ensemble;
  evaluation::CurveResult tergm_roc, tergm_pr, saom_roc, saom_pr;
  std::vector<evaluation::GofTable> tergm_gof, saom_gof;
};

/// Fits both models on the first T-1 waves and predicts the final wave.
/// Throws ConfigError when the covariates are missing.
KnechtReport replicate_knecht(const NetworkPanel& panel, const KnechtConfig& config,
                              Execution exec = Execution::parallel);

}  // namespace longnet::experiments
