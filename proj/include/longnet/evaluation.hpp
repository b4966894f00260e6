#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "longnet/network.hpp"
#include "longnet/parallel.hpp"

namespace longnet::evaluation {

/// Per-dyad fraction of draws containing the tie. Diagonal entries are 0.
DyadMatrix tie_probabilities(std::span<const DirectedNetwork> draws,
                             Execution exec = Execution::parallel);

struct PredictionEnsemble {
  DirectedNetwork target;
  std::vector<DirectedNetwork> draws;
  DyadMatrix tie_probabilities;
};

/// Throws ConfigError if draws is empty or a draw's vertex set differs from the target's.
PredictionEnsemble make_ensemble(DirectedNetwork target, std::vector<DirectedNetwork> draws,
                                 Execution exec = Execution::parallel);

struct CurveResult {
  std::vector<std::pair<double, double>> points;
  double auc = 0.0;
};

/// Area under a piecewise-linear curve.
double trapezoid(const std::vector<std::pair<double, double>>& points);

/// Curves over a threshold sweep of the distinct scores, highest first. Equal
/// scores enter as one step. ROC plots (false-positive rate, true-positive rate)
/// from (0, 0) to (1, 1); PR plots (recall, precision) starting at recall 0 with
/// the precision of the first step.
CurveResult roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels);
CurveResult pr_curve(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Scores and labels of all off-diagonal dyads, row-major.
std::pair<std::vector<double>, std::vector<std::uint8_t>> dyad_scores(const PredictionEnsemble& e);

CurveResult roc_curve(const PredictionEnsemble& ensemble);
CurveResult pr_curve(const PredictionEnsemble& ensemble);

enum class AuxKind { indegree, outdegree, edgewise_sp, dyadwise_sp, geodesic };

inline constexpr AuxKind kAllAuxKinds[] = {AuxKind::indegree, AuxKind::outdegree,
                                           AuxKind::edgewise_sp, AuxKind::dyadwise_sp,
                                           AuxKind::geodesic};

std::string_view aux_name(AuxKind kind) noexcept;
AuxKind parse_aux(std::string_view name);

struct GofBin {
  std::string label;
  std::vector<double> draws;
  double median = 0.0;
  double target = 0.0;
};

struct GofTable {
  AuxKind kind = AuxKind::indegree;
  std::vector<GofBin> bins;
};

/// Treatment of unreachable ordered pairs in the geodesic distribution.
enum class Unreachable { bucket, drop };

/// Bin counts of one auxiliary distribution. Geodesic bins are distances
/// 1..n-1, followed by an "inf" bin under Unreachable::bucket.
std::vector<double> auxiliary_counts(const DirectedNetwork& net, AuxKind kind,
                                     Unreachable unreachable = Unreachable::bucket);

GofTable auxiliary_gof(const PredictionEnsemble& ensemble, AuxKind kind,
                       Unreachable unreachable = Unreachable::bucket);

/// Mean of the paired differences a_s - b_s.
double diff_auc(std::span<const double> tergm_aucs, std::span<const double> saom_aucs);

/// Mean over s of |b_s - a_s| - |c_s - a_s|. Positive when c (SAOM) is closer to a.
double diff_endogenous(std::span<const double> target, std::span<const double> tergm_medians,
                       std::span<const double> saom_medians);

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  ///< two-sided
};

/// Welch two-sample t-test. Throws UndefinedTestError when both samples have
/// zero variance, ConfigError when a sample has fewer than two values.
TTest two_sample_t(std::span<const double> x, std::span<const double> y);

/// p-value for the alternative mean(x) > mean(y).
double one_sided_p_greater(const TTest& test);

}  // namespace longnet::evaluation
