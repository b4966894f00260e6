#include "longnet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "longnet/error.hpp"
#include "longnet/numeric.hpp"

namespace longnet::evaluation {

DyadMatrix tie_probabilities(std::span<const DirectedNetwork> draws, Execution exec) {
  if (draws.empty()) throw ConfigError("an ensemble needs at least one draw");
  const std::size_t n = draws.front().size();
  DyadMatrix probs(n);
  parallel_for(n, exec, [&](std::size_t i) {
    for (const auto& d : draws) {
      auto row = d.row(i);
      for (std::size_t j = 0; j < n; ++j) probs(i, j) += row[j];
    }
    for (std::size_t j = 0; j < n; ++j) probs(i, j) /= static_cast<double>(draws.size());
    probs(i, i) = 0.0;
  });
  return probs;
}

PredictionEnsemble make_ensemble(DirectedNetwork target, std::vector<DirectedNetwork> draws,
                                 Execution exec) {
  if (draws.empty()) throw ConfigError("an ensemble needs at least one draw");
  for (std::size_t d = 0; d < draws.size(); ++d) {
    if (draws[d].size() != target.size() || draws[d].labels() != target.labels())
      throw ConfigError("draw " + std::to_string(d) + " does not share the target's vertex set");
  }
  PredictionEnsemble e;
  e.tie_probabilities = tie_probabilities(draws, exec);
  e.target = std::move(target);
  e.draws = std::move(draws);
  return e;
}

double trapezoid(const std::vector<std::pair<double, double>>& points) {
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k)
    area += (points[k].first - points[k - 1].first) * (points[k].second + points[k - 1].second) / 2.0;
  return area;
}

namespace {

struct Step {
  std::size_t tp = 0;
  std::size_t fp = 0;
};

/// Cumulative (tp, fp) after each group of equal scores, highest score first.
std::vector<Step> sweep(std::span<const double> scores, std::span<const std::uint8_t> labels,
                        std::size_t& positives, std::size_t& negatives) {
  if (scores.size() != labels.size()) throw ConfigError("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  positives = 0;
  for (auto l : labels) positives += l ? 1 : 0;
  negatives = labels.size() - positives;
  std::vector<Step> steps;
  Step cur;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]])
      ++cur.tp;
    else
      ++cur.fp;
    if (k + 1 == order.size() || scores[order[k + 1]] != scores[order[k]]) steps.push_back(cur);
  }
  return steps;
}

}  // namespace

CurveResult roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  std::size_t pos = 0, neg = 0;
  const auto steps = sweep(scores, labels, pos, neg);
  if (pos == 0 || neg == 0)
    throw UndefinedCurveError("ROC curve is undefined: the target needs both tied and untied dyads");
  CurveResult r;
  r.points.emplace_back(0.0, 0.0);
  for (const auto& s : steps)
    r.points.emplace_back(static_cast<double>(s.fp) / static_cast<double>(neg),
                          static_cast<double>(s.tp) / static_cast<double>(pos));
  r.auc = trapezoid(r.points);
  return r;
}

CurveResult pr_curve(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  std::size_t pos = 0, neg = 0;
  const auto steps = sweep(scores, labels, pos, neg);
  if (pos == 0) throw UndefinedCurveError("PR curve is undefined: the target has no ties");
  CurveResult r;
  for (const auto& s : steps) {
    const double recall = static_cast<double>(s.tp) / static_cast<double>(pos);
    const double precision = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
    if (r.points.empty()) r.points.emplace_back(0.0, precision);
    r.points.emplace_back(recall, precision);
  }
  r.auc = trapezoid(r.points);
  return r;
}

std::pair<std::vector<double>, std::vector<std::uint8_t>> dyad_scores(const PredictionEnsemble& e) {
  const std::size_t n = e.target.size();
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  scores.reserve(n * n);
  labels.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      scores.push_back(e.tie_probabilities(i, j));
      labels.push_back(e.target.tie(i, j) ? 1 : 0);
    }
  return {std::move(scores), std::move(labels)};
}

CurveResult roc_curve(const PredictionEnsemble& ensemble) {
  const auto [s, l] = dyad_scores(ensemble);
  return roc_curve(s, l);
}

CurveResult pr_curve(const PredictionEnsemble& ensemble) {
  const auto [s, l] = dyad_scores(ensemble);
  return pr_curve(s, l);
}

std::string_view aux_name(AuxKind kind) noexcept {
  switch (kind) {
    case AuxKind::indegree: return "indegree";
    case AuxKind::outdegree: return "outdegree";
    case AuxKind::edgewise_sp: return "edgewise_sp";
    case AuxKind::dyadwise_sp: return "dyadwise_sp";
    case AuxKind::geodesic: return "geodesic";
  }
  return "unknown";
}

AuxKind parse_aux(std::string_view name) {
  for (auto k : kAllAuxKinds)
    if (aux_name(k) == name) return k;
  throw ConfigError("unknown auxiliary statistic '" + std::string(name) + "'");
}

namespace {

std::vector<double> to_doubles(const Histogram& h) { return std::vector<double>(h.begin(), h.end()); }

std::vector<std::string> bin_labels(AuxKind kind, std::size_t n, Unreachable unreachable) {
  std::vector<std::string> labels;
  switch (kind) {
    case AuxKind::indegree:
    case AuxKind::outdegree:
      for (std::size_t d = 0; d < n; ++d) labels.push_back(std::to_string(d));
      break;
    case AuxKind::edgewise_sp:
    case AuxKind::dyadwise_sp:
      for (std::size_t d = 0; d + 1 < n; ++d) labels.push_back(std::to_string(d));
      break;
    case AuxKind::geodesic:
      for (std::size_t d = 1; d < n; ++d) labels.push_back(std::to_string(d));
      if (unreachable == Unreachable::bucket) labels.emplace_back("inf");
      break;
  }
  return labels;
}

}  // namespace

std::vector<double> auxiliary_counts(const DirectedNetwork& net, AuxKind kind, Unreachable unreachable) {
  switch (kind) {
    case AuxKind::indegree: return to_doubles(degree_distributions(net).indegree);
    case AuxKind::outdegree: return to_doubles(degree_distributions(net).outdegree);
    case AuxKind::edgewise_sp: return to_doubles(shared_partner_distributions(net).edgewise);
    case AuxKind::dyadwise_sp: return to_doubles(shared_partner_distributions(net).dyadwise);
    case AuxKind::geodesic: {
      const auto g = geodesic_distribution(net);
      std::vector<double> out;
      for (std::size_t d = 1; d < g.finite.size(); ++d) out.push_back(static_cast<double>(g.finite[d]));
      if (unreachable == Unreachable::bucket) out.push_back(static_cast<double>(g.unreachable));
      return out;
    }
  }
  return {};
}

GofTable auxiliary_gof(const PredictionEnsemble& ensemble, AuxKind kind, Unreachable unreachable) {
  if (ensemble.draws.empty()) throw ConfigError("an ensemble needs at least one draw");
  const auto labels = bin_labels(kind, ensemble.target.size(), unreachable);
  const auto target = auxiliary_counts(ensemble.target, kind, unreachable);
  GofTable table;
  table.kind = kind;
  table.bins.resize(labels.size());
  for (std::size_t b = 0; b < labels.size(); ++b) {
    table.bins[b].label = labels[b];
    table.bins[b].target = b < target.size() ? target[b] : 0.0;
    table.bins[b].draws.reserve(ensemble.draws.size());
  }
  for (const auto& d : ensemble.draws) {
    const auto counts = auxiliary_counts(d, kind, unreachable);
    for (std::size_t b = 0; b < labels.size(); ++b)
      table.bins[b].draws.push_back(b < counts.size() ? counts[b] : 0.0);
  }
  for (auto& bin : table.bins) bin.median = median(bin.draws);
  return table;
}

double diff_auc(std::span<const double> tergm_aucs, std::span<const double> saom_aucs) {
  if (tergm_aucs.size() != saom_aucs.size())
    throw ConfigError("diff_auc needs paired lists of equal length");
  if (tergm_aucs.empty()) throw ConfigError("diff_auc needs at least one pair");
  double sum = 0.0;
  for (std::size_t s = 0; s < tergm_aucs.size(); ++s) sum += tergm_aucs[s] - saom_aucs[s];
  return sum / static_cast<double>(tergm_aucs.size());
}

double diff_endogenous(std::span<const double> target, std::span<const double> tergm_medians,
                       std::span<const double> saom_medians) {
  if (target.size() != tergm_medians.size() || target.size() != saom_medians.size())
    throw ConfigError("diff_endogenous needs lists of equal length");
  if (target.empty()) throw ConfigError("diff_endogenous needs at least one bin");
  double sum = 0.0;
  for (std::size_t s = 0; s < target.size(); ++s)
    sum += std::abs(tergm_medians[s] - target[s]) - std::abs(saom_medians[s] - target[s]);
  return sum / static_cast<double>(target.size());
}

TTest two_sample_t(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) throw ConfigError("each sample needs at least two values");
  const double vx = variance(x) / static_cast<double>(x.size());
  const double vy = variance(y) / static_cast<double>(y.size());
  const double se2 = vx + vy;
  if (!(se2 > 0.0)) throw UndefinedTestError("t-test is undefined: both samples have zero variance");
  TTest r;
  r.t = (mean(x) - mean(y)) / std::sqrt(se2);
  r.df = se2 * se2 /
         (vx * vx / static_cast<double>(x.size() - 1) + vy * vy / static_cast<double>(y.size() - 1));
  const boost::math::students_t dist(r.df);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  r.p = std::min(1.0, r.p);
  return r;
}

double one_sided_p_greater(const TTest& test) {
  const boost::math::students_t dist(test.df);
  return boost::math::cdf(boost::math::complement(dist, test.t));
}

}  // namespace longnet::evaluation
