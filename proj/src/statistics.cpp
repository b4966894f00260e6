#include "longnet/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "longnet/error.hpp"

namespace longnet {

namespace {

struct KindName {
  StatKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 16> kKindNames{{
    {StatKind::edges, "edges"},
    {StatKind::reciprocity, "reciprocity"},
    {StatKind::transitive_triplets, "transitive_triplets"},
    {StatKind::transitive_ties, "transitive_ties"},
    {StatKind::three_cycles, "three_cycles"},
    {StatKind::indegree_popularity_sqrt, "indegree_popularity_sqrt"},
    {StatKind::outdegree_popularity_sqrt, "outdegree_popularity_sqrt"},
    {StatKind::outdegree_activity_1_5, "outdegree_activity_1_5"},
    {StatKind::covariate_sender, "covariate_sender"},
    {StatKind::covariate_receiver, "covariate_receiver"},
    {StatKind::covariate_match, "covariate_match"},
    {StatKind::memory_stability, "memory_stability"},
    {StatKind::memory_autoregression, "memory_autoregression"},
    {StatKind::memory_innovation, "memory_innovation"},
    {StatKind::memory_loss, "memory_loss"},
    {StatKind::delayed_reciprocity, "delayed_reciprocity"},
}};

inline double pow15(double x) { return x * std::sqrt(x); }

}  // namespace

std::string_view kind_name(StatKind kind) noexcept {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.name;
  return "unknown";
}

StatKind parse_kind(std::string_view name) {
  for (const auto& kn : kKindNames)
    if (kn.name == name) return kn.kind;
  throw ConfigError("unknown statistic kind '" + std::string(name) + "'");
}

bool is_memory(StatKind kind) noexcept {
  switch (kind) {
    case StatKind::memory_stability:
    case StatKind::memory_autoregression:
    case StatKind::memory_innovation:
    case StatKind::memory_loss:
    case StatKind::delayed_reciprocity:
      return true;
    default:
      return false;
  }
}

bool is_covariate(StatKind kind) noexcept {
  return kind == StatKind::covariate_sender || kind == StatKind::covariate_receiver ||
         kind == StatKind::covariate_match;
}

StatisticSpec StatisticSpec::of(StatKind kind, std::string covariate) {
  return StatisticSpec{kind, std::move(covariate), is_memory(kind) ? 1 : 0};
}

std::string StatisticSpec::label() const {
  std::string s(kind_name(kind));
  if (!covariate.empty()) s += "(" + covariate + ")";
  if (is_memory(kind) && lag != 1) s += "[lag " + std::to_string(lag) + "]";
  return s;
}

void validate_spec(const StatisticSpec& spec) {
  if (is_memory(spec.kind)) {
    if (spec.lag < 1) throw ConfigError(spec.label() + ": memory terms require lag >= 1");
    if (spec.lag > 1) throw ConfigError(spec.label() + ": only lag 1 is supported");
  } else if (spec.lag != 0) {
    throw ConfigError(spec.label() + ": contemporaneous terms require lag 0");
  }
  if (is_covariate(spec.kind) && spec.covariate.empty())
    throw ConfigError(std::string(kind_name(spec.kind)) + " requires a covariate name");
  if (!is_covariate(spec.kind) && !spec.covariate.empty())
    throw ConfigError(std::string(kind_name(spec.kind)) + " does not take a covariate");
}

TermSet::TermSet(std::vector<StatisticSpec> specs, const Covariates& covariates, std::size_t n)
    : n_(n), specs_(std::move(specs)) {
  terms_.reserve(specs_.size());
  for (const auto& spec : specs_) {
    validate_spec(spec);
    Term term{spec.kind, {}, {}};
    if (spec.kind == StatKind::covariate_sender || spec.kind == StatKind::covariate_receiver) {
      auto it = covariates.vertex.find(spec.covariate);
      if (it == covariates.vertex.end())
        throw ConfigError(spec.label() + ": no vertex covariate named '" + spec.covariate + "'");
      if (it->second.size() != n) throw ConfigError(spec.label() + ": covariate length mismatch");
      term.vertex = it->second;
    } else if (spec.kind == StatKind::covariate_match) {
      if (auto d = covariates.dyad.find(spec.covariate); d != covariates.dyad.end()) {
        if (d->second.n != n) throw ConfigError(spec.label() + ": covariate size mismatch");
        term.dyad = d->second;
      } else if (auto v = covariates.vertex.find(spec.covariate); v != covariates.vertex.end()) {
        if (v->second.size() != n) throw ConfigError(spec.label() + ": covariate length mismatch");
        term.dyad = DyadMatrix(n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            term.dyad(i, j) = (i != j && v->second[i] == v->second[j]) ? 1.0 : 0.0;
      } else {
        throw ConfigError(spec.label() + ": no covariate named '" + spec.covariate + "'");
      }
    }
    needs_previous_ = needs_previous_ || is_memory(spec.kind);
    terms_.push_back(std::move(term));
  }
}

void TermSet::require_previous(const DirectedNetwork* previous) const {
  if (needs_previous_ && previous == nullptr)
    throw ConfigError("memory terms require the previous wave");
  if (previous != nullptr && previous->size() != n_)
    throw ConfigError("previous wave has a different vertex count");
}

double TermSet::global_term(const Term& t, const DirectedNetwork& net,
                            const DirectedNetwork* prev) const {
  const std::size_t n = n_;
  double h = 0.0;
  switch (t.kind) {
    case StatKind::edges:
      return static_cast<double>(net.edge_count());
    case StatKind::reciprocity:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h += net.at(i, j) * net.at(j, i);
      return h;
    case StatKind::indegree_popularity_sqrt:
      for (std::size_t j = 0; j < n; ++j) h += pow15(static_cast<double>(net.indegree(j)));
      return h;
    case StatKind::outdegree_popularity_sqrt:
      for (std::size_t j = 0; j < n; ++j)
        h += static_cast<double>(net.indegree(j)) * std::sqrt(static_cast<double>(net.outdegree(j)));
      return h;
    case StatKind::outdegree_activity_1_5:
      for (std::size_t i = 0; i < n; ++i) h += pow15(static_cast<double>(net.outdegree(i)));
      return h;
    default:
      for (std::size_t i = 0; i < n; ++i) h += egocentric_term(t, net, prev, i);
      return h;
  }
}

double TermSet::egocentric_term(const Term& t, const DirectedNetwork& net,
                                const DirectedNetwork* prev, std::size_t i) const {
  const std::size_t n = n_;
  auto ri = net.row(i);
  double h = 0.0;
  switch (t.kind) {
    case StatKind::edges:
      return static_cast<double>(net.outdegree(i));
    case StatKind::reciprocity:
      for (std::size_t j = 0; j < n; ++j) h += ri[j] * net.at(j, i);
      return h;
    case StatKind::transitive_triplets:
      for (std::size_t j = 0; j < n; ++j) {
        if (!ri[j]) continue;
        auto rj = net.row(j);
        for (std::size_t k = 0; k < n; ++k) h += ri[k] * rj[k];
      }
      return h;
    case StatKind::transitive_ties:
      for (std::size_t k = 0; k < n; ++k) {
        if (!ri[k]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (ri[j] && net.at(j, k)) {
            h += 1.0;
            break;
          }
        }
      }
      return h;
    case StatKind::three_cycles:
      for (std::size_t j = 0; j < n; ++j) {
        if (!ri[j]) continue;
        auto rj = net.row(j);
        for (std::size_t k = 0; k < n; ++k) h += rj[k] * net.at(k, i);
      }
      return h;
    case StatKind::indegree_popularity_sqrt:
      for (std::size_t j = 0; j < n; ++j)
        if (ri[j]) h += std::sqrt(static_cast<double>(net.indegree(j)));
      return h;
    case StatKind::outdegree_popularity_sqrt:
      for (std::size_t j = 0; j < n; ++j)
        if (ri[j]) h += std::sqrt(static_cast<double>(net.outdegree(j)));
      return h;
    case StatKind::outdegree_activity_1_5:
      return pow15(static_cast<double>(net.outdegree(i)));
    case StatKind::covariate_sender:
      return static_cast<double>(net.outdegree(i)) * t.vertex[i];
    case StatKind::covariate_receiver:
      for (std::size_t j = 0; j < n; ++j)
        if (ri[j]) h += t.vertex[j];
      return h;
    case StatKind::covariate_match:
      for (std::size_t j = 0; j < n; ++j)
        if (ri[j]) h += t.dyad(i, j);
      return h;
    case StatKind::memory_stability:
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) h += (ri[j] == prev->at(i, j)) ? 1.0 : 0.0;
      return h;
    case StatKind::memory_autoregression:
      for (std::size_t j = 0; j < n; ++j) h += ri[j] * prev->at(i, j);
      return h;
    case StatKind::memory_innovation:
      for (std::size_t j = 0; j < n; ++j) h += ri[j] * (1 - prev->at(i, j));
      return h;
    case StatKind::memory_loss:
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) h += (1 - ri[j]) * prev->at(i, j);
      return h;
    case StatKind::delayed_reciprocity:
      for (std::size_t j = 0; j < n; ++j) h += ri[j] * prev->at(j, i);
      return h;
  }
  return h;
}

double TermSet::change_term(const Term& t, const DirectedNetwork& net,
                            const DirectedNetwork* prev, std::size_t a, std::size_t b) const {
  const std::size_t n = n_;
  const int ab = net.at(a, b);
  switch (t.kind) {
    case StatKind::edges:
      return 1.0;
    case StatKind::reciprocity:
      return 2.0 * net.at(b, a);
    case StatKind::transitive_triplets: {
      // (a,b) in the role of i->j, i->k and j->k respectively.
      auto ra = net.row(a);
      auto rb = net.row(b);
      double h = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        h += ra[k] * rb[k] + ra[k] * net.at(k, b) + net.at(k, a) * net.at(k, b);
      return h;
    }
    case StatKind::three_cycles: {
      auto rb = net.row(b);
      double h = 0.0;
      for (std::size_t k = 0; k < n; ++k) h += rb[k] * net.at(k, a);
      return 3.0 * h;
    }
    case StatKind::transitive_ties: {
      // Only row a and the (i, b) terms for i with i->a depend on N_ab.
      auto ra = net.row(a);
      auto affected = [&](int x) {
        double h = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == a) continue;
          const int tie = (k == b) ? x : ra[k];
          if (!tie) continue;
          bool two = x && net.at(b, k);
          for (std::size_t j = 0; j < n && !two; ++j)
            if (j != b && ra[j] && net.at(j, k)) two = true;
          h += two ? 1.0 : 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
          if (i == a || i == b || !net.at(i, a) || !net.at(i, b)) continue;
          auto ri = net.row(i);
          bool two = x != 0;  // via i->a->b
          for (std::size_t j = 0; j < n && !two; ++j)
            if (j != a && ri[j] && net.at(j, b)) two = true;
          h += two ? 1.0 : 0.0;
        }
        return h;
      };
      return affected(1) - affected(0);
    }
    case StatKind::indegree_popularity_sqrt: {
      const double m = static_cast<double>(net.indegree(b) - ab);
      return pow15(m + 1.0) - pow15(m);
    }
    case StatKind::outdegree_popularity_sqrt: {
      const double oa = static_cast<double>(net.outdegree(a) - ab);
      return std::sqrt(static_cast<double>(net.outdegree(b))) +
             static_cast<double>(net.indegree(a)) * (std::sqrt(oa + 1.0) - std::sqrt(oa));
    }
    case StatKind::outdegree_activity_1_5: {
      const double oa = static_cast<double>(net.outdegree(a) - ab);
      return pow15(oa + 1.0) - pow15(oa);
    }
    case StatKind::covariate_sender:
      return t.vertex[a];
    case StatKind::covariate_receiver:
      return t.vertex[b];
    case StatKind::covariate_match:
      return t.dyad(a, b);
    case StatKind::memory_stability:
      return 2.0 * prev->at(a, b) - 1.0;
    case StatKind::memory_autoregression:
      return prev->at(a, b);
    case StatKind::memory_innovation:
      return 1.0 - prev->at(a, b);
    case StatKind::memory_loss:
      return -static_cast<double>(prev->at(a, b));
    case StatKind::delayed_reciprocity:
      return prev->at(b, a);
  }
  return 0.0;
}

void TermSet::global(const DirectedNetwork& net, const DirectedNetwork* previous,
                     std::span<double> out) const {
  require_previous(previous);
  for (std::size_t k = 0; k < terms_.size(); ++k) out[k] = global_term(terms_[k], net, previous);
}

std::vector<double> TermSet::global(const DirectedNetwork& net,
                                    const DirectedNetwork* previous) const {
  std::vector<double> out(terms_.size());
  global(net, previous, out);
  return out;
}

void TermSet::change(const DirectedNetwork& net, const DirectedNetwork* previous, std::size_t i,
                     std::size_t j, std::span<double> out) const {
  for (std::size_t k = 0; k < terms_.size(); ++k)
    out[k] = change_term(terms_[k], net, previous, i, j);
}

void TermSet::egocentric(const DirectedNetwork& net, const DirectedNetwork* previous,
                         std::size_t i, std::span<double> out) const {
  require_previous(previous);
  for (std::size_t k = 0; k < terms_.size(); ++k)
    out[k] = egocentric_term(terms_[k], net, previous, i);
}

void TermSet::egocentric_changes(const DirectedNetwork& net, const DirectedNetwork* prev,
                                 std::size_t i, std::span<double> out) const {
  const std::size_t n = n_;
  const std::size_t p = terms_.size();
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n * p), 0.0);
  auto ri = net.row(i);
  auto cell = [&](std::size_t a, std::size_t k) -> double& { return out[a * p + k]; };

  for (std::size_t k = 0; k < p; ++k) {
    const Term& t = terms_[k];
    switch (t.kind) {
      case StatKind::edges:
        for (std::size_t a = 0; a < n; ++a)
          if (a != i) cell(a, k) = 1.0;
        break;
      case StatKind::reciprocity:
        for (std::size_t a = 0; a < n; ++a)
          if (a != i) cell(a, k) = net.at(a, i);
        break;
      case StatKind::transitive_triplets:
        // i->a closes i->k->... : sum_k N_ik (N_ak + N_ka)
        for (std::size_t m = 0; m < n; ++m) {
          if (!ri[m]) continue;
          for (std::size_t a = 0; a < n; ++a)
            if (a != i && a != m) cell(a, k) += net.at(a, m) + net.at(m, a);
        }
        break;
      case StatKind::three_cycles:
        for (std::size_t a = 0; a < n; ++a) {
          if (a == i) continue;
          auto ra = net.row(a);
          double h = 0.0;
          for (std::size_t m = 0; m < n; ++m) h += ra[m] * net.at(m, i);
          cell(a, k) = h;
        }
        break;
      case StatKind::transitive_ties: {
        // twopaths[m] = #{j : i->j->m}
        std::vector<int> twopaths(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
          if (!ri[j]) continue;
          auto rj = net.row(j);
          for (std::size_t m = 0; m < n; ++m) twopaths[m] += rj[m];
        }
        for (std::size_t a = 0; a < n; ++a) {
          if (a == i) continue;
          auto ra = net.row(a);
          const int ia = ri[a];
          double h1 = 0.0, h0 = 0.0;
          for (std::size_t m = 0; m < n; ++m) {
            if (m == i) continue;
            const int others = twopaths[m] - ia * ra[m];
            const bool two0 = others > 0;
            const bool two1 = two0 || ra[m];
            if (m == a) {
              h1 += two1 ? 1.0 : 0.0;
            } else if (ri[m]) {
              h1 += two1 ? 1.0 : 0.0;
              h0 += two0 ? 1.0 : 0.0;
            }
          }
          cell(a, k) = h1 - h0;
        }
        break;
      }
      case StatKind::indegree_popularity_sqrt:
        for (std::size_t a = 0; a < n; ++a)
          if (a != i)
            cell(a, k) = std::sqrt(static_cast<double>(net.indegree(a) - ri[a]) + 1.0);
        break;
      case StatKind::outdegree_popularity_sqrt:
        for (std::size_t a = 0; a < n; ++a)
          if (a != i) cell(a, k) = std::sqrt(static_cast<double>(net.outdegree(a)));
        break;
      case StatKind::outdegree_activity_1_5:
        for (std::size_t a = 0; a < n; ++a) {
          if (a == i) continue;
          const double o = static_cast<double>(net.outdegree(i) - ri[a]);
          cell(a, k) = pow15(o + 1.0) - pow15(o);
        }
        break;
      case StatKind::covariate_sender:
        for (std::size_t a = 0; a < n; ++a)
          if (a != i) cell(a, k) = t.vertex[i];
        break;
      case StatKind::covariate_receiver:
        for (std::size_t a = 0; a < n; ++a)
          if (a != i) cell(a, k) = t.vertex[a];
        break;
      case StatKind::covariate_match:
        for (std::size_t a = 0; a < n; ++a)
          if (a != i) cell(a, k) = t.dyad(i, a);
        break;
      case StatKind::memory_stability:
      case StatKind::memory_autoregression:
      case StatKind::memory_innovation:
      case StatKind::memory_loss:
      case StatKind::delayed_reciprocity:
        for (std::size_t a = 0; a < n; ++a)
          if (a != i) cell(a, k) = change_term(t, net, prev, i, a);
        break;
    }
  }
}

namespace {

TermSet single(const StatisticSpec& spec, const DirectedNetwork& net, const Covariates& covs) {
  return TermSet({spec}, covs, net.size());
}

}  // namespace

double global_value(const StatisticSpec& spec, const DirectedNetwork& current,
                    const DirectedNetwork* previous, const Covariates& covariates) {
  double out = 0.0;
  single(spec, current, covariates).global(current, previous, {&out, 1});
  return out;
}

double change_value(const StatisticSpec& spec, const DirectedNetwork& net, std::size_t i,
                    std::size_t j, const DirectedNetwork* previous, const Covariates& covariates) {
  if (i == j) throw InvalidDyad("change statistics are undefined for i == j");
  if (i >= net.size() || j >= net.size()) throw InvalidDyad("vertex index out of range");
  auto terms = single(spec, net, covariates);
  terms.require_previous(previous);
  double out = 0.0;
  terms.change(net, previous, i, j, {&out, 1});
  return out;
}

double egocentric_value(const StatisticSpec& spec, const DirectedNetwork& net, std::size_t i,
                        const DirectedNetwork* previous, const Covariates& covariates) {
  if (i >= net.size()) throw InvalidDyad("vertex index out of range");
  double out = 0.0;
  single(spec, net, covariates).egocentric(net, previous, i, {&out, 1});
  return out;
}

}  // namespace longnet
