#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "longnet/network.hpp"

namespace longnet {

enum class StatKind {
  edges,
  reciprocity,
  transitive_triplets,
  transitive_ties,
  three_cycles,
  indegree_popularity_sqrt,
  outdegree_popularity_sqrt,
  outdegree_activity_1_5,
  covariate_sender,
  covariate_receiver,
  covariate_match,
  memory_stability,
  memory_autoregression,
  memory_innovation,
  memory_loss,
  delayed_reciprocity,
};

inline constexpr StatKind kAllStatKinds[] = {
    StatKind::edges,
    StatKind::reciprocity,
    StatKind::transitive_triplets,
    StatKind::transitive_ties,
    StatKind::three_cycles,
    StatKind::indegree_popularity_sqrt,
    StatKind::outdegree_popularity_sqrt,
    StatKind::outdegree_activity_1_5,
    StatKind::covariate_sender,
    StatKind::covariate_receiver,
    StatKind::covariate_match,
    StatKind::memory_stability,
    StatKind::memory_autoregression,
    StatKind::memory_innovation,
    StatKind::memory_loss,
    StatKind::delayed_reciprocity,
};

std::string_view kind_name(StatKind kind) noexcept;
/// Throws ConfigError for unknown names.
StatKind parse_kind(std::string_view name);

bool is_memory(StatKind kind) noexcept;
bool is_covariate(StatKind kind) noexcept;

/// One named sufficient statistic. Memory kinds compare the current wave with
/// the wave `lag` steps earlier; only lag 1 is supported.
struct StatisticSpec {
  StatKind kind = StatKind::edges;
  std::string covariate;  ///< vertex or dyad covariate name for covariate_* kinds
  int lag = 0;

  /// Spec with the default lag for its kind (1 for memory terms, else 0).
  static StatisticSpec of(StatKind kind, std::string covariate = {});

  /// "edges", "covariate_match(sex)", ...
  std::string label() const;

  friend bool operator==(const StatisticSpec&, const StatisticSpec&) = default;
};

/// Throws ConfigError on an inconsistent lag or a missing covariate name.
void validate_spec(const StatisticSpec& spec);

/// A list of statistics with covariates resolved against one vertex set.
/// Evaluation is read-only and thread-safe.
///
/// covariate_match accepts either a dyad covariate (used as X directly) or a
/// vertex covariate (X_ij = 1 when both endpoints carry the same value).
class TermSet {
 public:
  TermSet() = default;
  TermSet(std::vector<StatisticSpec> specs, const Covariates& covariates, std::size_t n);

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t vertex_count() const noexcept { return n_; }
  const std::vector<StatisticSpec>& specs() const noexcept { return specs_; }
  bool needs_previous() const noexcept { return needs_previous_; }

  /// Throws ConfigError when a memory term is present and `previous` is null.
  void require_previous(const DirectedNetwork* previous) const;

  /// h(N) for every term.
  void global(const DirectedNetwork& net, const DirectedNetwork* previous,
              std::span<double> out) const;
  std::vector<double> global(const DirectedNetwork& net, const DirectedNetwork* previous) const;

  /// h(N with N_ij = 1) - h(N with N_ij = 0) for every term.
  void change(const DirectedNetwork& net, const DirectedNetwork* previous, std::size_t i,
              std::size_t j, std::span<double> out) const;

  /// h_i(N): the i-th summand of the global value.
  void egocentric(const DirectedNetwork& net, const DirectedNetwork* previous, std::size_t i,
                  std::span<double> out) const;

  /// For actor i and every alter a, h_i(N with N_ia = 1) - h_i(N with N_ia = 0).
  /// `out` is n x size() row-major; the row for a = i is zero.
  void egocentric_changes(const DirectedNetwork& net, const DirectedNetwork* previous,
                          std::size_t i, std::span<double> out) const;

 private:
  struct Term {
    StatKind kind;
    std::vector<double> vertex;  // sender/receiver
    DyadMatrix dyad;             // match
  };

  double global_term(const Term& t, const DirectedNetwork& net, const DirectedNetwork* prev) const;
  double change_term(const Term& t, const DirectedNetwork& net, const DirectedNetwork* prev,
                     std::size_t a, std::size_t b) const;
  double egocentric_term(const Term& t, const DirectedNetwork& net, const DirectedNetwork* prev,
                         std::size_t i) const;

  std::size_t n_ = 0;
  std::vector<StatisticSpec> specs_;
  std::vector<Term> terms_;
  bool needs_previous_ = false;
};

/// Single-statistic conveniences over TermSet.
double global_value(const StatisticSpec& spec, const DirectedNetwork& current,
                    const DirectedNetwork* previous, const Covariates& covariates = {});
/// Throws InvalidDyad when i == j.
double change_value(const StatisticSpec& spec, const DirectedNetwork& net, std::size_t i,
                    std::size_t j, const DirectedNetwork* previous,
                    const Covariates& covariates = {});
double egocentric_value(const StatisticSpec& spec, const DirectedNetwork& net, std::size_t i,
                        const DirectedNetwork* previous, const Covariates& covariates = {});

}  // namespace longnet
