#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace longnet {

/// Binary directed network over n labeled vertices. Adjacency is stored densely
/// (row-major, one byte per dyad); degrees and the edge count are kept in sync
/// on every mutation so samplers can query them in O(1).
///
/// Instances are plain values. Concurrent readers may share one instance;
/// samplers mutate private copies.
class DirectedNetwork {
 public:
  DirectedNetwork() = default;

  /// Empty network with labels "1".."n".
  explicit DirectedNetwork(std::size_t n);

  /// Empty network with the given labels (must be distinct).
  explicit DirectedNetwork(std::vector<std::string> labels);

  /// Network from a dense 0/1 matrix given row by row. Throws InvalidNetwork on
  /// ragged rows, non-binary entries or a nonzero diagonal.
  static DirectedNetwork from_rows(const std::vector<std::vector<int>>& rows,
                                   std::vector<std::string> labels = {});

  /// Network with the listed ties, vertices 0-based.
  static DirectedNetwork from_edges(std::size_t n,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t size() const noexcept { return n_; }

  bool tie(std::size_t i, std::size_t j) const noexcept { return adj_[i * n_ + j] != 0; }
  /// 0/1 entry as an int, convenient inside statistic formulas.
  int at(std::size_t i, std::size_t j) const noexcept { return adj_[i * n_ + j]; }

  void set_tie(std::size_t i, std::size_t j, bool value);
  void toggle(std::size_t i, std::size_t j);

  std::size_t outdegree(std::size_t i) const noexcept { return out_[i]; }
  std::size_t indegree(std::size_t j) const noexcept { return in_[j]; }
  std::size_t edge_count() const noexcept { return edges_; }

  std::span<const std::uint8_t> row(std::size_t i) const noexcept {
    return {adj_.data() + i * n_, n_};
  }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const DirectedNetwork& a, const DirectedNetwork& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_ && a.labels_ == b.labels_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adj_;
  std::vector<std::size_t> out_;
  std::vector<std::size_t> in_;
  std::size_t edges_ = 0;
  std::vector<std::string> labels_;
};

/// n x n real matrix, row-major. Used for dyadic covariates and tie probabilities.
struct DyadMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  DyadMatrix() = default;
  explicit DyadMatrix(std::size_t size, double fill = 0.0) : n(size), values(size * size, fill) {}

  double operator()(std::size_t i, std::size_t j) const noexcept { return values[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return values[i * n + j]; }
};

struct Covariates {
  std::map<std::string, std::vector<double>> vertex;
  std::map<std::string, DyadMatrix> dyad;
};

/// Ordered sequence of waves over one vertex set, plus exogenous covariates.
class NetworkPanel {
 public:
  NetworkPanel() = default;
  /// Throws InvalidNetwork if fewer than two waves are given, waves disagree in
  /// size or labels, or a covariate has the wrong length.
  explicit NetworkPanel(std::vector<DirectedNetwork> waves, Covariates covariates = {});

  std::size_t wave_count() const noexcept { return waves_.size(); }
  std::size_t vertex_count() const noexcept { return waves_.empty() ? 0 : waves_.front().size(); }
  const DirectedNetwork& wave(std::size_t t) const { return waves_.at(t); }
  const std::vector<DirectedNetwork>& waves() const noexcept { return waves_; }
  const Covariates& covariates() const noexcept { return covariates_; }

  /// Panel of waves [first, last). Used to hold out the final wave.
  NetworkPanel slice(std::size_t first, std::size_t last) const;

 private:
  std::vector<DirectedNetwork> waves_;
  Covariates covariates_;
};

/// Ordered-pair counts by directed shortest-path length.
struct GeodesicDistribution {
  /// finite[d] = number of ordered pairs at distance d, for d in 0..n-1
  /// (index 0 is always zero and kept for direct indexing).
  std::vector<std::size_t> finite;
  std::size_t unreachable = 0;

  std::size_t total() const noexcept;
};

using Histogram = std::vector<std::size_t>;

struct DegreeDistributions {
  Histogram indegree;   ///< bins 0..n-1
  Histogram outdegree;  ///< bins 0..n-1
};

struct SharedPartnerDistributions {
  Histogram edgewise;  ///< bins 0..n-2, over ordered pairs with a tie
  Histogram dyadwise;  ///< bins 0..n-2, over all ordered pairs
};

/// Fraction of the n(n-1) ordered pairs that are tied. Requires n >= 2.
double density(const DirectedNetwork& net);

/// Number of ordered pairs whose tie state differs.
std::size_t hamming_distance(const DirectedNetwork& a, const DirectedNetwork& b);

GeodesicDistribution geodesic_distribution(const DirectedNetwork& net);

DegreeDistributions degree_distributions(const DirectedNetwork& net);

/// Shared partners of (i, j) are the k outside {i, j} with i->k and k->j.
SharedPartnerDistributions shared_partner_distributions(const DirectedNetwork& net);

}  // namespace longnet
