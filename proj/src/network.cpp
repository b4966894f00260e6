#include "longnet/network.hpp"

#include <deque>
#include <numeric>
#include <set>
#include <string>

#include "longnet/error.hpp"

namespace longnet {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i + 1);
  return labels;
}

void check_distinct(const std::vector<std::string>& labels) {
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw InvalidNetwork("vertex labels must be distinct");
}

}  // namespace

DirectedNetwork::DirectedNetwork(std::size_t n) : DirectedNetwork(default_labels(n)) {}

DirectedNetwork::DirectedNetwork(std::vector<std::string> labels)
    : n_(labels.size()),
      adj_(labels.size() * labels.size(), 0),
      out_(labels.size(), 0),
      in_(labels.size(), 0),
      labels_(std::move(labels)) {
  check_distinct(labels_);
}

DirectedNetwork DirectedNetwork::from_rows(const std::vector<std::vector<int>>& rows,
                                           std::vector<std::string> labels) {
  const std::size_t n = rows.size();
  if (labels.empty()) labels = default_labels(n);
  if (labels.size() != n) {
    throw InvalidNetwork("expected " + std::to_string(n) + " vertex labels, got " +
                         std::to_string(labels.size()));
  }
  DirectedNetwork net(std::move(labels));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw InvalidNetwork("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                           " entries, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const int v = rows[i][j];
      if (v != 0 && v != 1) {
        throw InvalidNetwork("row " + std::to_string(i + 1) + " column " + std::to_string(j + 1) +
                             ": entries must be 0 or 1");
      }
      if (i == j && v != 0) {
        throw InvalidNetwork("row " + std::to_string(i + 1) + ": self-loops are not allowed");
      }
      if (v == 1) net.set_tie(i, j, true);
    }
  }
  return net;
}

DirectedNetwork DirectedNetwork::from_edges(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  DirectedNetwork net(n);
  for (auto [i, j] : edges) {
    if (i >= n || j >= n || i == j) throw InvalidDyad("edge outside the vertex range or a self-loop");
    net.set_tie(i, j, true);
  }
  return net;
}

void DirectedNetwork::set_tie(std::size_t i, std::size_t j, bool value) {
  if (i == j) throw InvalidDyad("self-loops are not allowed");
  auto& cell = adj_[i * n_ + j];
  if ((cell != 0) == value) return;
  cell = value ? 1 : 0;
  if (value) {
    ++out_[i];
    ++in_[j];
    ++edges_;
  } else {
    --out_[i];
    --in_[j];
    --edges_;
  }
}

void DirectedNetwork::toggle(std::size_t i, std::size_t j) { set_tie(i, j, !tie(i, j)); }

NetworkPanel::NetworkPanel(std::vector<DirectedNetwork> waves, Covariates covariates)
    : waves_(std::move(waves)), covariates_(std::move(covariates)) {
  if (waves_.size() < 2) throw InvalidNetwork("a panel needs at least two waves");
  const auto& first = waves_.front();
  for (std::size_t t = 1; t < waves_.size(); ++t) {
    if (waves_[t].size() != first.size() || waves_[t].labels() != first.labels()) {
      throw InvalidNetwork("wave " + std::to_string(t + 1) +
                           " does not share the vertex set of wave 1");
    }
  }
  const std::size_t n = first.size();
  for (const auto& [name, values] : covariates_.vertex) {
    if (values.size() != n) {
      throw InvalidNetwork("vertex covariate '" + name + "' has " + std::to_string(values.size()) +
                           " entries, expected " + std::to_string(n));
    }
  }
  for (const auto& [name, matrix] : covariates_.dyad) {
    if (matrix.n != n || matrix.values.size() != n * n) {
      throw InvalidNetwork("dyad covariate '" + name + "' is not " + std::to_string(n) + "x" +
                           std::to_string(n));
    }
  }
}

NetworkPanel NetworkPanel::slice(std::size_t first, std::size_t last) const {
  if (first >= last || last > waves_.size()) throw ConfigError("invalid wave range");
  return NetworkPanel(std::vector<DirectedNetwork>(waves_.begin() + first, waves_.begin() + last),
                      covariates_);
}

std::size_t GeodesicDistribution::total() const noexcept {
  return std::accumulate(finite.begin(), finite.end(), std::size_t{0}) + unreachable;
}

double density(const DirectedNetwork& net) {
  const std::size_t n = net.size();
  if (n < 2) throw InvalidNetwork("density needs at least two vertices");
  return static_cast<double>(net.edge_count()) / static_cast<double>(n * (n - 1));
}

std::size_t hamming_distance(const DirectedNetwork& a, const DirectedNetwork& b) {
  if (a.size() != b.size()) throw InvalidNetwork("networks differ in size");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto ra = a.row(i);
    auto rb = b.row(i);
    for (std::size_t j = 0; j < a.size(); ++j) d += ra[j] != rb[j];
  }
  return d;
}

GeodesicDistribution geodesic_distribution(const DirectedNetwork& net) {
  const std::size_t n = net.size();
  GeodesicDistribution out;
  out.finite.assign(n == 0 ? 1 : n, 0);
  std::vector<std::size_t> dist(n);
  std::deque<std::size_t> queue;
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    dist[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      auto r = net.row(u);
      for (std::size_t v = 0; v < n; ++v) {
        if (r[v] && dist[v] == kUnseen) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s) continue;
      if (dist[t] == kUnseen)
        ++out.unreachable;
      else
        ++out.finite[dist[t]];
    }
  }
  return out;
}

DegreeDistributions degree_distributions(const DirectedNetwork& net) {
  const std::size_t n = net.size();
  DegreeDistributions out{Histogram(n, 0), Histogram(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    ++out.indegree[net.indegree(i)];
    ++out.outdegree[net.outdegree(i)];
  }
  return out;
}

SharedPartnerDistributions shared_partner_distributions(const DirectedNetwork& net) {
  const std::size_t n = net.size();
  const std::size_t bins = n >= 2 ? n - 1 : 1;
  SharedPartnerDistributions out{Histogram(bins, 0), Histogram(bins, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    auto ri = net.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      std::size_t sp = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i && k != j && ri[k] && net.at(k, j)) ++sp;
      }
      ++out.dyadwise[sp];
      if (ri[j]) ++out.edgewise[sp];
    }
  }
  return out;
}

}  // namespace longnet
