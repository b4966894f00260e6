#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's statistic, geodesic or curve code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "longnet/network.hpp"
#include "longnet/rng.hpp"
#include "longnet/statistics.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<int>>;

inline Matrix adjacency(const longnet::DirectedNetwork& net) {
  const std::size_t n = net.size();
  Matrix a(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = net.tie(i, j) ? 1 : 0;
  return a;
}

inline longnet::DirectedNetwork random_network(longnet::Rng& rng, std::size_t n, double p) {
  longnet::DirectedNetwork net(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && rng.uniform() < p) net.set_tie(i, j, true);
  return net;
}

struct Covs {
  std::vector<double> vertex;           // used by sender/receiver
  std::vector<std::vector<double>> X;   // used by match
};

/// Global value computed straight from the summation formulas.
inline double global(longnet::StatKind kind, const Matrix& N, const Matrix* P, const Covs& c) {
  using K = longnet::StatKind;
  const std::size_t n = N.size();
  auto in = [&](std::size_t j) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += N[i][j];
    return s;
  };
  auto out = [&](std::size_t i) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += N[i][j];
    return s;
  };
  double h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (kind == K::outdegree_activity_1_5) h += std::pow(out(i), 1.5);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      switch (kind) {
        case K::edges: h += N[i][j]; break;
        case K::reciprocity: h += N[i][j] * N[j][i]; break;
        case K::transitive_triplets:
          for (std::size_t k = 0; k < n; ++k)
            if (k != i && k != j) h += N[i][j] * N[i][k] * N[j][k];
          break;
        case K::transitive_ties: {
          int best = 0;
          for (std::size_t m = 0; m < n; ++m)
            if (m != i && m != j) best = std::max(best, N[i][m] * N[m][j]);
          h += N[i][j] * best;
          break;
        }
        case K::three_cycles:
          for (std::size_t k = 0; k < n; ++k)
            if (k != i && k != j) h += N[i][j] * N[j][k] * N[k][i];
          break;
        case K::indegree_popularity_sqrt: h += N[i][j] * std::sqrt(in(j)); break;
        case K::outdegree_popularity_sqrt: h += N[i][j] * std::sqrt(out(j)); break;
        case K::covariate_sender: h += N[i][j] * c.vertex[i]; break;
        case K::covariate_receiver: h += N[i][j] * c.vertex[j]; break;
        case K::covariate_match: h += N[i][j] * c.X[i][j]; break;
        case K::memory_stability: h += N[i][j] * (*P)[i][j] + (1 - N[i][j]) * (1 - (*P)[i][j]); break;
        case K::memory_autoregression: h += N[i][j] * (*P)[i][j]; break;
        case K::memory_innovation: h += N[i][j] * (1 - (*P)[i][j]); break;
        case K::memory_loss: h += (1 - N[i][j]) * (*P)[i][j]; break;
        case K::delayed_reciprocity: h += N[i][j] * (*P)[j][i]; break;
        default: break;
      }
    }
  }
  return h;
}

/// All-pairs shortest paths by Floyd-Warshall; returns counts by distance with
/// key -1 for unreachable ordered pairs.
inline std::map<int, std::size_t> floyd_warshall(const longnet::DirectedNetwork& net) {
  const std::size_t n = net.size();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i == j) d[i][j] = 0;
      else if (net.tie(i, j)) d[i][j] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::map<int, std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) ++counts[d[i][j] >= inf ? -1 : d[i][j]];
  return counts;
}

/// Shared partners of (i, j): k with i->k and k->j.
inline int shared_partners(const longnet::DirectedNetwork& net, std::size_t i, std::size_t j) {
  int c = 0;
  for (std::size_t k = 0; k < net.size(); ++k)
    if (k != i && k != j && net.tie(i, k) && net.tie(k, j)) ++c;
  return c;
}

/// Probability that a random positive outscores a random negative, ties half.
inline double concordant_auc(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
  double num = 0, den = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (!y[a]) continue;
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (y[b]) continue;
      den += 1;
      num += s[a] > s[b] ? 1.0 : (s[a] == s[b] ? 0.5 : 0.0);
    }
  }
  return num / den;
}

/// Exact ERGM probabilities over all 2^(n(n-1)) networks for (edges, reciprocity),
/// indexed by the bitmask of ordered pairs in row-major order.
inline std::vector<double> ergm_enumeration(std::size_t n, double edges, double recip) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);
  const std::size_t count = std::size_t{1} << pairs.size();
  std::vector<double> w(count);
  double z = 0;
  for (std::size_t m = 0; m < count; ++m) {
    Matrix N(n, std::vector<int>(n, 0));
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (m >> p & 1) N[pairs[p].first][pairs[p].second] = 1;
    double e = 0, r = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) e += N[i][j], r += N[i][j] * N[j][i];
    w[m] = std::exp(edges * e + recip * r);
    z += w[m];
  }
  for (auto& v : w) v /= z;
  return w;
}

inline std::size_t network_index(const longnet::DirectedNetwork& net) {
  std::size_t m = 0, p = 0;
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = 0; j < net.size(); ++j)
      if (i != j) {
        if (net.tie(i, j)) m |= std::size_t{1} << p;
        ++p;
      }
  return m;
}

}  // namespace oracle
