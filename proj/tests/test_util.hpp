#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "firmrecon/network.hpp"

namespace testutil {

using firmrecon::Arc;
using firmrecon::Edge;
using firmrecon::NodeId;
using firmrecon::Topology;
using firmrecon::WeightedNetwork;

// Dense row-major n x n matrix.
struct Dense {
  std::size_t n = 0;
  std::vector<double> a;
  explicit Dense(std::size_t size = 0) : n(size), a(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

inline Dense dense(const WeightedNetwork& net) {
  Dense d(net.n_nodes());
  for (const Edge& e : net.edges()) d(e.src, e.dst) = e.weight;
  return d;
}

// Erdos-Renyi support with at least one outgoing and one incoming link per
// node, weights log-uniform over three decades.
inline WeightedNetwork random_network(std::size_t n, double p, std::uint64_t seed,
                                      bool with_proxy = false) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<char> has(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && u(gen) < p) has[i * n + j] = 1;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    has[i * n + (i + 1) % n] = 1;
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!has[i * n + j]) continue;
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j),
                       std::pow(10.0, 3.0 * u(gen))});
    }
  }
  std::optional<NodeId> proxy;
  if (with_proxy) {
    proxy = static_cast<NodeId>(n - 1);
    edges.push_back({*proxy, *proxy, std::pow(10.0, 3.0 * u(gen))});
  }
  return WeightedNetwork::build(n, edges, proxy);
}

// Alternating row/column scaling on a dense masked matrix, run to machine
// precision.
inline Dense dense_ipf(const Topology& t, const std::vector<double>& s_out,
                       const std::vector<double>& s_in, const std::vector<double>& init) {
  const std::size_t n = t.n_nodes();
  Dense m(n);
  for (std::size_t e = 0; e < t.n_edges(); ++e) m(t.src(e), t.dst(e)) = init[e];
  double best = 1e300;
  int stall = 0;
  for (int sweep = 0; sweep < 200000; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) r += m(i, j);
      if (r > 0.0) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) *= s_out[i] / r;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      double c = 0.0;
      for (std::size_t i = 0; i < n; ++i) c += m(i, j);
      if (c > 0.0) {
        for (std::size_t i = 0; i < n; ++i) m(i, j) *= s_in[j] / c;
      }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) r += m(i, j);
      if (s_out[i] > 0.0) worst = std::max(worst, std::abs(r - s_out[i]) / s_out[i]);
    }
    if (worst < 1e-15) break;
    if (worst < 0.999 * best) {
      best = worst;
      stall = 0;
    } else if (++stall > 20) {
      break;
    }
  }
  return m;
}

inline double max_rel_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace testutil
