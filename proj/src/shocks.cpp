#include "firmrecon/shocks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "firmrecon/error.hpp"
#include "firmrecon/rng.hpp"

namespace firmrecon {

ShockPanel::ShockPanel(std::size_t n_nodes, std::size_t n_periods, std::vector<double> growth,
                       std::optional<NodeId> proxy)
    : n_nodes_(n_nodes), n_periods_(n_periods), growth_(std::move(growth)), proxy_(proxy) {
  if (growth_.size() != n_nodes_ * n_periods_) {
    fail(ErrorCode::SizeMismatch, "panel data does not match its dimensions");
  }
  if (proxy_ && *proxy_ + 1 != n_nodes_) fail(ErrorCode::InvalidProxy, "proxy row must be last");
}

double ShockPanel::variance(NodeId i) const {
  const auto x = series(i);
  if (x.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

std::vector<double> ShockPanel::variances() const {
  std::vector<double> out(n_nodes_);
  for (NodeId i = 0; i < n_nodes_; ++i) out[i] = variance(i);
  return out;
}

ShockPanel ShockPanel::select(std::span<const NodeId> ids) const {
  std::vector<double> g;
  g.reserve(ids.size() * n_periods_);
  for (NodeId i : ids) {
    if (i >= n_nodes_) fail(ErrorCode::IndexOutOfRange, "panel row out of range");
    const auto x = series(i);
    g.insert(g.end(), x.begin(), x.end());
  }
  return ShockPanel(ids.size(), n_periods_, std::move(g));
}

namespace {

double median_of(std::vector<double>& x) {
  const std::size_t n = x.size();
  const auto mid = x.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(x.begin(), mid, x.end());
  if (n % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(x.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace

ShockPanel with_proxy(const ShockPanel& firms, const ShockPanel& excluded, ProxyShockRule rule) {
  if (firms.proxy()) fail(ErrorCode::InvalidProxy, "panel already has a proxy row");
  if (excluded.n_nodes() == 0) fail(ErrorCode::EmptyInput, "no excluded firms to build a proxy");
  if (excluded.n_periods() != firms.n_periods()) {
    fail(ErrorCode::SizeMismatch, "panels have different period counts");
  }
  const std::size_t t_count = firms.n_periods();
  std::vector<double> proxy_row(t_count);
  if (rule == ProxyShockRule::PeriodMedian) {
    std::vector<double> column(excluded.n_nodes());
    for (std::size_t t = 0; t < t_count; ++t) {
      for (NodeId i = 0; i < excluded.n_nodes(); ++i) column[i] = excluded.series(i)[t];
      proxy_row[t] = median_of(column);
    }
  } else {
    // Lower median of the variances, ties by lowest row.
    const std::vector<double> var = excluded.variances();
    std::vector<NodeId> order(var.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    const auto mid = order.begin() + static_cast<std::ptrdiff_t>((order.size() - 1) / 2);
    std::nth_element(order.begin(), mid, order.end(), [&](NodeId a, NodeId b) {
      return var[a] != var[b] ? var[a] < var[b] : a < b;
    });
    const auto x = excluded.series(*mid);
    std::copy(x.begin(), x.end(), proxy_row.begin());
  }
  std::vector<double> g(firms.growth().begin(), firms.growth().end());
  g.insert(g.end(), proxy_row.begin(), proxy_row.end());
  const std::size_t n = firms.n_nodes() + 1;
  return ShockPanel(n, t_count, std::move(g), static_cast<NodeId>(n - 1));
}

ShockPanel simulate_tfp(std::size_t n_firms, std::size_t n_periods, double sigma,
                        std::uint64_t seed, const ShockPanel* excluded, ProxyShockRule rule) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    fail(ErrorCode::InvalidArgument, "shock standard deviation must be positive");
  }
  if (n_periods < 2) fail(ErrorCode::InvalidArgument, "need at least two periods");
  Rng rng(derive_seed(seed, stream::kShocks));
  std::vector<double> g(n_firms * n_periods);
  for (double& x : g) x = sigma * rng.normal();
  ShockPanel panel(n_firms, n_periods, std::move(g));
  if (excluded) return with_proxy(panel, *excluded, rule);
  return panel;
}

namespace {

std::vector<double> contributions(const ShockPanel& panel, std::span<const double> v) {
  if (v.size() != panel.n_nodes()) {
    fail(ErrorCode::SizeMismatch, "influence vector has " + std::to_string(v.size()) +
                                      " entries for a panel of " +
                                      std::to_string(panel.n_nodes()));
  }
  std::vector<double> c(v.size());
  for (NodeId i = 0; i < v.size(); ++i) c[i] = panel.variance(i) * v[i] * v[i];
  return c;
}

}  // namespace

double aggregate_volatility(const ShockPanel& panel, std::span<const double> v,
                            bool include_proxy) {
  const std::vector<double> c = contributions(panel, v);
  double total = 0.0;
  for (NodeId i = 0; i < c.size(); ++i) {
    if (!include_proxy && panel.proxy() && *panel.proxy() == i) continue;
    total += c[i];
  }
  return std::sqrt(total);
}

std::vector<double> variance_shares(const ShockPanel& panel, std::span<const double> v,
                                    std::span<const std::vector<NodeId>> parts) {
  const std::vector<double> c = contributions(panel, v);
  std::vector<char> seen(c.size(), 0);
  std::vector<double> part_sum(parts.size(), 0.0);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (NodeId i : parts[p]) {
      if (i >= c.size()) fail(ErrorCode::IndexOutOfRange, "partition id out of range");
      if (seen[i]) fail(ErrorCode::OverlappingPartition, "node " + std::to_string(i) + " repeated");
      seen[i] = 1;
      part_sum[p] += c[i];
    }
  }
  double total = 0.0;
  for (double x : c) total += x;
  if (!(total > 0.0)) fail(ErrorCode::InvalidArgument, "panel carries no variance");
  for (double& x : part_sum) x /= total;
  return part_sum;
}

}  // namespace firmrecon
