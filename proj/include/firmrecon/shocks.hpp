#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "firmrecon/network.hpp"

namespace firmrecon {

// Growth rates of TFP, one row of n_periods per node.
class ShockPanel {
 public:
  ShockPanel() = default;
  ShockPanel(std::size_t n_nodes, std::size_t n_periods, std::vector<double> growth,
             std::optional<NodeId> proxy = std::nullopt);

  std::size_t n_nodes() const noexcept { return n_nodes_; }
  std::size_t n_periods() const noexcept { return n_periods_; }
  std::optional<NodeId> proxy() const noexcept { return proxy_; }
  std::span<const double> series(NodeId i) const {
    return {growth_.data() + static_cast<std::size_t>(i) * n_periods_, n_periods_};
  }
  std::span<const double> growth() const noexcept { return growth_; }

  // Sample variance (n - 1 denominator) of each node's series.
  std::vector<double> variances() const;
  double variance(NodeId i) const;

  // Rows `ids` in the given order.
  ShockPanel select(std::span<const NodeId> ids) const;

 private:
  std::size_t n_nodes_ = 0;
  std::size_t n_periods_ = 0;
  std::vector<double> growth_;
  std::optional<NodeId> proxy_;
};

enum class ProxyShockRule {
  // Per-period median across excluded firms.
  PeriodMedian,
  // Series of the excluded firm whose sample variance is the median one.
  MedianFirm,
};

// Appends a proxy row built from the excluded panel.
ShockPanel with_proxy(const ShockPanel& firms, const ShockPanel& excluded, ProxyShockRule rule);

// i.i.d. N(0, sigma^2) per firm-period; an excluded panel adds a proxy row.
ShockPanel simulate_tfp(std::size_t n_firms, std::size_t n_periods, double sigma,
                        std::uint64_t seed, const ShockPanel* excluded = nullptr,
                        ProxyShockRule rule = ProxyShockRule::PeriodMedian);

// sqrt(sum_i Var_i v_i^2); the proxy term is dropped unless include_proxy.
double aggregate_volatility(const ShockPanel& panel, std::span<const double> v,
                            bool include_proxy = true);

// Share of sum_all Var_i v_i^2 carried by each part; parts must be disjoint.
std::vector<double> variance_shares(const ShockPanel& panel, std::span<const double> v,
                                    std::span<const std::vector<NodeId>> parts);

}  // namespace firmrecon
