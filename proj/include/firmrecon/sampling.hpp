#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "firmrecon/network.hpp"
#include "firmrecon/synth.hpp"

namespace firmrecon {

struct TrimPlan {
  std::size_t n_keep = 0;
  double target_mean_degree = 2.9;
  std::size_t n_replicates = 50;
  std::uint64_t seed = 0;
};

// Largest n_keep firms by out-strength (ties by ascending id), then pruned
// until every survivor has positive in-strength inside the induced
// subgraph. Returned ids are ascending.
std::vector<NodeId> select_top_firms(const WeightedNetwork& net, const NodeAccounts& acc,
                                     std::size_t n_keep);

// Subgraph on `kept` (ascending ids), relabelled to 0..K-1 in that order.
WeightedNetwork induced_subnetwork(const WeightedNetwork& net, std::span<const NodeId> kept);

struct TrimResult {
  Topology kept;                     // surviving edges, same node set
  std::vector<EdgeIndex> kept_edges; // row-major indices into the input
  std::vector<Edge> deleted;
};

// Deletes edges without replacement with probability proportional to
// 1/W until round(target_mean_degree * N) edges remain.
TrimResult trim_links(const WeightedNetwork& subnet, double target_mean_degree, std::uint64_t seed);
TrimResult trim_links_to_count(const WeightedNetwork& subnet, std::size_t m_star,
                               std::uint64_t seed);

struct ProxiedEconomy {
  WeightedNetwork network;          // K firms plus the proxy at index K
  NodeAccounts accounts;
  std::vector<NodeId> original_id;  // size K
};

// kept_edges is a topology on the K kept firms (local ids). Deleted
// kept-kept flow goes to both i->proxy and proxy->j; flows touching excluded
// firms route through the proxy. Proxy value added and final demand are the
// excluded firms' totals.
ProxiedEconomy aggregate_proxy(const WeightedNetwork& full, const NodeAccounts& acc,
                               std::span<const NodeId> kept, const Topology& kept_edges);

// y_i = (y_s / x_s) s_in_i and f_i = q_i f_s / q_s, the latter solved as
// f_i = s_out_i f_s / d_s since q_i = s_out_i + f_i.
NodeAccounts impute_from_sectors(const NodeAccounts& acc, const SectorTable& sectors,
                                 std::span<const std::int32_t> labels);

}  // namespace firmrecon
