#include "firmrecon/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "firmrecon/error.hpp"
#include "firmrecon/rng.hpp"

namespace firmrecon {

namespace {

constexpr std::int64_t kExcluded = -1;

std::vector<std::int64_t> local_index(std::size_t n, std::span<const NodeId> kept) {
  std::vector<std::int64_t> local(n, kExcluded);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (kept[k] >= n) fail(ErrorCode::IndexOutOfRange, "kept id out of range");
    if (k > 0 && kept[k] <= kept[k - 1]) {
      fail(ErrorCode::InvalidArgument, "kept ids must be strictly ascending");
    }
    local[kept[k]] = static_cast<std::int64_t>(k);
  }
  return local;
}

}  // namespace

std::vector<NodeId> select_top_firms(const WeightedNetwork& net, const NodeAccounts& acc,
                                     std::size_t n_keep) {
  const std::size_t n = net.n_nodes();
  if (acc.size() != n) fail(ErrorCode::SizeMismatch, "accounts do not match network size");
  if (n_keep == 0) fail(ErrorCode::EmptySelection, "n_keep must be at least 1");
  n_keep = std::min(n_keep, n);

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_keep), order.end(),
                    [&](NodeId a, NodeId b) {
                      return acc.s_out[a] != acc.s_out[b] ? acc.s_out[a] > acc.s_out[b] : a < b;
                    });
  std::vector<char> in_set(n, 0);
  for (std::size_t k = 0; k < n_keep; ++k) in_set[order[k]] = 1;

  // Peel firms with no supplier inside the set until nothing changes.
  const Topology& t = net.topology();
  std::vector<std::size_t> suppliers(n, 0);
  for (NodeId j = 0; j < n; ++j) {
    if (!in_set[j]) continue;
    for (std::size_t k = t.col_begin(j); k < t.col_end(j); ++k) {
      const NodeId i = t.src(t.col_edge(k));
      if (in_set[i] && i != j) ++suppliers[j];
    }
  }
  std::vector<NodeId> queue;
  for (NodeId j = 0; j < n; ++j) {
    if (in_set[j] && suppliers[j] == 0) queue.push_back(j);
  }
  while (!queue.empty()) {
    const NodeId i = queue.back();
    queue.pop_back();
    if (!in_set[i]) continue;
    in_set[i] = 0;
    for (EdgeIndex e = t.row_begin(i); e < t.row_end(i); ++e) {
      const NodeId j = t.dst(e);
      if (in_set[j] && j != i && --suppliers[j] == 0) queue.push_back(j);
    }
  }

  std::vector<NodeId> kept;
  for (NodeId i = 0; i < n; ++i) {
    if (in_set[i]) kept.push_back(i);
  }
  if (kept.empty()) fail(ErrorCode::EmptySelection, "no firm has a supplier among the selection");
  return kept;
}

WeightedNetwork induced_subnetwork(const WeightedNetwork& net, std::span<const NodeId> kept) {
  const std::vector<std::int64_t> local = local_index(net.n_nodes(), kept);
  const Topology& t = net.topology();
  std::vector<Arc> arcs;
  std::vector<double> w;
  for (NodeId a = 0; a < kept.size(); ++a) {
    const NodeId i = kept[a];
    for (EdgeIndex e = t.row_begin(i); e < t.row_end(i); ++e) {
      const std::int64_t b = local[t.dst(e)];
      if (b == kExcluded) continue;
      arcs.push_back({a, static_cast<NodeId>(b)});
      w.push_back(net.weight(e));
    }
  }
  return WeightedNetwork(Topology::build(kept.size(), arcs), std::move(w));
}

TrimResult trim_links_to_count(const WeightedNetwork& subnet, std::size_t m_star,
                               std::uint64_t seed) {
  const std::size_t m = subnet.n_edges();
  if (m_star > m) {
    fail(ErrorCode::TargetExceedsEdges, "target of " + std::to_string(m_star) +
                                            " edges exceeds the " + std::to_string(m) + " present");
  }
  // Successive sampling with probabilities 1/W: key = Exp(1) * W, the
  // m - m* smallest keys are deleted.
  Rng rng(derive_seed(seed, stream::kTrim));
  std::vector<double> key(m);
  for (std::size_t e = 0; e < m; ++e) key[e] = rng.exponential() * subnet.weight(e);
  std::vector<EdgeIndex> order(m);
  std::iota(order.begin(), order.end(), EdgeIndex{0});
  const auto by_key = [&](EdgeIndex a, EdgeIndex b) {
    return key[a] != key[b] ? key[a] < key[b] : a < b;
  };
  const auto cut = order.begin() + static_cast<std::ptrdiff_t>(m - m_star);
  std::nth_element(order.begin(), cut, order.end(), by_key);

  std::vector<char> keep(m, 1);
  for (auto it = order.begin(); it != cut; ++it) keep[*it] = 0;

  TrimResult out;
  const Topology& t = subnet.topology();
  std::vector<Arc> arcs;
  arcs.reserve(m_star);
  out.kept_edges.reserve(m_star);
  out.deleted.reserve(m - m_star);
  for (EdgeIndex e = 0; e < m; ++e) {
    if (keep[e]) {
      arcs.push_back({t.src(e), t.dst(e)});
      out.kept_edges.push_back(e);
    } else {
      out.deleted.push_back({t.src(e), t.dst(e), subnet.weight(e)});
    }
  }
  out.kept = Topology::build(t.n_nodes(), arcs, t.proxy());
  return out;
}

TrimResult trim_links(const WeightedNetwork& subnet, double target_mean_degree,
                      std::uint64_t seed) {
  if (!(target_mean_degree >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "target mean degree must be non-negative");
  }
  const double m_star = std::round(target_mean_degree * static_cast<double>(subnet.n_nodes()));
  if (m_star > static_cast<double>(subnet.n_edges())) {
    fail(ErrorCode::TargetExceedsEdges, "mean degree " + std::to_string(target_mean_degree) +
                                            " needs more edges than present");
  }
  return trim_links_to_count(subnet, static_cast<std::size_t>(m_star), seed);
}

ProxiedEconomy aggregate_proxy(const WeightedNetwork& full, const NodeAccounts& acc,
                               std::span<const NodeId> kept, const Topology& kept_edges) {
  const std::size_t n = full.n_nodes();
  const std::size_t k = kept.size();
  if (acc.size() != n) fail(ErrorCode::SizeMismatch, "accounts do not match network size");
  if (kept_edges.n_nodes() != k) fail(ErrorCode::SizeMismatch, "kept topology has wrong size");
  const std::vector<std::int64_t> local = local_index(n, kept);
  const auto proxy = static_cast<NodeId>(k);

  const Topology& t = full.topology();
  std::vector<double> firm_w(kept_edges.n_edges(), 0.0);
  std::vector<char> seen(kept_edges.n_edges(), 0);
  std::vector<double> to_proxy(k, 0.0), from_proxy(k, 0.0);
  double self = 0.0;
  for (EdgeIndex e = 0; e < full.n_edges(); ++e) {
    const std::int64_t a = local[t.src(e)];
    const std::int64_t b = local[t.dst(e)];
    const double w = full.weight(e);
    if (a != kExcluded && b != kExcluded) {
      const auto hit = kept_edges.find(static_cast<NodeId>(a), static_cast<NodeId>(b));
      if (hit) {
        firm_w[*hit] = w;
        seen[*hit] = 1;
      } else {
        to_proxy[static_cast<std::size_t>(a)] += w;
        from_proxy[static_cast<std::size_t>(b)] += w;
      }
    } else if (a != kExcluded) {
      to_proxy[static_cast<std::size_t>(a)] += w;
    } else if (b != kExcluded) {
      from_proxy[static_cast<std::size_t>(b)] += w;
    } else {
      self += w;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    fail(ErrorCode::EdgeSetMismatch, "kept edges are not a subset of the full network");
  }

  std::vector<Edge> edges;
  edges.reserve(kept_edges.n_edges() + 2 * k + 1);
  for (EdgeIndex e = 0; e < kept_edges.n_edges(); ++e) {
    edges.push_back({kept_edges.src(e), kept_edges.dst(e), firm_w[e]});
  }
  for (NodeId a = 0; a < k; ++a) {
    if (to_proxy[a] > 0.0) edges.push_back({a, proxy, to_proxy[a]});
    if (from_proxy[a] > 0.0) edges.push_back({proxy, a, from_proxy[a]});
  }
  if (self > 0.0) edges.push_back({proxy, proxy, self});

  ProxiedEconomy out;
  out.network = WeightedNetwork::build(k + 1, edges, proxy);
  out.original_id.assign(kept.begin(), kept.end());

  // Firm strengths are carried over from the full accounts; the proxy's come
  // from its links.
  const Strengths s = strengths(out.network);
  NodeAccounts& pa = out.accounts;
  pa.s_in.resize(k + 1);
  pa.s_out.resize(k + 1);
  pa.value_added.resize(k + 1);
  pa.final_demand.resize(k + 1);
  for (NodeId a = 0; a < k; ++a) {
    pa.s_in[a] = acc.s_in[kept[a]];
    pa.s_out[a] = acc.s_out[kept[a]];
    pa.value_added[a] = acc.value_added[kept[a]];
    pa.final_demand[a] = acc.final_demand[kept[a]];
  }
  pa.s_in[k] = s.s_in[k];
  pa.s_out[k] = s.s_out[k];
  double y = 0.0, f = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    if (local[i] == kExcluded) y += acc.value_added[i], f += acc.final_demand[i];
  }
  pa.value_added[k] = y;
  pa.final_demand[k] = f;
  return out;
}

NodeAccounts impute_from_sectors(const NodeAccounts& acc, const SectorTable& sectors,
                                 std::span<const std::int32_t> labels) {
  const std::size_t n = acc.size();
  if (labels.size() != n || acc.s_out.size() != n) {
    fail(ErrorCode::SizeMismatch, "labels do not match accounts");
  }
  std::vector<char> used(sectors.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t s = labels[i];
    if (s == kNoSector) fail(ErrorCode::UnlabeledNode, "node " + std::to_string(i) + " has no sector");
    if (s < 0 || static_cast<std::size_t>(s) >= sectors.size()) {
      fail(ErrorCode::IndexOutOfRange, "node " + std::to_string(i) + " has unknown sector");
    }
    used[static_cast<std::size_t>(s)] = 1;
  }
  std::vector<double> va_ratio(sectors.size(), 0.0), fd_ratio(sectors.size(), 0.0);
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    if (!used[s]) continue;
    const SectorRow& r = sectors.rows[s];
    if (!(r.x > 0.0) || !(r.d > 0.0)) {
      fail(ErrorCode::ZeroSectorDenominator,
           "sector " + sectors.names[s] + " has no intermediate expenditure or sales");
    }
    va_ratio[s] = r.y / r.x;
    fd_ratio[s] = r.f / r.d;
  }
  NodeAccounts out{acc.s_in, acc.s_out, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = static_cast<std::size_t>(labels[i]);
    out.value_added[i] = va_ratio[s] * acc.s_in[i];
    out.final_demand[i] = fd_ratio[s] * acc.s_out[i];
  }
  return out;
}

}  // namespace firmrecon
