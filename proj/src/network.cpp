#include "firmrecon/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "firmrecon/error.hpp"

namespace firmrecon {

namespace {

bool arc_less(const Arc& a, const Arc& b) {
  return a.src != b.src ? a.src < b.src : a.dst < b.dst;
}

void check_proxy(std::size_t n_nodes, std::optional<NodeId> proxy) {
  if (proxy && (n_nodes == 0 || *proxy != n_nodes - 1)) {
    fail(ErrorCode::InvalidProxy, "proxy must be the last node, got " + std::to_string(*proxy));
  }
}

void check_arc(std::size_t n_nodes, std::optional<NodeId> proxy, const Arc& a,
               SelfLoops loops = SelfLoops::ProxyOnly) {
  if (a.src >= n_nodes || a.dst >= n_nodes) {
    fail(ErrorCode::IndexOutOfRange, "edge (" + std::to_string(a.src) + "," +
                                         std::to_string(a.dst) + ") with n_nodes=" +
                                         std::to_string(n_nodes));
  }
  if (a.src == a.dst && loops == SelfLoops::ProxyOnly && !(proxy && *proxy == a.src)) {
    fail(ErrorCode::SelfLoopOnNonProxy, "self-loop on node " + std::to_string(a.src));
  }
}

}  // namespace

Topology Topology::build(std::size_t n_nodes, std::span<const Arc> arcs,
                         std::optional<NodeId> proxy, SelfLoops loops) {
  check_proxy(n_nodes, proxy);
  for (const Arc& a : arcs) check_arc(n_nodes, proxy, a, loops);

  std::vector<Arc> sorted(arcs.begin(), arcs.end());
  if (!std::is_sorted(sorted.begin(), sorted.end(), arc_less)) {
    std::sort(sorted.begin(), sorted.end(), arc_less);
  }
  for (std::size_t e = 1; e < sorted.size(); ++e) {
    if (sorted[e] == sorted[e - 1]) {
      fail(ErrorCode::DuplicateEdge, "duplicate edge (" + std::to_string(sorted[e].src) + "," +
                                         std::to_string(sorted[e].dst) + ")");
    }
  }

  Topology t;
  t.n_nodes_ = n_nodes;
  t.proxy_ = proxy;
  t.loops_ = loops;
  const std::size_t m = sorted.size();
  t.src_.resize(m);
  t.dst_.resize(m);
  t.row_ptr_.assign(n_nodes + 1, 0);
  t.col_ptr_.assign(n_nodes + 1, 0);
  for (std::size_t e = 0; e < m; ++e) {
    t.src_[e] = sorted[e].src;
    t.dst_[e] = sorted[e].dst;
    ++t.row_ptr_[sorted[e].src + 1];
    ++t.col_ptr_[sorted[e].dst + 1];
  }
  for (std::size_t i = 0; i < n_nodes; ++i) {
    t.row_ptr_[i + 1] += t.row_ptr_[i];
    t.col_ptr_[i + 1] += t.col_ptr_[i];
  }
  // Row-major traversal visits each column in ascending src.
  t.col_edge_.resize(m);
  std::vector<std::size_t> fill(t.col_ptr_.begin(), t.col_ptr_.end() - 1);
  for (std::size_t e = 0; e < m; ++e) t.col_edge_[fill[t.dst_[e]]++] = e;
  return t;
}

Topology Topology::complete(std::size_t n_nodes, bool with_self_loops) {
  std::vector<Arc> arcs;
  arcs.reserve(n_nodes * n_nodes);
  for (NodeId i = 0; i < n_nodes; ++i) {
    for (NodeId j = 0; j < n_nodes; ++j) {
      if (i != j || with_self_loops) arcs.push_back({i, j});
    }
  }
  return build(n_nodes, arcs, std::nullopt,
               with_self_loops ? SelfLoops::Allowed : SelfLoops::ProxyOnly);
}

std::optional<EdgeIndex> Topology::find(NodeId src, NodeId dst) const {
  if (src >= n_nodes_) return std::nullopt;
  const auto first = dst_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[src]);
  const auto last = dst_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[src + 1]);
  const auto it = std::lower_bound(first, last, dst);
  if (it == last || *it != dst) return std::nullopt;
  return static_cast<EdgeIndex>(it - dst_.begin());
}

std::vector<Arc> Topology::arcs() const {
  std::vector<Arc> out(n_edges());
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = {src_[e], dst_[e]};
  return out;
}

WeightedNetwork::WeightedNetwork(Topology topology, std::vector<double> weights)
    : topology_(std::move(topology)), weights_(std::move(weights)) {
  if (weights_.size() != topology_.n_edges()) {
    fail(ErrorCode::SizeMismatch, "weights do not match edge count");
  }
  for (std::size_t e = 0; e < weights_.size(); ++e) {
    if (!(weights_[e] > 0.0) || !std::isfinite(weights_[e])) {
      fail(ErrorCode::NonPositiveWeight, "edge (" + std::to_string(topology_.src(e)) + "," +
                                             std::to_string(topology_.dst(e)) + ") has weight " +
                                             std::to_string(weights_[e]));
    }
  }
}

WeightedNetwork WeightedNetwork::build(std::size_t n_nodes, std::span<const Edge> edges,
                                       std::optional<NodeId> proxy) {
  check_proxy(n_nodes, proxy);
  std::vector<Edge> sorted(edges.begin(), edges.end());
  for (const Edge& e : sorted) {
    check_arc(n_nodes, proxy, {e.src, e.dst});
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      fail(ErrorCode::NonPositiveWeight, "edge (" + std::to_string(e.src) + "," +
                                             std::to_string(e.dst) + ") has weight " +
                                             std::to_string(e.weight));
    }
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
    return arc_less({a.src, a.dst}, {b.src, b.dst});
  });
  std::vector<Arc> arcs(sorted.size());
  std::vector<double> w(sorted.size());
  for (std::size_t e = 0; e < sorted.size(); ++e) {
    arcs[e] = {sorted[e].src, sorted[e].dst};
    w[e] = sorted[e].weight;
  }
  return WeightedNetwork(Topology::build(n_nodes, arcs, proxy), std::move(w));
}

double WeightedNetwork::total_weight() const {
  double total = 0.0;
  for (double w : weights_) total += w;
  return total;
}

std::vector<Edge> WeightedNetwork::edges() const {
  std::vector<Edge> out(n_edges());
  for (std::size_t e = 0; e < out.size(); ++e) {
    out[e] = {topology_.src(e), topology_.dst(e), weights_[e]};
  }
  return out;
}

Strengths strengths(const WeightedNetwork& net) {
  const Topology& t = net.topology();
  const std::size_t n = t.n_nodes();
  Strengths s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (NodeId i = 0; i < n; ++i) {
    double acc = 0.0;
    for (EdgeIndex e = t.row_begin(i); e < t.row_end(i); ++e) acc += net.weight(e);
    s.s_out[i] = acc;
  }
  for (NodeId j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = t.col_begin(j); k < t.col_end(j); ++k) acc += net.weight(t.col_edge(k));
    s.s_in[j] = acc;
  }
  return s;
}

Degrees degrees(const Topology& t) {
  const std::size_t n = t.n_nodes();
  Degrees d{std::vector<std::size_t>(n), std::vector<std::size_t>(n)};
  for (NodeId i = 0; i < n; ++i) {
    d.k_out[i] = t.row_end(i) - t.row_begin(i);
    d.k_in[i] = t.col_end(i) - t.col_begin(i);
  }
  return d;
}

double average_degree(const Topology& t) {
  if (t.n_nodes() == 0) return 0.0;
  return static_cast<double>(t.n_edges()) / static_cast<double>(t.n_nodes());
}

NodeAccounts accounts_from_network(const WeightedNetwork& net, std::vector<double> value_added,
                                   std::vector<double> final_demand) {
  if (value_added.size() != net.n_nodes() || final_demand.size() != net.n_nodes()) {
    fail(ErrorCode::SizeMismatch, "accounts do not match network size");
  }
  Strengths s = strengths(net);
  return NodeAccounts{std::move(s.s_in), std::move(s.s_out), std::move(value_added),
                      std::move(final_demand)};
}

AccountsReport validate_accounts(const NodeAccounts& acc, const WeightedNetwork& net, double tol) {
  const std::size_t n = net.n_nodes();
  if (acc.s_in.size() != n || acc.s_out.size() != n || acc.value_added.size() != n ||
      acc.final_demand.size() != n) {
    fail(ErrorCode::SizeMismatch, "accounts sized " + std::to_string(acc.size()) +
                                      " for network of " + std::to_string(n));
  }
  const Strengths s = strengths(net);
  const auto off = [tol](double a, double b) {
    return std::abs(a - b) > tol * std::max(std::abs(a), std::abs(b));
  };
  AccountsReport report;
  for (NodeId i = 0; i < n; ++i) {
    bool bad = acc.s_in[i] < 0.0 || acc.s_out[i] < 0.0 || acc.final_demand[i] < 0.0 ||
               off(acc.s_in[i], s.s_in[i]) || off(acc.s_out[i], s.s_out[i]);
    if (!net.topology().is_proxy(i)) bad = bad || off(acc.total_sales(i), acc.total_cost(i));
    if (bad) report.violations.push_back(i);
  }
  return report;
}

}  // namespace firmrecon
