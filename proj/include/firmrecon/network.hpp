#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace firmrecon {

using NodeId = std::uint32_t;
using EdgeIndex = std::size_t;

struct Arc {
  NodeId src;
  NodeId dst;
  friend bool operator==(const Arc&, const Arc&) = default;
};

struct Edge {
  NodeId src;
  NodeId dst;
  double weight;
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class SelfLoops { ProxyOnly, Allowed };

// Binary directed graph. Edges are stored row-major (sorted by src, dst);
// edge indices refer to that order. A column index lists, for every dst,
// the row-major positions of its incoming edges in ascending src.
class Topology {
 public:
  Topology() = default;

  // Validates and canonicalizes. Self-loops are only allowed on the proxy,
  // which must be node n_nodes - 1, unless loops are explicitly allowed
  // (complete matrices for the gravity identity).
  static Topology build(std::size_t n_nodes, std::span<const Arc> arcs,
                        std::optional<NodeId> proxy = std::nullopt,
                        SelfLoops loops = SelfLoops::ProxyOnly);
  // Every ordered pair, optionally including the diagonal.
  static Topology complete(std::size_t n_nodes, bool with_self_loops);

  std::size_t n_nodes() const noexcept { return n_nodes_; }
  std::size_t n_edges() const noexcept { return dst_.size(); }
  std::optional<NodeId> proxy() const noexcept { return proxy_; }
  bool is_proxy(NodeId i) const noexcept { return proxy_ && *proxy_ == i; }
  SelfLoops self_loops() const noexcept { return loops_; }

  EdgeIndex row_begin(NodeId i) const noexcept { return row_ptr_[i]; }
  EdgeIndex row_end(NodeId i) const noexcept { return row_ptr_[i + 1]; }
  std::size_t col_begin(NodeId j) const noexcept { return col_ptr_[j]; }
  std::size_t col_end(NodeId j) const noexcept { return col_ptr_[j + 1]; }
  // Row-major index of the k-th entry of the column index.
  EdgeIndex col_edge(std::size_t k) const noexcept { return col_edge_[k]; }

  NodeId src(EdgeIndex e) const noexcept { return src_[e]; }
  NodeId dst(EdgeIndex e) const noexcept { return dst_[e]; }
  std::span<const NodeId> sources() const noexcept { return src_; }
  std::span<const NodeId> targets() const noexcept { return dst_; }

  std::optional<EdgeIndex> find(NodeId src, NodeId dst) const;
  std::vector<Arc> arcs() const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::size_t n_nodes_ = 0;
  std::optional<NodeId> proxy_;
  SelfLoops loops_ = SelfLoops::ProxyOnly;
  std::vector<EdgeIndex> row_ptr_{0};
  std::vector<NodeId> src_;
  std::vector<NodeId> dst_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<EdgeIndex> col_edge_;
};

class WeightedNetwork {
 public:
  WeightedNetwork() = default;
  // weights aligned with the topology's row-major edge order; all > 0.
  WeightedNetwork(Topology topology, std::vector<double> weights);

  static WeightedNetwork build(std::size_t n_nodes, std::span<const Edge> edges,
                               std::optional<NodeId> proxy = std::nullopt);

  const Topology& topology() const noexcept { return topology_; }
  std::size_t n_nodes() const noexcept { return topology_.n_nodes(); }
  std::size_t n_edges() const noexcept { return topology_.n_edges(); }
  std::optional<NodeId> proxy() const noexcept { return topology_.proxy(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(EdgeIndex e) const noexcept { return weights_[e]; }

  double total_weight() const;
  std::vector<Edge> edges() const;

  friend bool operator==(const WeightedNetwork&, const WeightedNetwork&) = default;

 private:
  Topology topology_;
  std::vector<double> weights_;
};

inline WeightedNetwork build_network(std::size_t n_nodes, std::span<const Edge> edges,
                                     std::optional<NodeId> proxy = std::nullopt) {
  return WeightedNetwork::build(n_nodes, edges, proxy);
}

struct Strengths {
  std::vector<double> s_in;
  std::vector<double> s_out;
};

// Row sums in row-major order, column sums in ascending source order.
Strengths strengths(const WeightedNetwork& net);

struct Degrees {
  std::vector<std::size_t> k_in;
  std::vector<std::size_t> k_out;
};

Degrees degrees(const Topology& t);
double average_degree(const Topology& t);

struct NodeAccounts {
  std::vector<double> s_in;
  std::vector<double> s_out;
  std::vector<double> value_added;
  std::vector<double> final_demand;

  std::size_t size() const noexcept { return s_in.size(); }
  double total_cost(std::size_t i) const { return s_in[i] + value_added[i]; }
  double total_sales(std::size_t i) const { return s_out[i] + final_demand[i]; }
};

// Strengths from the network plus the given value added and final demand.
NodeAccounts accounts_from_network(const WeightedNetwork& net, std::vector<double> value_added,
                                   std::vector<double> final_demand);

struct AccountsReport {
  std::vector<NodeId> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// Flags nodes whose strengths disagree with the network, whose entries are
// negative, or (non-proxy only) whose total sales and total costs differ,
// each beyond tol relative to the larger side.
AccountsReport validate_accounts(const NodeAccounts& acc, const WeightedNetwork& net, double tol);

}  // namespace firmrecon
