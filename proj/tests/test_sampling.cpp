#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "firmrecon/error.hpp"
#include "firmrecon/sampling.hpp"
#include "firmrecon/synth.hpp"
#include "test_util.hpp"

using namespace firmrecon;

namespace {

// Sort, cut, then repeatedly drop any member without a supplier inside.
std::vector<NodeId> brute_force_select(const WeightedNetwork& net, const std::vector<double>& s_out,
                                       std::size_t n_keep) {
  const std::size_t n = net.n_nodes();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return s_out[a] > s_out[b]; });
  std::vector<char> in(n, 0);
  for (std::size_t k = 0; k < std::min(n_keep, n); ++k) in[order[k]] = 1;
  const testutil::Dense w = testutil::dense(net);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!in[j]) continue;
      bool supplied = false;
      for (std::size_t i = 0; i < n; ++i) supplied |= (i != j && in[i] && w(i, j) > 0.0);
      if (!supplied) in[j] = 0, changed = true;
    }
  }
  std::vector<NodeId> out;
  for (NodeId i = 0; i < n; ++i) {
    if (in[i]) out.push_back(i);
  }
  return out;
}

NodeAccounts plain_accounts(const WeightedNetwork& net) {
  const std::size_t n = net.n_nodes();
  return accounts_from_network(net, std::vector<double>(n, 1.0), std::vector<double>(n, 1.0));
}

}  // namespace

TEST_CASE("top-firm selection matches a sort oracle, ties by id") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t n = 20 + 2 * seed;
    const WeightedNetwork net = testutil::random_network(n, 0.04 + 0.005 * seed, seed);
    NodeAccounts acc = plain_accounts(net);
    // Coarse rounding creates ties at the cutoff.
    for (double& s : acc.s_out) s = std::round(s / 500.0);
    const std::size_t n_keep = n / 3;
    const std::vector<NodeId> expect = brute_force_select(net, acc.s_out, n_keep);
    if (expect.empty()) {
      CHECK_THROWS_AS(select_top_firms(net, acc, n_keep), Error);
    } else {
      CHECK(select_top_firms(net, acc, n_keep) == expect);
    }
  }
}

TEST_CASE("selecting everyone keeps everyone with a supplier") {
  const WeightedNetwork net = testutil::random_network(30, 0.1, 9);
  const NodeAccounts acc = plain_accounts(net);
  const std::vector<NodeId> kept = select_top_firms(net, acc, 30);
  CHECK(kept.size() == 30);
  CHECK_THROWS_AS(select_top_firms(net, acc, 0), Error);
}

TEST_CASE("trim hits the target edge count exactly") {
  const WeightedNetwork net = testutil::random_network(200, 0.05, 2);
  for (const double deg : {0.5, 1.0, 2.9, 4.0}) {
    const TrimResult r = trim_links(net, deg, 17);
    const auto m_star = static_cast<std::size_t>(std::round(deg * 200.0));
    CHECK(r.kept.n_edges() == m_star);
    CHECK(r.kept_edges.size() == m_star);
    CHECK(r.deleted.size() == net.n_edges() - m_star);
    for (std::size_t k = 0; k < r.kept_edges.size(); ++k) {
      CHECK(r.kept.src(k) == net.topology().src(r.kept_edges[k]));
      CHECK(r.kept.dst(k) == net.topology().dst(r.kept_edges[k]));
    }
  }
  const TrimResult none = trim_links_to_count(net, net.n_edges(), 1);
  CHECK(none.deleted.empty());
  CHECK(none.kept == net.topology());
  try {
    trim_links_to_count(net, net.n_edges() + 1, 1);
    FAIL("expected TargetExceedsEdges");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TargetExceedsEdges);
  }
}

TEST_CASE("trim is deterministic in its seed") {
  const WeightedNetwork net = testutil::random_network(100, 0.05, 4);
  CHECK(trim_links(net, 2.0, 5).kept == trim_links(net, 2.0, 5).kept);
  CHECK_FALSE(trim_links(net, 2.0, 5).kept == trim_links(net, 2.0, 6).kept);
}

TEST_CASE("deletion probabilities follow successive sampling with 1/w") {
  const std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 4.0},
                                {3, 0, 8.0}, {0, 2, 0.5}, {1, 3, 3.0}};
  const WeightedNetwork net = WeightedNetwork::build(4, edges);
  const std::size_t m = net.n_edges();
  const std::size_t deletions = 3;

  // Exact marginal deletion probabilities over all ordered draw sequences.
  std::vector<double> exact(m, 0.0);
  auto recurse = [&](auto&& self, std::vector<char>& gone, std::size_t left, double p) -> void {
    if (left == 0) {
      for (std::size_t e = 0; e < m; ++e) exact[e] += gone[e] ? p : 0.0;
      return;
    }
    double total = 0.0;
    for (std::size_t e = 0; e < m; ++e) total += gone[e] ? 0.0 : 1.0 / net.weight(e);
    for (std::size_t e = 0; e < m; ++e) {
      if (gone[e]) continue;
      gone[e] = 1;
      self(self, gone, left - 1, p * (1.0 / net.weight(e)) / total);
      gone[e] = 0;
    }
  };
  std::vector<char> gone(m, 0);
  recurse(recurse, gone, deletions, 1.0);

  const std::size_t runs = 40000;
  std::vector<double> hits(m, 0.0);
  for (std::size_t r = 0; r < runs; ++r) {
    const TrimResult t = trim_links_to_count(net, m - deletions, r);
    for (const Edge& d : t.deleted) hits[*net.topology().find(d.src, d.dst)] += 1.0;
  }
  for (std::size_t e = 0; e < m; ++e) {
    const double p = hits[e] / static_cast<double>(runs);
    const double sd = std::sqrt(exact[e] * (1.0 - exact[e]) / static_cast<double>(runs));
    CHECK(std::abs(p - exact[e]) < 4.0 * sd + 1e-12);
  }
}

TEST_CASE("proxy aggregation conserves flows") {
  SynthConfig cfg;
  cfg.n_firms = 400;
  cfg.seed = 21;
  const Economy e = generate_ground_truth(cfg);
  const std::vector<NodeId> kept = select_top_firms(e.network, e.accounts, 60);
  const WeightedNetwork sub = induced_subnetwork(e.network, kept);
  const TrimResult trim = trim_links(sub, 1.5, 3);
  const ProxiedEconomy p = aggregate_proxy(e.network, e.accounts, kept, trim.kept);

  const std::size_t k = kept.size();
  REQUIRE(p.network.n_nodes() == k + 1);
  CHECK(p.network.proxy() == NodeId(k));
  // A deleted firm-firm flow is routed through the proxy, so it appears on
  // both proxy links.
  double deleted = 0.0;
  for (const Edge& d : trim.deleted) deleted += d.weight;
  CHECK(p.network.total_weight() ==
        doctest::Approx(e.network.total_weight() + deleted).epsilon(1e-12));
  const Strengths s = strengths(p.network);
  for (std::size_t a = 0; a < k; ++a) {
    CHECK(s.s_out[a] == doctest::Approx(e.accounts.s_out[kept[a]]).epsilon(1e-12));
    CHECK(s.s_in[a] == doctest::Approx(e.accounts.s_in[kept[a]]).epsilon(1e-12));
  }
  CHECK(validate_accounts(p.accounts, p.network, 1e-9).ok());
  double y = 0.0, f = 0.0;
  for (std::size_t i = 0; i < e.accounts.size(); ++i) {
    y += e.accounts.value_added[i];
    f += e.accounts.final_demand[i];
  }
  double py = 0.0, pf = 0.0;
  for (std::size_t a = 0; a <= k; ++a) {
    py += p.accounts.value_added[a];
    pf += p.accounts.final_demand[a];
  }
  CHECK(py == doctest::Approx(y).epsilon(1e-12));
  CHECK(pf == doctest::Approx(f).epsilon(1e-12));
}

TEST_CASE("proxy aggregation by hand") {
  const std::vector<Edge> edges{{0, 1, 5.0}, {1, 0, 2.0}};
  const WeightedNetwork full = WeightedNetwork::build(2, edges);
  const NodeAccounts acc = plain_accounts(full);
  const std::vector<NodeId> kept{0, 1};

  // Nothing deleted, nobody excluded: the proxy has no links.
  const ProxiedEconomy same = aggregate_proxy(full, acc, kept, full.topology());
  CHECK(same.network.n_edges() == 2);
  CHECK(same.accounts.s_in[2] == 0.0);

  // Delete 0->1: it reappears as 0->proxy and proxy->1.
  const std::vector<Arc> left{{1, 0}};
  const ProxiedEconomy p = aggregate_proxy(full, acc, kept, Topology::build(2, left));
  const Topology& t = p.network.topology();
  CHECK(p.network.weight(*t.find(0, 2)) == 5.0);
  CHECK(p.network.weight(*t.find(2, 1)) == 5.0);
  CHECK_FALSE(t.find(2, 2).has_value());
  CHECK(p.accounts.s_out[0] == 5.0);
  CHECK(p.accounts.s_in[1] == 5.0);

  const std::vector<Arc> foreign{{0, 1}, {1, 0}};
  const std::vector<Edge> only{{0, 1, 1.0}};
  CHECK_THROWS_AS(aggregate_proxy(WeightedNetwork::build(2, only), acc, kept,
                                  Topology::build(2, foreign)),
                  Error);
}

TEST_CASE("sector imputation") {
  const std::vector<Edge> edges{{0, 1, 10.0}, {1, 0, 4.0}};
  const WeightedNetwork net = WeightedNetwork::build(2, edges);
  const NodeAccounts acc = plain_accounts(net);
  SectorTable table{{"A", "B"}, {SectorRow{0, 20, 10, 10, 4}, SectorRow{0, 10, 10, 0, 0}}};
  const std::vector<std::int32_t> labels{0, 1};
  const NodeAccounts out = impute_from_sectors(acc, table, labels);
  CHECK(out.value_added[0] == doctest::Approx(0.5 * 4.0));
  CHECK(out.final_demand[0] == doctest::Approx(0.4 * 10.0));
  CHECK(out.value_added[1] == 0.0);
  CHECK(out.final_demand[1] == 0.0);

  const std::vector<std::int32_t> unlabeled{0, kNoSector};
  CHECK_THROWS_AS(impute_from_sectors(acc, table, unlabeled), Error);
  table.rows[1].x = 0.0;
  try {
    impute_from_sectors(acc, table, labels);
    FAIL("expected ZeroSectorDenominator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroSectorDenominator);
  }
}
