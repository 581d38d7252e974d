#include <doctest.h>

#include <cmath>
#include <vector>

#include "firmrecon/error.hpp"
#include "firmrecon/shocks.hpp"

using namespace firmrecon;

namespace {

// Two-period rows reproduce a chosen sample variance: {0, sqrt(2 var)}.
ShockPanel with_variances(const std::vector<double>& var, std::optional<NodeId> proxy = {}) {
  std::vector<double> g;
  for (double v : var) {
    g.push_back(0.0);
    g.push_back(std::sqrt(2.0 * v));
  }
  return ShockPanel(var.size(), 2, g, proxy);
}

}  // namespace

TEST_CASE("aggregate volatility by hand") {
  const ShockPanel p = with_variances({4.0, 9.0});
  const std::vector<double> v{0.5, 0.5};
  CHECK(aggregate_volatility(p, v, true) == doctest::Approx(std::sqrt(1.0 + 2.25)));
  CHECK(aggregate_volatility(p, v, true) == doctest::Approx(1.8028).epsilon(1e-4));

  const ShockPanel one = with_variances({2.25});
  const std::vector<double> unit{1.0};
  CHECK(aggregate_volatility(one, unit, true) == doctest::Approx(1.5));

  const ShockPanel px = with_variances({4.0, 9.0}, NodeId{1});
  CHECK(aggregate_volatility(px, v, false) == doctest::Approx(1.0));
  CHECK(aggregate_volatility(px, v, true) == doctest::Approx(std::sqrt(3.25)));

  const std::vector<double> short_v{1.0};
  CHECK_THROWS_AS(aggregate_volatility(p, short_v, true), Error);
}

TEST_CASE("variance shares") {
  const ShockPanel p = with_variances({1.0, 1.0, 4.0});
  const std::vector<double> v{0.25, 0.25, 0.5};
  const std::vector<std::vector<NodeId>> all{{0, 1, 2}};
  CHECK(variance_shares(p, v, all)[0] == doctest::Approx(1.0));

  const std::vector<std::vector<NodeId>> halves{{0}, {1}};
  const std::vector<double> s = variance_shares(p, v, halves);
  CHECK(s[0] == doctest::Approx(s[1]));
  CHECK(s[0] + s[1] + 1.0 / 1.125 == doctest::Approx(1.0));

  const std::vector<std::vector<NodeId>> overlap{{0, 1}, {1}};
  try {
    variance_shares(p, v, overlap);
    FAIL("expected OverlappingPartition");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverlappingPartition);
  }
}

TEST_CASE("simulated shocks are centred with the requested spread") {
  const double sigma = 6.0;
  const ShockPanel p = simulate_tfp(100000, 10, sigma, 3);
  double sum = 0.0, sq = 0.0;
  for (double x : p.growth()) {
    sum += x;
    sq += x * x;
  }
  const auto n = static_cast<double>(p.growth().size());
  CHECK(std::abs(sum / n) < 3.0 * sigma / std::sqrt(n));
  CHECK(std::sqrt(sq / n) == doctest::Approx(sigma).epsilon(0.01));
  CHECK(simulate_tfp(50, 10, sigma, 3).growth().size() == 500);
}

TEST_CASE("simulation is deterministic in its seed") {
  const ShockPanel a = simulate_tfp(40, 10, 1.0, 5);
  const ShockPanel b = simulate_tfp(40, 10, 1.0, 5);
  const ShockPanel c = simulate_tfp(40, 10, 1.0, 6);
  CHECK(std::vector<double>(a.growth().begin(), a.growth().end()) ==
        std::vector<double>(b.growth().begin(), b.growth().end()));
  CHECK_FALSE(std::vector<double>(a.growth().begin(), a.growth().end()) ==
              std::vector<double>(c.growth().begin(), c.growth().end()));
}

TEST_CASE("proxy row from excluded firms") {
  const ShockPanel firms = with_variances({1.0, 2.0});
  // Variances 1, 4, 9: the median firm is the second.
  const ShockPanel excluded(3, 2, {0.0, std::sqrt(2.0), 1.0, 1.0 + std::sqrt(8.0), 0.0, std::sqrt(18.0)});
  const ShockPanel m = with_proxy(firms, excluded, ProxyShockRule::MedianFirm);
  REQUIRE(m.n_nodes() == 3);
  CHECK(m.proxy() == NodeId{2});
  CHECK(m.series(2)[0] == 1.0);
  CHECK(m.variance(2) == doctest::Approx(4.0));

  const ShockPanel pm = with_proxy(firms, excluded, ProxyShockRule::PeriodMedian);
  CHECK(pm.series(2)[0] == 0.0);
  CHECK(pm.series(2)[1] == doctest::Approx(1.0 + std::sqrt(8.0)));

  const ShockPanel sim = simulate_tfp(5, 2, 1.0, 2, &excluded, ProxyShockRule::MedianFirm);
  CHECK(sim.n_nodes() == 6);
  CHECK(sim.proxy() == NodeId{5});
  CHECK_THROWS_AS(with_proxy(m, excluded, ProxyShockRule::MedianFirm), Error);
}

TEST_CASE("volatility scales linearly with sigma") {
  const std::vector<double> v(30, 1.0 / 30.0);
  const double a = aggregate_volatility(simulate_tfp(30, 10, 1.0, 8), v, true);
  const double b = aggregate_volatility(simulate_tfp(30, 10, 4.0, 8), v, true);
  CHECK(b == doctest::Approx(4.0 * a).epsilon(1e-12));
}
