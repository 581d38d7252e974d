#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "firmrecon/error.hpp"
#include "firmrecon/metrics.hpp"
#include "firmrecon/recon.hpp"
#include "test_util.hpp"

using namespace firmrecon;

TEST_CASE("MaxEnt prescription by hand") {
  const std::vector<double> s_out{2.0, 1.0}, s_in{1.0, 2.0};
  const MaxEntPrescription me(s_out, s_in);
  CHECK(me(0, 1) == doctest::Approx(4.0 / 3.0));
  CHECK(me.total() == 3.0);

  const std::vector<double> flat(5, 7.0);
  const MaxEntPrescription u(flat, flat);
  for (NodeId i = 0; i < 5; ++i) {
    for (NodeId j = 0; j < 5; ++j) CHECK(u(i, j) == doctest::Approx(7.0 / 5.0));
  }
  const std::vector<double> off{2.0, 2.0};
  CHECK_THROWS_AS(MaxEntPrescription(off, s_in), Error);
}

TEST_CASE("IPF on the forced chain") {
  const std::vector<Arc> arcs{{0, 1}};
  const Topology t = Topology::build(2, arcs);
  const std::vector<double> s_out{5.0, 0.0}, s_in{0.0, 5.0}, init{1.0};
  const IpfResult r = ipf_balance(t, s_out, s_in, init);
  CHECK(r.converged);
  CHECK(r.weights[0] == doctest::Approx(5.0));
}

TEST_CASE("IPF on a complete topology with loops reproduces MaxEnt in one sweep") {
  const std::size_t n = 30;
  const Topology t = Topology::complete(n, true);
  std::vector<double> s_out(n), s_in(n);
  for (std::size_t i = 0; i < n; ++i) {
    s_out[i] = 1.0 + static_cast<double>(i * i % 17);
    s_in[i] = 2.0 + static_cast<double>(i * 7 % 11);
  }
  const double ratio = std::accumulate(s_out.begin(), s_out.end(), 0.0) /
                       std::accumulate(s_in.begin(), s_in.end(), 0.0);
  for (double& x : s_in) x *= ratio;
  const std::vector<double> me = MaxEntPrescription(s_out, s_in).on(t);
  const IpfResult r = ipf_balance(t, s_out, s_in, me, {1e-13, 100});
  CHECK(r.iterations <= 1);
  CHECK(testutil::max_rel_diff(r.weights, me) < 1e-12);

  const ReconstructionResult crem = fit_crem(t, s_out, s_in);
  CHECK(testutil::max_rel_diff(crem.expected, me) < 1e-12);
}

TEST_CASE("IPF fixed point matches a dense oracle") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const std::size_t n = 20;
    const WeightedNetwork truth = testutil::random_network(n, 0.15, 100 + seed);
    const Strengths s = strengths(truth);
    const Topology& t = truth.topology();
    const std::vector<double> init = MaxEntPrescription(s.s_out, s.s_in).on(t);
    const IpfResult r = ipf_balance(t, s.s_out, s.s_in, init, {1e-14, 200000});
    const testutil::Dense oracle = testutil::dense_ipf(t, s.s_out, s.s_in, init);
    std::vector<double> expect(t.n_edges());
    for (EdgeIndex e = 0; e < t.n_edges(); ++e) expect[e] = oracle(t.src(e), t.dst(e));
    CHECK(testutil::max_rel_diff(r.weights, expect) < 1e-10);
  }
}

TEST_CASE("IPF meets the marginals and the serial kernel agrees bitwise") {
  const WeightedNetwork truth = testutil::random_network(300, 0.02, 8, true);
  const Strengths s = strengths(truth);
  const Topology& t = truth.topology();
  const std::vector<double> init = MaxEntPrescription(s.s_out, s.s_in).on(t);
  const IpfResult par = ipf_balance(t, s.s_out, s.s_in, init);
  const IpfResult ser = ipf_balance_serial(t, s.s_out, s.s_in, init);
  CHECK(par.converged);
  CHECK(par.relative_l1 <= 1e-8);
  CHECK(par.weights == ser.weights);
  CHECK(par.iterations == ser.iterations);
}

TEST_CASE("IPF reports infeasible support") {
  const std::vector<Arc> arcs{{0, 1}};
  const Topology t = Topology::build(3, arcs);
  const std::vector<double> s_out{1.0, 0.0, 1.0}, s_in{0.0, 2.0, 0.0}, init{1.0};
  try {
    ipf_balance(t, s_out, s_in, init);
    FAIL("expected InfeasibleSupport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasibleSupport);
  }
}

TEST_CASE("IPF reports non-convergence instead of throwing") {
  const WeightedNetwork truth = testutil::random_network(50, 0.1, 3);
  const Strengths s = strengths(truth);
  const std::vector<double> init(truth.n_edges(), 1.0);
  const IpfResult r = ipf_balance(truth.topology(), s.s_out, s.s_in, init, {1e-15, 1});
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.weights.size() == truth.n_edges());
}

TEST_CASE("CReM on a single edge") {
  const std::vector<Arc> arcs{{0, 1}};
  const Topology t = Topology::build(2, arcs);
  const std::vector<double> s_out{4.0, 0.0}, s_in{0.0, 4.0};
  const ReconstructionResult r = fit_crem(t, s_out, s_in);
  CHECK(r.expected[0] == doctest::Approx(4.0));
  CHECK(r.rate[0] == doctest::Approx(0.25));
}

TEST_CASE("CReM is equivariant under scaling of the marginals") {
  const WeightedNetwork truth = testutil::random_network(60, 0.08, 12);
  const Strengths s = strengths(truth);
  std::vector<double> so = s.s_out, si = s.s_in;
  for (double& x : so) x *= 1024.0;
  for (double& x : si) x *= 1024.0;
  const ReconstructionResult a = fit_crem(truth.topology(), s.s_out, s.s_in);
  const ReconstructionResult b = fit_crem(truth.topology(), so, si);
  for (EdgeIndex e = 0; e < a.expected.size(); ++e) {
    CHECK(b.expected[e] == doctest::Approx(1024.0 * a.expected[e]).epsilon(1e-12));
    CHECK(b.ci_high[e] == doctest::Approx(1024.0 * a.ci_high[e]).epsilon(1e-12));
  }
}

TEST_CASE("confidence bounds in closed form") {
  const ConfidenceInterval ci = weight_confidence_interval(1.0);
  CHECK(ci.low == doctest::Approx(-std::log(std::exp(-1.0) + 0.25)).epsilon(1e-15));
  CHECK(ci.low == doctest::Approx(0.481462).epsilon(1e-6));
  CHECK(ci.high == doctest::Approx(2.138090).epsilon(1e-6));
  const ConfidenceInterval half = weight_confidence_interval(2.0);
  CHECK(half.low == doctest::Approx(ci.low / 2.0));
  CHECK_THROWS_AS(weight_confidence_interval(1.0, 0.25, 0.5), Error);
}

TEST_CASE("ensemble draws have the fitted means and half land inside the bounds") {
  const WeightedNetwork truth = testutil::random_network(1000, 0.1, 77);
  REQUIRE(truth.n_edges() >= 100000);
  const Strengths s = strengths(truth);
  const ReconstructionResult r = fit_crem(truth.topology(), s.s_out, s.s_in);
  const WeightedNetwork draw = sample_network(r, 5, 0);
  const double cov = ci_coverage(draw.weights(), r.ci_low, r.ci_high);
  CHECK(std::abs(cov - 0.5) <= 0.01);

  // Sample mean of a single pair over many networks.
  const std::vector<Arc> arcs{{0, 1}};
  const Topology t = Topology::build(2, arcs);
  const std::vector<double> so{3.0, 0.0}, si{0.0, 3.0};
  const ReconstructionResult one = fit_crem(t, so, si);
  const std::size_t draws = 100000;
  const std::vector<WeightedNetwork> nets = sample_ensemble(one, draws, 9);
  double mean = 0.0;
  for (const WeightedNetwork& w : nets) mean += w.weight(0);
  mean /= static_cast<double>(draws);
  CHECK(std::abs(mean - 3.0) < 3.0 * 3.0 / std::sqrt(static_cast<double>(draws)));

  CHECK(sample_network(r, 5, 1).weights()[0] == sample_ensemble(r, 2, 5)[1].weights()[0]);
}
