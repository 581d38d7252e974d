#include "firmrecon/recon.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "firmrecon/error.hpp"
#include "firmrecon/rng.hpp"

namespace firmrecon {

MaxEntPrescription::MaxEntPrescription(std::span<const double> s_out, std::span<const double> s_in)
    : s_out_(s_out.begin(), s_out.end()), s_in_(s_in.begin(), s_in.end()), total_(0.0) {
  if (s_out.size() != s_in.size()) fail(ErrorCode::SizeMismatch, "marginals differ in length");
  double total_in = 0.0;
  for (double x : s_out_) total_ += x;
  for (double x : s_in_) total_in += x;
  if (!(total_ > 0.0)) fail(ErrorCode::InvalidArgument, "total weight must be positive");
  if (std::abs(total_ - total_in) > 1e-9 * std::max(total_, total_in)) {
    fail(ErrorCode::UnbalancedTotals, "sum of out-strengths " + std::to_string(total_) +
                                          " differs from sum of in-strengths " +
                                          std::to_string(total_in));
  }
}

std::vector<double> MaxEntPrescription::on(const Topology& t) const {
  if (t.n_nodes() != s_out_.size()) fail(ErrorCode::SizeMismatch, "topology size mismatch");
  std::vector<double> w(t.n_edges());
  for (EdgeIndex e = 0; e < w.size(); ++e) w[e] = (*this)(t.src(e), t.dst(e));
  return w;
}

namespace {

template <bool Parallel>
IpfResult ipf_impl(const Topology& t, std::span<const double> s_out, std::span<const double> s_in,
                   std::span<const double> init, const IpfOptions& opt) {
  const std::size_t n = t.n_nodes();
  const std::size_t m = t.n_edges();
  if (s_out.size() != n || s_in.size() != n || init.size() != m) {
    fail(ErrorCode::SizeMismatch, "marginals or initial weights do not match the topology");
  }

  IpfResult r;
  r.weights.assign(m, 0.0);
  std::vector<double>& w = r.weights;
  for (EdgeIndex e = 0; e < m; ++e) {
    if (s_out[t.src(e)] > 0.0 && s_in[t.dst(e)] > 0.0) {
      if (!(init[e] > 0.0) || !std::isfinite(init[e])) {
        fail(ErrorCode::InvalidArgument, "initial weights must be positive on the support");
      }
      w[e] = init[e];
    }
  }

  std::vector<char> row_ok(n, 0), col_ok(n, 0);
  for (EdgeIndex e = 0; e < m; ++e) {
    if (w[e] > 0.0) row_ok[t.src(e)] = col_ok[t.dst(e)] = 1;
  }
  double total = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    if (s_out[i] > 0.0 && !row_ok[i]) {
      fail(ErrorCode::InfeasibleSupport, "node " + std::to_string(i) +
                                             " needs out-flow but has no usable edge");
    }
    if (s_in[i] > 0.0 && !col_ok[i]) {
      fail(ErrorCode::InfeasibleSupport, "node " + std::to_string(i) +
                                             " needs in-flow but has no usable edge");
    }
    total += s_out[i];
  }

  // Per-node residuals are written in parallel and summed serially so the
  // result does not depend on the thread count.
  std::vector<double> row_sum(n), row_res(n), col_res(n);
  const auto ni = static_cast<std::int64_t>(n);

#pragma omp parallel for schedule(static) if (Parallel)
  for (std::int64_t jj = 0; jj < ni; ++jj) {
    const auto j = static_cast<NodeId>(jj);
    double c = 0.0;
    for (std::size_t k = t.col_begin(j); k < t.col_end(j); ++k) c += w[t.col_edge(k)];
    col_res[j] = std::abs(c - s_in[j]);
  }

  for (std::size_t sweep = 0;; ++sweep) {
#pragma omp parallel for schedule(static) if (Parallel)
    for (std::int64_t ii = 0; ii < ni; ++ii) {
      const auto i = static_cast<NodeId>(ii);
      double s = 0.0;
      for (EdgeIndex e = t.row_begin(i); e < t.row_end(i); ++e) s += w[e];
      row_sum[i] = s;
      row_res[i] = std::abs(s - s_out[i]);
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) l1 += row_res[i];
    for (std::size_t i = 0; i < n; ++i) l1 += col_res[i];
    r.l1 = l1;
    r.relative_l1 = l1 / total;
    r.iterations = sweep;
    if (r.relative_l1 <= opt.tol) {
      r.converged = true;
      break;
    }
    if (sweep == opt.max_iter || !std::isfinite(l1)) break;

#pragma omp parallel for schedule(static) if (Parallel)
    for (std::int64_t ii = 0; ii < ni; ++ii) {
      const auto i = static_cast<NodeId>(ii);
      if (!(row_sum[i] > 0.0)) continue;
      const double scale = s_out[i] / row_sum[i];
      for (EdgeIndex e = t.row_begin(i); e < t.row_end(i); ++e) w[e] *= scale;
    }

#pragma omp parallel for schedule(static) if (Parallel)
    for (std::int64_t jj = 0; jj < ni; ++jj) {
      const auto j = static_cast<NodeId>(jj);
      double c = 0.0;
      for (std::size_t k = t.col_begin(j); k < t.col_end(j); ++k) c += w[t.col_edge(k)];
      if (!(c > 0.0)) {
        col_res[j] = s_in[j];
        continue;
      }
      const double scale = s_in[j] / c;
      double after = 0.0;
      for (std::size_t k = t.col_begin(j); k < t.col_end(j); ++k) {
        double& x = w[t.col_edge(k)];
        x *= scale;
        after += x;
      }
      col_res[j] = std::abs(after - s_in[j]);
    }
  }
  return r;
}

}  // namespace

IpfResult ipf_balance(const Topology& t, std::span<const double> s_out, std::span<const double> s_in,
                      std::span<const double> init, const IpfOptions& opt) {
  return ipf_impl<true>(t, s_out, s_in, init, opt);
}

IpfResult ipf_balance_serial(const Topology& t, std::span<const double> s_out,
                             std::span<const double> s_in, std::span<const double> init,
                             const IpfOptions& opt) {
  return ipf_impl<false>(t, s_out, s_in, init, opt);
}

ConfidenceInterval weight_confidence_interval(double rate, double q_lower, double q_upper) {
  const double inv_e = std::exp(-1.0);
  // ln arguments must stay in (0, 1].
  if (!(q_lower >= 0.0) || !(q_upper >= 0.0) || !(q_lower <= 1.0 - inv_e) || !(q_upper < inv_e)) {
    fail(ErrorCode::InvalidConfidenceLevel, "need 0 <= q- <= 1 - 1/e and 0 <= q+ < 1/e");
  }
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    fail(ErrorCode::InvalidArgument, "rate must be positive and finite");
  }
  return {-std::log(inv_e + q_lower) / rate, -std::log(inv_e - q_upper) / rate};
}

WeightedNetwork ReconstructionResult::expected_network() const {
  return WeightedNetwork(topology, expected);
}

ReconstructionResult fit_crem(const Topology& t, std::span<const double> s_out,
                              std::span<const double> s_in, const CremOptions& opt) {
  // Validate the levels before doing any work.
  weight_confidence_interval(1.0, opt.q_lower, opt.q_upper);
  const MaxEntPrescription me(s_out, s_in);
  const std::vector<double> init = me.on(t);
  IpfResult ipf = opt.parallel ? ipf_balance(t, s_out, s_in, init, opt.ipf)
                               : ipf_balance_serial(t, s_out, s_in, init, opt.ipf);

  ReconstructionResult r;
  r.l1 = ipf.l1;
  r.relative_l1 = ipf.relative_l1;
  r.iterations = ipf.iterations;
  r.converged = ipf.converged;

  std::vector<Arc> arcs;
  arcs.reserve(t.n_edges());
  for (EdgeIndex e = 0; e < t.n_edges(); ++e) {
    if (!(ipf.weights[e] > 0.0)) continue;
    arcs.push_back({t.src(e), t.dst(e)});
    r.expected.push_back(ipf.weights[e]);
    const double rate = 1.0 / ipf.weights[e];
    r.rate.push_back(rate);
    const double ci_rate = opt.ci_rate == CiRate::PostIpf ? rate : 1.0 / init[e];
    const ConfidenceInterval ci = weight_confidence_interval(ci_rate, opt.q_lower, opt.q_upper);
    r.ci_low.push_back(ci.low);
    r.ci_high.push_back(ci.high);
  }
  r.topology = Topology::build(t.n_nodes(), arcs, t.proxy(), t.self_loops());
  return r;
}

WeightedNetwork sample_network(const ReconstructionResult& r, std::uint64_t seed,
                               std::size_t sample_index) {
  Rng rng(derive_seed(seed, stream::kEnsemble, sample_index));
  std::vector<double> w(r.rate.size());
  for (std::size_t e = 0; e < w.size(); ++e) w[e] = rng.exponential() / r.rate[e];
  return WeightedNetwork(r.topology, std::move(w));
}

std::vector<WeightedNetwork> sample_ensemble(const ReconstructionResult& r, std::size_t n_samples,
                                             std::uint64_t seed) {
  if (n_samples == 0) fail(ErrorCode::InvalidArgument, "n_samples must be at least 1");
  std::vector<WeightedNetwork> out(n_samples);
  const auto ns = static_cast<std::int64_t>(n_samples);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < ns; ++k) {
    out[static_cast<std::size_t>(k)] = sample_network(r, seed, static_cast<std::size_t>(k));
  }
  return out;
}

}  // namespace firmrecon
