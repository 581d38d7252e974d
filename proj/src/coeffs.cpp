#include "firmrecon/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "firmrecon/error.hpp"

namespace firmrecon {

namespace {

void check_sizes(const WeightedNetwork& net, const NodeAccounts& acc) {
  const std::size_t n = net.n_nodes();
  if (acc.s_in.size() != n || acc.s_out.size() != n || acc.value_added.size() != n ||
      acc.final_demand.size() != n) {
    fail(ErrorCode::SizeMismatch, "accounts do not match network size");
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::InvalidArgument, "alpha must be in (0, 1]");
}

}  // namespace

CoefficientMatrix technical_coefficients(const WeightedNetwork& net, const NodeAccounts& acc) {
  check_sizes(net, acc);
  const Strengths s = strengths(net);
  CoefficientMatrix c{net.topology(), std::vector<double>(net.n_edges()), CoefficientKind::Technical};
  for (EdgeIndex e = 0; e < net.n_edges(); ++e) {
    const NodeId j = net.topology().dst(e);
    const double cost = s.s_in[j] + acc.value_added[j];
    if (!(cost > 0.0)) {
      fail(ErrorCode::ZeroTotalCost, "node " + std::to_string(j) + " has non-positive total cost");
    }
    c.values[e] = net.weight(e) / cost;
  }
  return c;
}

CoefficientMatrix allocation_coefficients(const WeightedNetwork& net, const NodeAccounts& acc) {
  check_sizes(net, acc);
  const Strengths s = strengths(net);
  CoefficientMatrix c{net.topology(), std::vector<double>(net.n_edges()),
                      CoefficientKind::Allocation};
  for (EdgeIndex e = 0; e < net.n_edges(); ++e) {
    const NodeId i = net.topology().src(e);
    const double sales = s.s_out[i] + acc.final_demand[i];
    if (!(sales > 0.0)) {
      fail(ErrorCode::ZeroTotalSales, "node " + std::to_string(i) + " has non-positive total sales");
    }
    c.values[e] = net.weight(e) / sales;
  }
  return c;
}

CoefficientMatrix input_shares(const WeightedNetwork& net) {
  const Strengths s = strengths(net);
  CoefficientMatrix c{net.topology(), std::vector<double>(net.n_edges()),
                      CoefficientKind::InputShare};
  for (EdgeIndex e = 0; e < net.n_edges(); ++e) {
    c.values[e] = net.weight(e) / s.s_in[net.topology().dst(e)];
  }
  return c;
}

CoefficientMatrix uniform_input_shares(const Topology& t) {
  const Degrees d = degrees(t);
  CoefficientMatrix c{t, std::vector<double>(t.n_edges()), CoefficientKind::InputShare};
  for (EdgeIndex e = 0; e < t.n_edges(); ++e) {
    c.values[e] = 1.0 / static_cast<double>(d.k_in[t.dst(e)]);
  }
  return c;
}

CoefficientMatrix drop_node(const CoefficientMatrix& c, NodeId node) {
  const Topology& t = c.topology;
  if (node >= t.n_nodes()) fail(ErrorCode::IndexOutOfRange, "node to drop is out of range");
  const auto shift = [node](NodeId x) { return x > node ? x - 1 : x; };
  std::vector<Arc> arcs;
  std::vector<double> values;
  for (EdgeIndex e = 0; e < t.n_edges(); ++e) {
    if (t.src(e) == node || t.dst(e) == node) continue;
    arcs.push_back({shift(t.src(e)), shift(t.dst(e))});
    values.push_back(c.values[e]);
  }
  std::optional<NodeId> proxy;
  if (t.proxy() && *t.proxy() != node) proxy = shift(*t.proxy());
  return CoefficientMatrix{Topology::build(t.n_nodes() - 1, arcs, proxy, t.self_loops()),
                           std::move(values), c.kind};
}

namespace {

struct Progress {
  double best = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  // True when the residual has met the tolerance; throws on divergence.
  bool update(double residual, std::size_t iter, const SolveOptions& opt, const char* what) {
    if (!std::isfinite(residual)) {
      fail(ErrorCode::DivergentSeries, std::string(what) + ": residual is not finite");
    }
    if (residual <= opt.tol) return true;
    if (residual < best) {
      best = residual;
      since_best = 0;
    } else if (++since_best >= opt.stall_window) {
      fail(ErrorCode::DivergentSeries, std::string(what) + ": residual stopped decreasing at " +
                                           std::to_string(best));
    }
    if (iter + 1 >= opt.max_iter) {
      fail(ErrorCode::DivergentSeries, std::string(what) + ": no convergence in " +
                                           std::to_string(opt.max_iter) + " iterations");
    }
    return false;
  }
};

template <bool Parallel>
std::vector<double> output_impl(const CoefficientMatrix& c, const SolveOptions& opt) {
  const Topology& t = c.topology;
  const std::size_t n = t.n_nodes();
  const auto ni = static_cast<std::int64_t>(n);
  std::vector<double> cur(n, 1.0), next(n), delta(n);
  Progress progress;
  for (std::size_t iter = 0;; ++iter) {
#pragma omp parallel for schedule(static) if (Parallel)
    for (std::int64_t jj = 0; jj < ni; ++jj) {
      const auto j = static_cast<NodeId>(jj);
      double acc = 1.0;
      for (std::size_t k = t.col_begin(j); k < t.col_end(j); ++k) {
        const EdgeIndex e = t.col_edge(k);
        acc += c.values[e] * cur[t.src(e)];
      }
      next[j] = acc;
      delta[j] = std::abs(acc - cur[j]);
    }
    cur.swap(next);
    double residual = 0.0;
    for (double d : delta) residual = std::max(residual, d);
    if (std::any_of(delta.begin(), delta.end(), [](double d) { return std::isnan(d); })) {
      residual = std::numeric_limits<double>::quiet_NaN();
    }
    if (progress.update(residual, iter, opt, "output multipliers")) break;
  }
  return cur;
}

template <bool Parallel>
std::vector<double> influence_impl(const CoefficientMatrix& c, double alpha,
                                   const SolveOptions& opt) {
  check_alpha(alpha);
  const Topology& t = c.topology;
  const std::size_t n = t.n_nodes();
  if (n == 0) return {};
  const auto ni = static_cast<std::int64_t>(n);
  const double base = alpha / static_cast<double>(n);
  const double damp = 1.0 - alpha;
  std::vector<double> cur(n, 1.0 / static_cast<double>(n)), next(n), delta(n);
  Progress progress;
  for (std::size_t iter = 0;; ++iter) {
#pragma omp parallel for schedule(static) if (Parallel)
    for (std::int64_t ii = 0; ii < ni; ++ii) {
      const auto i = static_cast<NodeId>(ii);
      double acc = 0.0;
      for (EdgeIndex e = t.row_begin(i); e < t.row_end(i); ++e) acc += c.values[e] * cur[t.dst(e)];
      next[i] = base + damp * acc;
      delta[i] = std::abs(next[i] - cur[i]);
    }
    cur.swap(next);
    double residual = 0.0;
    for (double d : delta) residual += d;
    if (progress.update(residual, iter, opt, "influence vector")) break;
  }
  return cur;
}

}  // namespace

std::vector<double> output_multipliers(const CoefficientMatrix& t, const SolveOptions& opt) {
  return output_impl<true>(t, opt);
}

std::vector<double> output_multipliers_serial(const CoefficientMatrix& t, const SolveOptions& opt) {
  return output_impl<false>(t, opt);
}

std::vector<double> influence_from_shares(const CoefficientMatrix& omega, double alpha,
                                          const SolveOptions& opt) {
  return influence_impl<true>(omega, alpha, opt);
}

std::vector<double> influence_from_shares_serial(const CoefficientMatrix& omega, double alpha,
                                                 const SolveOptions& opt) {
  return influence_impl<false>(omega, alpha, opt);
}

std::vector<double> influence_vector(const WeightedNetwork& net, double alpha) {
  check_alpha(alpha);
  return influence_from_shares(input_shares(net), alpha);
}

std::vector<double> influence_vector(const WeightedNetwork& net, const NodeAccounts& acc,
                                     double alpha) {
  if (acc.s_in.size() != net.n_nodes()) fail(ErrorCode::SizeMismatch, "accounts size mismatch");
  const Strengths s = strengths(net);
  for (NodeId j = 0; j < net.n_nodes(); ++j) {
    if (std::abs(acc.s_in[j] - s.s_in[j]) > 1e-6 * std::max(acc.s_in[j], s.s_in[j])) {
      fail(ErrorCode::NonStochasticColumns,
           "in-strength of node " + std::to_string(j) + " disagrees with its incoming weights");
    }
  }
  return influence_vector(net, alpha);
}

std::vector<double> uniform_influence(const Topology& t, double alpha) {
  check_alpha(alpha);
  return influence_from_shares(uniform_input_shares(t), alpha);
}

}  // namespace firmrecon
