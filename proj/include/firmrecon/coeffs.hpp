#pragma once

#include <span>
#include <vector>

#include "firmrecon/network.hpp"

namespace firmrecon {

enum class CoefficientKind { Technical, Allocation, InputShare };

struct CoefficientMatrix {
  Topology topology;
  std::vector<double> values;  // row-major, aligned with topology
  CoefficientKind kind = CoefficientKind::Technical;
};

// T_ij = W_ij / (sum_i W_ij + y_j).
CoefficientMatrix technical_coefficients(const WeightedNetwork& net, const NodeAccounts& acc);
// B_ij = W_ij / (sum_j W_ij + f_i).
CoefficientMatrix allocation_coefficients(const WeightedNetwork& net, const NodeAccounts& acc);
// Omega_ij = W_ij / s_in_j, from the network's own column sums.
CoefficientMatrix input_shares(const WeightedNetwork& net);
// Omega_ij = 1 / k_in_j.
CoefficientMatrix uniform_input_shares(const Topology& t);

// Removes one node's row and column, keeping the remaining entries as they
// are (denominators are not recomputed). Nodes above it shift down by one.
CoefficientMatrix drop_node(const CoefficientMatrix& c, NodeId node);

struct SolveOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  // Iterations without a new best residual before declaring divergence.
  std::size_t stall_window = 1000;
};

// Solves (I - T^T) O = 1 by Jacobi sweeps over columns.
std::vector<double> output_multipliers(const CoefficientMatrix& t, const SolveOptions& opt = {});
std::vector<double> output_multipliers_serial(const CoefficientMatrix& t,
                                              const SolveOptions& opt = {});

// v = (alpha/N) [I - (1 - alpha) Omega]^-1 1 by fixed-point sweeps over rows;
// residual is the L1 change per sweep.
std::vector<double> influence_from_shares(const CoefficientMatrix& omega, double alpha,
                                          const SolveOptions& opt = {1e-12, 100000, 1000});
std::vector<double> influence_from_shares_serial(const CoefficientMatrix& omega, double alpha,
                                                 const SolveOptions& opt = {1e-12, 100000, 1000});

std::vector<double> influence_vector(const WeightedNetwork& net, double alpha);
// Checks acc.s_in against the network's column sums first.
std::vector<double> influence_vector(const WeightedNetwork& net, const NodeAccounts& acc,
                                     double alpha);
std::vector<double> uniform_influence(const Topology& t, double alpha);

}  // namespace firmrecon
