#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "firmrecon/network.hpp"

namespace firmrecon {

// Gravity weights s_out_i s_in_j / W_tot, evaluated on demand.
class MaxEntPrescription {
 public:
  MaxEntPrescription(std::span<const double> s_out, std::span<const double> s_in);

  double operator()(NodeId i, NodeId j) const { return s_out_[i] * s_in_[j] / total_; }
  double total() const noexcept { return total_; }
  // Values on the edges of t, in row-major order.
  std::vector<double> on(const Topology& t) const;

 private:
  std::vector<double> s_out_;
  std::vector<double> s_in_;
  double total_;
};

inline MaxEntPrescription maxent_prescription(std::span<const double> s_out,
                                              std::span<const double> s_in) {
  return MaxEntPrescription(s_out, s_in);
}

struct IpfOptions {
  double tol = 1e-8;  // relative L1
  std::size_t max_iter = 10000;
};

struct IpfResult {
  std::vector<double> weights;
  double l1 = 0.0;
  double relative_l1 = 0.0;
  std::size_t iterations = 0;  // full row+column sweeps
  bool converged = false;
};

// Alternating row then column scaling on the support of t. Edges touching a
// zero marginal are set to zero. Throws InfeasibleSupport when a positive
// marginal has no usable edge. Non-convergence is reported, not thrown.
IpfResult ipf_balance(const Topology& t, std::span<const double> s_out, std::span<const double> s_in,
                      std::span<const double> init, const IpfOptions& opt = {});
// Same arithmetic, single thread; reference for the parallel kernel.
IpfResult ipf_balance_serial(const Topology& t, std::span<const double> s_out,
                             std::span<const double> s_in, std::span<const double> init,
                             const IpfOptions& opt = {});

struct ConfidenceInterval {
  double low;
  double high;
};

// Bounds -ln(e^-1 + q_lower)/rate and -ln(e^-1 - q_upper)/rate.
ConfidenceInterval weight_confidence_interval(double rate, double q_lower = 0.25,
                                              double q_upper = 0.25);

enum class CiRate { PostIpf, MaxEnt };

struct CremOptions {
  IpfOptions ipf;
  double q_lower = 0.25;
  double q_upper = 0.25;
  CiRate ci_rate = CiRate::PostIpf;
  bool parallel = true;
};

struct ReconstructionResult {
  Topology topology;             // edges with positive expected weight
  std::vector<double> expected;  // <W_ij>
  std::vector<double> rate;      // lambda_ij = 1 / <W_ij>
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  double l1 = 0.0;
  double relative_l1 = 0.0;
  std::size_t iterations = 0;
  bool converged = false;

  WeightedNetwork expected_network() const;
};

ReconstructionResult fit_crem(const Topology& t, std::span<const double> s_out,
                              std::span<const double> s_in, const CremOptions& opt = {});

// Independent Exponential(lambda_ij) draws per edge; sample k uses its own
// derived stream.
std::vector<WeightedNetwork> sample_ensemble(const ReconstructionResult& r, std::size_t n_samples,
                                             std::uint64_t seed);
WeightedNetwork sample_network(const ReconstructionResult& r, std::uint64_t seed,
                               std::size_t sample_index);

}  // namespace firmrecon
