#pragma once

#include <optional>
#include <span>
#include <vector>

namespace firmrecon {

// sum |s_in - s_in*| + sum |s_out - s_out*|.
double l1_error(std::span<const double> s_in, std::span<const double> s_out,
                std::span<const double> s_in_target, std::span<const double> s_out_target);

// max - min over the nonzero entries of the empirical vector.
double normalization_range(std::span<const double> empirical);

struct NormalizedErrors {
  double rmse = 0.0;
  double mae = 0.0;
  double medae = 0.0;
  double phi = 0.0;
};

// Raw RMSE, MAE and median absolute error, each divided by phi.
NormalizedErrors normalized_errors(std::span<const double> x, std::span<const double> x_star,
                                   std::optional<double> phi = std::nullopt);

double cosine_similarity(std::span<const double> x, std::span<const double> x_star);

// Fraction of empirical values inside [low, high].
double ci_coverage(std::span<const double> empirical, std::span<const double> low,
                   std::span<const double> high);

struct CcdfPoint {
  double x;
  double ccdf;  // fraction of samples >= x
};

// One point per distinct value, ascending in x.
std::vector<CcdfPoint> ccdf(std::span<const double> samples);

double median(std::span<const double> x);

struct PowerLawOptions {
  std::optional<double> xmin;
  std::size_t min_tail = 50;
  // Candidate xmin values are distinct samples up to this quantile,
  // thinned to at most max_candidates evenly spaced ones.
  double max_quantile = 0.95;
  std::size_t max_candidates = 200;
};

struct PowerLawFit {
  double gamma = 0.0;  // density exponent
  double xmin = 0.0;
  std::size_t n_tail = 0;
  double ks_distance = 0.0;
  double tail_index() const noexcept { return gamma - 1.0; }
};

// Continuous MLE gamma = 1 + n / sum ln(x/xmin); xmin minimises the KS
// distance when not given. Non-positive samples are ignored.
PowerLawFit powerlaw_fit(std::span<const double> samples, const PowerLawOptions& opt = {});
PowerLawFit powerlaw_fit_serial(std::span<const double> samples, const PowerLawOptions& opt = {});

}  // namespace firmrecon
