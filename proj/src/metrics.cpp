#include "firmrecon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "firmrecon/error.hpp"

namespace firmrecon {

namespace {

void same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    fail(ErrorCode::SizeMismatch, std::string(what) + ": lengths " + std::to_string(a) + " and " +
                                      std::to_string(b));
  }
}

}  // namespace

double l1_error(std::span<const double> s_in, std::span<const double> s_out,
                std::span<const double> s_in_target, std::span<const double> s_out_target) {
  same_length(s_in.size(), s_in_target.size(), "l1_error");
  same_length(s_out.size(), s_out_target.size(), "l1_error");
  double l1 = 0.0;
  for (std::size_t i = 0; i < s_in.size(); ++i) l1 += std::abs(s_in[i] - s_in_target[i]);
  for (std::size_t i = 0; i < s_out.size(); ++i) l1 += std::abs(s_out[i] - s_out_target[i]);
  return l1;
}

double normalization_range(std::span<const double> empirical) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : empirical) {
    if (x == 0.0) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double phi = hi - lo;
  if (!(phi > 0.0)) fail(ErrorCode::DegenerateRange, "nonzero empirical values have no spread");
  return phi;
}

double median(std::span<const double> x) {
  if (x.empty()) fail(ErrorCode::EmptyInput, "median of nothing");
  std::vector<double> v(x.begin(), x.end());
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  return 0.5 * (*std::max_element(v.begin(), mid) + *mid);
}

NormalizedErrors normalized_errors(std::span<const double> x, std::span<const double> x_star,
                                   std::optional<double> phi) {
  same_length(x.size(), x_star.size(), "normalized_errors");
  if (x.empty()) fail(ErrorCode::EmptyInput, "normalized_errors on empty vectors");
  NormalizedErrors out;
  out.phi = phi ? *phi : normalization_range(x_star);
  if (!(out.phi > 0.0)) fail(ErrorCode::DegenerateRange, "phi must be positive");
  std::vector<double> abs_err(x.size());
  double se = 0.0, ae = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - x_star[i];
    abs_err[i] = std::abs(d);
    se += d * d;
    ae += abs_err[i];
  }
  const auto n = static_cast<double>(x.size());
  out.rmse = std::sqrt(se / n) / out.phi;
  out.mae = ae / n / out.phi;
  out.medae = median(abs_err) / out.phi;
  return out;
}

double cosine_similarity(std::span<const double> x, std::span<const double> x_star) {
  same_length(x.size(), x_star.size(), "cosine_similarity");
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * x_star[i];
    nx += x[i] * x[i];
    ny += x_star[i] * x_star[i];
  }
  if (!(nx > 0.0) || !(ny > 0.0)) fail(ErrorCode::ZeroVector, "cosine of a zero vector");
  return dot / (std::sqrt(nx) * std::sqrt(ny));
}

double ci_coverage(std::span<const double> empirical, std::span<const double> low,
                   std::span<const double> high) {
  if (empirical.size() != low.size() || empirical.size() != high.size()) {
    fail(ErrorCode::EdgeSetMismatch, "weights and bounds are not aligned");
  }
  if (empirical.empty()) fail(ErrorCode::EmptyInput, "ci_coverage on no edges");
  std::size_t inside = 0;
  for (std::size_t e = 0; e < empirical.size(); ++e) {
    if (empirical[e] >= low[e] && empirical[e] <= high[e]) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(empirical.size());
}

std::vector<CcdfPoint> ccdf(std::span<const double> samples) {
  if (samples.empty()) fail(ErrorCode::EmptyInput, "ccdf of no samples");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const auto n = static_cast<double>(s.size());
  std::vector<CcdfPoint> out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0 && s[k] == s[k - 1]) continue;
    out.push_back({s[k], static_cast<double>(s.size() - k) / n});
  }
  return out;
}

namespace {

struct Candidate {
  double gamma = 0.0;
  double ks = std::numeric_limits<double>::infinity();
};

// Ratios to xmin are formed before taking logs so that scaling all samples
// by a power of two leaves every quantity bit-identical.
Candidate evaluate(std::span<const double> sorted, std::size_t first, std::vector<double>& buf) {
  const double xmin = sorted[first];
  const std::size_t nt = sorted.size() - first;
  buf.resize(nt);
  double sum_log = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    buf[k] = std::log(sorted[first + k] / xmin);
    sum_log += buf[k];
  }
  Candidate c;
  if (!(sum_log > 0.0)) return c;
  c.gamma = 1.0 + static_cast<double>(nt) / sum_log;
  const double slope = 1.0 - c.gamma;
  const auto n = static_cast<double>(nt);
  double d = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const double model = 1.0 - std::exp(slope * buf[k]);
    d = std::max({d, std::abs(static_cast<double>(k + 1) / n - model),
                  std::abs(static_cast<double>(k) / n - model)});
  }
  c.ks = d;
  return c;
}

template <bool Parallel>
PowerLawFit fit_impl(std::span<const double> samples, const PowerLawOptions& opt) {
  std::vector<double> s;
  s.reserve(samples.size());
  for (double x : samples) {
    if (x > 0.0 && std::isfinite(x)) s.push_back(x);
  }
  std::sort(s.begin(), s.end());
  const std::size_t min_tail = std::max<std::size_t>(opt.min_tail, 1);

  std::vector<std::size_t> starts;
  if (opt.xmin) {
    if (!(*opt.xmin > 0.0)) fail(ErrorCode::InvalidArgument, "xmin must be positive");
    const auto it = std::lower_bound(s.begin(), s.end(), *opt.xmin);
    const auto first = static_cast<std::size_t>(it - s.begin());
    if (s.size() - first < min_tail) {
      fail(ErrorCode::InsufficientTail, std::to_string(s.size() - first) + " samples above xmin");
    }
    // A supplied xmin need not be a sample value.
    double sum_log = 0.0;
    for (std::size_t k = first; k < s.size(); ++k) sum_log += std::log(s[k] / *opt.xmin);
    if (!(sum_log > 0.0)) fail(ErrorCode::InsufficientTail, "tail has no spread above xmin");
    PowerLawFit fit;
    fit.xmin = *opt.xmin;
    fit.n_tail = s.size() - first;
    fit.gamma = 1.0 + static_cast<double>(fit.n_tail) / sum_log;
    const double slope = 1.0 - fit.gamma;
    const auto n = static_cast<double>(fit.n_tail);
    for (std::size_t k = 0; k < fit.n_tail; ++k) {
      const double model = 1.0 - std::pow(s[first + k] / *opt.xmin, slope);
      fit.ks_distance = std::max({fit.ks_distance, std::abs(static_cast<double>(k + 1) / n - model),
                                  std::abs(static_cast<double>(k) / n - model)});
    }
    return fit;
  }

  if (s.size() < min_tail) {
    fail(ErrorCode::InsufficientTail, "only " + std::to_string(s.size()) + " positive samples");
  }
  const auto q_idx = static_cast<std::size_t>(
      std::floor(std::clamp(opt.max_quantile, 0.0, 1.0) * static_cast<double>(s.size() - 1)));
  for (std::size_t k = 0; k <= q_idx; ++k) {
    if (s.size() - k < min_tail) break;
    if (k == 0 || s[k] != s[k - 1]) starts.push_back(k);
  }
  if (starts.size() > opt.max_candidates && opt.max_candidates > 0) {
    std::vector<std::size_t> thinned(opt.max_candidates);
    const std::size_t last = starts.size() - 1;
    for (std::size_t c = 0; c < opt.max_candidates; ++c) {
      const std::size_t pos = opt.max_candidates == 1 ? 0 : c * last / (opt.max_candidates - 1);
      thinned[c] = starts[pos];
    }
    starts.swap(thinned);
  }
  if (starts.empty()) fail(ErrorCode::InsufficientTail, "no candidate xmin leaves enough tail");

  std::vector<Candidate> results(starts.size());
  const auto nc = static_cast<std::int64_t>(starts.size());
#pragma omp parallel if (Parallel)
  {
    std::vector<double> buf;
#pragma omp for schedule(dynamic)
    for (std::int64_t c = 0; c < nc; ++c) {
      results[static_cast<std::size_t>(c)] = evaluate(s, starts[static_cast<std::size_t>(c)], buf);
    }
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < results.size(); ++c) {
    if (results[c].ks < results[best].ks) best = c;
  }
  if (!std::isfinite(results[best].ks)) {
    fail(ErrorCode::InsufficientTail, "every candidate tail is degenerate");
  }
  PowerLawFit fit;
  fit.xmin = s[starts[best]];
  fit.n_tail = s.size() - starts[best];
  fit.gamma = results[best].gamma;
  fit.ks_distance = results[best].ks;
  return fit;
}

}  // namespace

PowerLawFit powerlaw_fit(std::span<const double> samples, const PowerLawOptions& opt) {
  return fit_impl<true>(samples, opt);
}

PowerLawFit powerlaw_fit_serial(std::span<const double> samples, const PowerLawOptions& opt) {
  return fit_impl<false>(samples, opt);
}

}  // namespace firmrecon
