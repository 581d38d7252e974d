#include "firmrecon/harmonize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>

#include "firmrecon/csv.hpp"
#include "firmrecon/error.hpp"
#include "firmrecon/rng.hpp"

namespace firmrecon {

double cogs_labour_share(double w, double g) {
  if (!(w + g > 0.0)) fail(ErrorCode::ZeroDenominator, "labour plus COGS must be positive");
  return w / (g + w);
}

std::string_view to_string(LabourMethod m) noexcept {
  switch (m) {
    case LabourMethod::M1: return "1";
    case LabourMethod::M2a: return "2a";
    case LabourMethod::M2b: return "2b";
    case LabourMethod::M3: return "3";
  }
  return "?";
}

LabourMethod parse_labour_method(std::string_view s) {
  for (LabourMethod m : kAllLabourMethods) {
    if (s == to_string(m)) return m;
  }
  fail(ErrorCode::InvalidArgument, "unknown labour-share method '" + std::string(s) + "'");
}

double LabourShareModel::share_for(const std::string& sector, int year) const {
  const auto it = shares.find(sector);
  if (it == shares.end() || it->second.empty()) {
    fail(ErrorCode::UncoveredSectorYear,
         "no labour share for sector " + sector + " in " + std::to_string(year));
  }
  const std::map<int, double>& by_year = it->second;
  const auto hit = by_year.find(year);
  if (hit != by_year.end()) return hit->second;
  if (year > by_year.rbegin()->first) return by_year.rbegin()->second;
  if (year < by_year.begin()->first) return by_year.begin()->second;
  const auto hi = by_year.upper_bound(year);
  const auto lo = std::prev(hi);
  const double t = static_cast<double>(year - lo->first) / static_cast<double>(hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

namespace {

struct Disclosure {
  double alpha;
  double w;
  double g;
};

double mean(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

}  // namespace

LabourShareModel fit_labour_share(LabourMethod method, const FinancialsPanel& panel) {
  if (panel.empty()) fail(ErrorCode::EmptyInput, "empty financials panel");
  int first = std::numeric_limits<int>::max(), last = std::numeric_limits<int>::min();
  // sector -> year -> firm -> disclosure
  std::map<std::string, std::map<int, std::map<std::string, Disclosure>>> data;
  std::set<std::string> sectors;
  for (const FirmYear& r : panel) {
    first = std::min(first, r.year);
    last = std::max(last, r.year);
    sectors.insert(r.sector);
    if (!r.labour || !(*r.labour + r.cogs > 0.0)) continue;
    data[r.sector][r.year][r.firm] = {cogs_labour_share(*r.labour, r.cogs), *r.labour, r.cogs};
  }

  LabourShareModel model;
  model.method = method;
  for (const std::string& sector : sectors) {
    const auto& years = data[sector];
    std::map<int, double>& out = model.shares[sector];
    for (int t = first + LabourShareModel::kWindow - 1; t <= last; ++t) {
      std::vector<double> yearly_mean, yearly_ratio, yearly_pool;
      std::map<std::string, std::vector<double>> firm_alphas;
      for (int tau = t - LabourShareModel::kWindow + 1; tau <= t; ++tau) {
        const auto y = years.find(tau);
        if (y == years.end() || y->second.empty()) continue;
        std::vector<double> alphas;
        double sw = 0.0, sg = 0.0;
        for (const auto& [firm, d] : y->second) {
          alphas.push_back(d.alpha);
          firm_alphas[firm].push_back(d.alpha);
          sw += d.w;
          sg += d.g;
        }
        yearly_mean.push_back(mean(alphas));
        yearly_ratio.push_back(sw / (sw + sg));
        yearly_pool.push_back(sw + sg);
      }
      if (yearly_mean.empty()) continue;
      double share = 0.0;
      switch (method) {
        case LabourMethod::M1: {
          std::vector<double> firm_means;
          for (const auto& [firm, a] : firm_alphas) firm_means.push_back(mean(a));
          share = mean(firm_means);
          break;
        }
        case LabourMethod::M2a: share = mean(yearly_mean); break;
        case LabourMethod::M2b: share = mean(yearly_ratio); break;
        case LabourMethod::M3: {
          const double pool = std::accumulate(yearly_pool.begin(), yearly_pool.end(), 0.0);
          for (std::size_t k = 0; k < yearly_mean.size(); ++k) {
            share += yearly_pool[k] / pool * yearly_mean[k];
          }
          break;
        }
      }
      out[t] = share;
    }
    if (out.empty()) {
      fail(ErrorCode::EmptySectorWindow, "sector " + sector + " has no disclosing firm in any window");
    }
  }
  return model;
}

CostSplit split_cogs(double cogs, double share) {
  if (!(share >= 0.0 && share <= 1.0)) fail(ErrorCode::RatioOutOfRange, "labour share outside [0, 1]");
  // The larger part is rounded once and the smaller is the exact remainder,
  // so the two parts always add back to cogs.
  if (share >= 0.5) {
    const double w = share * cogs;
    return {w, cogs - w};
  }
  const double x = (1.0 - share) * cogs;
  return {cogs - x, x};
}

std::vector<SplitRecord> split_cogs(const FinancialsPanel& panel, const LabourShareModel& model) {
  std::vector<SplitRecord> out(panel.size());
  for (std::size_t k = 0; k < panel.size(); ++k) {
    const FirmYear& r = panel[k];
    if (r.labour) {
      out[k] = {*r.labour, r.cogs, false};
    } else {
      const CostSplit s = split_cogs(r.cogs, model.share_for(r.sector, r.year));
      out[k] = {s.labour, s.intermediate, true};
    }
  }
  return out;
}

double firm_value_added(double w, double ebit, double depamort) { return w + ebit + depamort; }

DemandSplit impute_demand_and_gfcf(double q, double fd_ratio, double gfcf_ratio) {
  if (!(q >= 0.0)) fail(ErrorCode::InvalidArgument, "sales must be non-negative");
  DemandSplit out{};
  if (gfcf_ratio < 0.0) {
    gfcf_ratio = 0.0;
    out.gfcf_clamped = true;
  }
  if (!(fd_ratio >= 0.0 && fd_ratio <= 1.0) || !(gfcf_ratio <= 1.0) ||
      !(fd_ratio + gfcf_ratio <= 1.0)) {
    fail(ErrorCode::RatioOutOfRange, "final demand and GFCF ratios must lie in [0, 1] and sum to at most 1");
  }
  out.final_demand = q * fd_ratio;
  out.gfcf = q * gfcf_ratio;
  out.intermediate_sales = std::max(0.0, q - out.final_demand - out.gfcf);
  return out;
}

std::string_view to_string(RecordFlag f) noexcept {
  switch (f) {
    case RecordFlag::Ok: return "ok";
    case RecordFlag::Corrected: return "corrected";
    case RecordFlag::Dropped: return "dropped";
  }
  return "?";
}

double CleanResult::dropped_fraction() const noexcept {
  return records.empty() ? 0.0
                         : static_cast<double>(dropped.size()) / static_cast<double>(records.size());
}

CleanResult clean_accounting(std::span<const FirmYear> panel, std::span<const SplitRecord> split) {
  if (split.size() != panel.size()) fail(ErrorCode::SizeMismatch, "split does not match panel");
  CleanResult out;
  out.records.resize(panel.size());
  for (std::size_t k = 0; k < panel.size(); ++k) {
    const FirmYear& r = panel[k];
    CleanRecord& c = out.records[k];
    c.labour = split[k].labour_hat;
    c.intermediate = split[k].intermediate_hat;
    c.value_added = firm_value_added(c.labour, r.ebit, r.depamort);
    // Only disclosed labour can sit in COGS as well; imputed labour was
    // carved out of COGS already.
    if (r.revenue - c.intermediate - c.value_added < 0.0 && !split[k].imputed &&
        c.intermediate - c.labour >= 0.0) {
      c.intermediate -= c.labour;
      c.flag = RecordFlag::Corrected;
      out.corrected.push_back(k);
    }
    if (r.revenue - c.intermediate - c.value_added < 0.0 || !(c.value_added > 0.0)) {
      c.flag = RecordFlag::Dropped;
      out.dropped.push_back(k);
    }
  }
  return out;
}

SyntheticFinancials generate_financials(const FinancialsConfig& cfg) {
  if (cfg.n_firms == 0 || cfg.n_sectors == 0 || cfg.last_year < cfg.first_year) {
    fail(ErrorCode::InvalidArgument, "financials config needs firms, sectors and years");
  }
  Rng rng(derive_seed(cfg.seed, stream::kPanel));
  std::vector<double> sector_alpha(cfg.n_sectors);
  for (double& a : sector_alpha) a = 0.15 + 0.3 * rng.uniform();

  SyntheticFinancials out;
  for (std::size_t i = 0; i < cfg.n_firms; ++i) {
    const std::size_t s = i % cfg.n_sectors;
    const double z = rng.normal();
    double size = 100.0 * std::exp(1.5 * z);
    const double firm_alpha = sector_alpha[s] + cfg.size_share_slope * z + 0.03 * rng.normal();
    const bool discloses = rng.uniform() < cfg.disclosure_rate;
    const bool doubles = discloses && rng.uniform() < cfg.double_count_rate;
    const double margin = 0.08 + 0.05 * rng.normal();
    char firm[32];
    std::snprintf(firm, sizeof firm, "F%05zu", i);
    char sector[32];
    std::snprintf(sector, sizeof sector, "C%02zu", s);
    for (int year = cfg.first_year; year <= cfg.last_year; ++year) {
      size *= std::exp(0.1 * rng.normal());
      const double alpha = std::clamp(firm_alpha + 0.01 * rng.normal(), 0.02, 0.95);
      const double pool = 0.7 * size;
      const double w = alpha * pool;
      const double g = pool - w;
      const double other = 0.05 * size;
      const double da = 0.03 * size;
      const double ebit = margin * size;
      FirmYear r;
      r.firm = firm;
      r.year = year;
      r.sector = sector;
      r.revenue = pool + other + da + ebit;
      r.ebit = ebit;
      r.depamort = da;
      if (discloses) {
        r.labour = w;
        r.cogs = doubles ? pool : g;
      } else {
        r.cogs = pool;
      }
      out.panel.push_back(std::move(r));
      out.true_labour.push_back(w);
      out.double_counted.push_back(doubles ? 1 : 0);
    }
  }
  return out;
}

std::map<LabourMethod, double> holdout_labour_rmse(const FinancialsPanel& panel,
                                                   double holdout_fraction, std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    fail(ErrorCode::InvalidArgument, "holdout fraction must be in (0, 1)");
  }
  std::set<std::string> disclosing;
  for (const FirmYear& r : panel) {
    if (r.labour) disclosing.insert(r.firm);
  }
  std::vector<std::string> firms(disclosing.begin(), disclosing.end());
  Rng rng(derive_seed(seed, stream::kPanel, 1));
  for (std::size_t i = firms.size(); i > 1; --i) std::swap(firms[i - 1], firms[rng.below(i)]);
  const auto n_hold = static_cast<std::size_t>(std::llround(holdout_fraction * firms.size()));
  if (n_hold == 0) fail(ErrorCode::EmptyInput, "holdout selects no firm");
  const std::set<std::string> held(firms.begin(), firms.begin() + static_cast<std::ptrdiff_t>(n_hold));

  FinancialsPanel train = panel;
  for (FirmYear& r : train) {
    if (held.count(r.firm)) r.labour.reset();
  }
  std::map<LabourMethod, double> rmse;
  for (LabourMethod m : kAllLabourMethods) {
    const LabourShareModel model = fit_labour_share(m, train);
    double se = 0.0;
    std::size_t count = 0;
    for (const FirmYear& r : panel) {
      if (!held.count(r.firm) || !r.labour) continue;
      const double pool = r.cogs + *r.labour;
      const double w_hat = split_cogs(pool, model.share_for(r.sector, r.year)).labour;
      se += (w_hat - *r.labour) * (w_hat - *r.labour);
      ++count;
    }
    rmse[m] = std::sqrt(se / static_cast<double>(count));
  }
  return rmse;
}

FinancialsPanel read_financials_csv(const std::filesystem::path& path) {
  csv::Reader in(path, {"firm", "year", "sector", "revenue", "cogs", "labour", "ebit", "depamort"});
  FinancialsPanel panel;
  std::vector<std::string_view> f;
  while (in.next(f)) {
    FirmYear r;
    r.firm = std::string(f[0]);
    r.year = static_cast<int>(csv::parse_uint(f[1], "year"));
    r.sector = std::string(f[2]);
    r.revenue = csv::parse_double(f[3], "revenue");
    r.cogs = csv::parse_double(f[4], "cogs");
    if (!f[5].empty()) r.labour = csv::parse_double(f[5], "labour");
    r.ebit = csv::parse_double(f[6], "ebit");
    r.depamort = csv::parse_double(f[7], "depamort");
    panel.push_back(std::move(r));
  }
  return panel;
}

std::map<std::string, SectorRatios> read_sector_ratios_csv(const std::filesystem::path& path) {
  csv::Reader in(path, {"sector", "final_demand_ratio", "gfcf_ratio"});
  std::map<std::string, SectorRatios> out;
  std::vector<std::string_view> f;
  while (in.next(f)) {
    out[std::string(f[0])] = {csv::parse_double(f[1], "final_demand_ratio"),
                              csv::parse_double(f[2], "gfcf_ratio")};
  }
  return out;
}

}  // namespace firmrecon
