#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace firmrecon {

struct FirmYear {
  std::string firm;
  int year = 0;
  std::string sector;
  double revenue = 0.0;
  double cogs = 0.0;  // excluding depreciation and amortisation
  std::optional<double> labour;
  double ebit = 0.0;
  double depamort = 0.0;
};

using FinancialsPanel = std::vector<FirmYear>;

// alpha = w / (g + w).
double cogs_labour_share(double w, double g);

enum class LabourMethod { M1, M2a, M2b, M3 };

std::string_view to_string(LabourMethod m) noexcept;
LabourMethod parse_labour_method(std::string_view s);
inline constexpr LabourMethod kAllLabourMethods[] = {LabourMethod::M1, LabourMethod::M2a,
                                                     LabourMethod::M2b, LabourMethod::M3};

class LabourShareModel {
 public:
  static constexpr int kWindow = 3;

  LabourMethod method = LabourMethod::M2b;
  // Estimated shares per sector and window end-year.
  std::map<std::string, std::map<int, double>> shares;

  // Exact estimate, else forward-fill after the last estimate, back-fill
  // before the first, linear interpolation inside gaps.
  double share_for(const std::string& sector, int year) const;
};

// Shares for every end-year t with t-2 >= first panel year, over the window
// {t-2, t-1, t}, from firm-years that disclose labour.
LabourShareModel fit_labour_share(LabourMethod method, const FinancialsPanel& panel);

struct CostSplit {
  double labour;
  double intermediate;
};

CostSplit split_cogs(double cogs, double share);

struct SplitRecord {
  double labour_hat = 0.0;
  double intermediate_hat = 0.0;
  bool imputed = false;
};

// Disclosing firms keep their labour and COGS; the rest split COGS with the
// model share for their sector-year.
std::vector<SplitRecord> split_cogs(const FinancialsPanel& panel, const LabourShareModel& model);

// y = w + EBIT + da.
double firm_value_added(double w, double ebit, double depamort);

struct DemandSplit {
  double final_demand;
  double gfcf;
  double intermediate_sales;
  bool gfcf_clamped = false;
};

// f = q f_s/q_s, k = q k_s/q_s, d = q - f - k. A negative GFCF ratio is
// clamped to zero and reported.
DemandSplit impute_demand_and_gfcf(double q, double fd_ratio, double gfcf_ratio);

enum class RecordFlag { Ok, Corrected, Dropped };
std::string_view to_string(RecordFlag f) noexcept;

struct CleanRecord {
  double intermediate = 0.0;
  double labour = 0.0;
  double value_added = 0.0;
  RecordFlag flag = RecordFlag::Ok;
};

struct CleanResult {
  // One per input record, dropped ones flagged.
  std::vector<CleanRecord> records;
  std::vector<std::size_t> dropped;
  std::vector<std::size_t> corrected;
  double dropped_fraction() const noexcept;
};

// Checks q - x - y >= 0 with y = w + EBIT + da. Violators have labour
// removed from intermediate costs once; any still violating, or with
// y <= 0, are dropped.
CleanResult clean_accounting(std::span<const FirmYear> panel, std::span<const SplitRecord> split);

// Synthetic panel with labour shares that rise with firm size, a fraction
// of non-disclosing firms and a fraction of firms whose COGS includes
// labour.
struct FinancialsConfig {
  std::size_t n_firms = 600;
  std::size_t n_sectors = 6;
  int first_year = 2009;
  int last_year = 2014;
  double disclosure_rate = 0.6;
  double double_count_rate = 0.05;
  double size_share_slope = 0.08;
  std::uint64_t seed = 0;
};

struct SyntheticFinancials {
  FinancialsPanel panel;                // labour hidden for non-disclosers
  std::vector<double> true_labour;      // aligned with panel
  std::vector<char> double_counted;     // COGS includes labour
};

SyntheticFinancials generate_financials(const FinancialsConfig& cfg);

// Hides labour for a random fraction of disclosing firms, fits each method
// on the rest and returns the labour-cost RMSE on the hidden firm-years.
std::map<LabourMethod, double> holdout_labour_rmse(const FinancialsPanel& panel,
                                                   double holdout_fraction, std::uint64_t seed);

FinancialsPanel read_financials_csv(const std::filesystem::path& path);

struct SectorRatios {
  double final_demand = 0.0;  // f_s / q_s
  double gfcf = 0.0;          // k_s / q_s
};

// Header `sector,final_demand_ratio,gfcf_ratio`.
std::map<std::string, SectorRatios> read_sector_ratios_csv(const std::filesystem::path& path);

}  // namespace firmrecon
