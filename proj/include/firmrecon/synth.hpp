#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "firmrecon/network.hpp"

namespace firmrecon {

inline constexpr std::int32_t kNoSector = -1;

struct SectorRow {
  double q = 0.0;  // gross output
  double x = 0.0;  // intermediate expenditure
  double d = 0.0;  // intermediate sales
  double y = 0.0;  // value added
  double f = 0.0;  // final demand
};

struct SectorTable {
  std::vector<std::string> names;
  std::vector<SectorRow> rows;

  std::size_t size() const noexcept { return rows.size(); }
  // Index of a sector name, or -1.
  std::int32_t find(std::string_view name) const;
};

struct SynthConfig {
  std::size_t n_firms = 1000;
  std::size_t n_sectors = 10;
  double target_mean_degree = 10.0;
  // Tail indices of the CCDFs, P(X >= x) ~ x^-a.
  double weight_tail_exponent = 1.2;
  double degree_tail_exponent = 1.5;
  // Tail index of intended firm size. Strength targets follow size, so
  // values near 1 concentrate flows in the largest firms.
  double size_tail_exponent = 1.5;
  // Value added as a share of total cost, drawn per sector.
  std::pair<double, double> value_added_ratio_range{0.2, 0.6};
  // Final demand as a share of total sales, drawn per sector.
  std::pair<double, double> final_demand_ratio_range{0.1, 0.5};
  double min_weight = 1e3;
  // Log-sd of the idiosyncratic fitness factor.
  double fitness_noise = 0.5;
  std::uint64_t seed = 0;
};

void validate(const SynthConfig& cfg);

struct Economy {
  WeightedNetwork network;
  NodeAccounts accounts;
  std::vector<std::int32_t> sector;
  std::vector<std::string> sector_names;
};

Economy generate_ground_truth(const SynthConfig& cfg);

// Sector sums of member accounts. Proxy nodes may carry kNoSector.
SectorTable derive_sector_table(const WeightedNetwork& net, const NodeAccounts& acc,
                                std::span<const std::int32_t> labels,
                                std::vector<std::string> names);

}  // namespace firmrecon
