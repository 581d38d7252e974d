#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "firmrecon/metrics.hpp"
#include "firmrecon/recon.hpp"
#include "firmrecon/shocks.hpp"
#include "firmrecon/synth.hpp"

namespace firmrecon {

struct SweepPoint {
  std::string label;              // "f0.30" or "match"
  std::optional<double> fraction; // share of test-network links deleted
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t replicates = 50;
  std::size_t jobs = 0;  // 0: OpenMP default
  std::filesystem::path out = "out";

  SynthConfig economy{};
  std::size_t n_keep = 250;
  double match_degree = 2.9;
  std::vector<double> fractions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  bool include_match = true;

  CremOptions crem{};
  double alpha = 0.333;

  double sigma = 6.0;
  std::size_t periods = 10;
  ProxyShockRule proxy_rule = ProxyShockRule::MedianFirm;

  PowerLawOptions powerlaw{};
};

// Keys mirror the struct in nested sections; see README. Unknown keys,
// wrong types and out-of-range values throw.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);

// Ascending fractions, then the matched-degree point.
std::vector<SweepPoint> sweep_points(const RunConfig& cfg);

std::string_view to_string(ProxyShockRule r) noexcept;
std::string_view to_string(CiRate r) noexcept;

}  // namespace firmrecon
