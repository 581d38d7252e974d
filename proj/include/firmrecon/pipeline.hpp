#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "firmrecon/config.hpp"
#include "firmrecon/network.hpp"
#include "firmrecon/recon.hpp"
#include "firmrecon/sampling.hpp"
#include "firmrecon/shocks.hpp"
#include "firmrecon/synth.hpp"

namespace firmrecon {

// Everything that does not depend on the trim: the empirical economy with
// sector-imputed accounts, the kept firms, their empirical multipliers and
// the shock panel.
struct Baseline {
  WeightedNetwork full;
  NodeAccounts empirical;
  std::vector<std::int32_t> sector;
  std::vector<std::string> sector_names;
  std::vector<NodeId> kept;
  WeightedNetwork test_network;      // induced on kept, local ids
  std::vector<double> multipliers;   // full network, kept firms
  std::vector<double> influence;     // full network, kept firms
  double empirical_volatility = 0.0; // percent, every firm
  ShockPanel shocks;                 // kept firms plus the proxy row
};

// `kept` defaults to the top firms by out-strength.
Baseline make_baseline(const RunConfig& cfg, const Economy& economy,
                       std::optional<std::vector<NodeId>> kept = std::nullopt);
Baseline make_baseline(const RunConfig& cfg);

std::uint64_t trim_seed(std::uint64_t seed, std::size_t point, std::size_t replicate) noexcept;

TrimResult trim_for(const Baseline& base, const RunConfig& cfg, const SweepPoint& point,
                    std::uint64_t seed);

// Metrics of one reconstruction against the empirical economy. kept_edges
// is the firm-firm topology that was known to the reconstruction.
nlohmann::json evaluate(const RunConfig& cfg, const Baseline& base, const Topology& kept_edges,
                        const ProxiedEconomy& proxied, const ReconstructionResult& recon);

nlohmann::json run_replicate(const RunConfig& cfg, const Baseline& base, const SweepPoint& point,
                             std::size_t point_index, std::size_t replicate);

// Missing keys, wrong types, non-finite numbers and out-of-range values.
std::vector<std::string> validate_report(const nlohmann::json& report);

// Mean and sample standard deviation of every numeric leaf.
nlohmann::json summarize(const std::vector<nlohmann::json>& reports);

// Directional claims evaluated on a sweep summary.
nlohmann::json qualitative_checks(const nlohmann::json& summary);

struct RunOutcome {
  int exit_code = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::size_t invalid = 0;
};

RunOutcome run_pipeline(const RunConfig& cfg, std::ostream& log);

// Re-reads every report under out_dir and rewrites the summaries.
RunOutcome summarize_run(const std::filesystem::path& out_dir, const RunConfig& cfg,
                         std::ostream& log);

}  // namespace firmrecon
