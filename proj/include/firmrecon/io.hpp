#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "firmrecon/network.hpp"
#include "firmrecon/recon.hpp"
#include "firmrecon/sampling.hpp"
#include "firmrecon/synth.hpp"

namespace firmrecon::io {

namespace fs = std::filesystem;

// edges.csv `src,dst,weight`, nodes.csv `id,sector,value_added,final_demand,is_proxy`.
void write_economy(const fs::path& dir, const Economy& economy);
// Zero-weight rows are dropped. Sector names are numbered in sorted order;
// a proxy row may leave its sector empty.
Economy read_economy(const fs::path& edges, const fs::path& nodes);

void write_edges(const fs::path& path, const WeightedNetwork& net);
void write_edges(const fs::path& path, std::span<const Edge> edges);

// `sector,q,x,d,y,f`.
void write_sector_table(const fs::path& path, const SectorTable& table);

// `src,dst`.
void write_topology(const fs::path& path, const Topology& t);
Topology read_topology(const fs::path& path, std::size_t n_nodes, std::optional<NodeId> proxy);

// `id,orig_id,sector,s_in,s_out,value_added,final_demand,is_proxy`; the
// proxy row has an empty orig_id and sector.
void write_proxied_accounts(const fs::path& path, const ProxiedEconomy& p,
                            std::span<const std::int32_t> labels,
                            std::span<const std::string> sector_names);

struct ProxiedAccountsFile {
  NodeAccounts accounts;
  std::vector<NodeId> original_id;  // firms only
  std::optional<NodeId> proxy;
};
ProxiedAccountsFile read_proxied_accounts(const fs::path& path);

// `src,dst,expected,lambda,ci_low,ci_high`.
void write_reconstruction(const fs::path& path, const ReconstructionResult& r);
ReconstructionResult read_reconstruction(const fs::path& path, std::size_t n_nodes,
                                         std::optional<NodeId> proxy);

// `node,value`.
void write_vector(const fs::path& path, std::span<const double> values);

// Pretty-printed with a trailing newline.
void write_json(const fs::path& path, const nlohmann::json& j);
nlohmann::json read_json(const fs::path& path);

}  // namespace firmrecon::io
