#include "firmrecon/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "firmrecon/csv.hpp"
#include "firmrecon/error.hpp"

namespace firmrecon::io {

namespace {

NodeId parse_node(std::string_view field, std::string_view what, std::size_t n) {
  const std::uint64_t id = csv::parse_uint(field, what);
  if (id >= n) {
    fail(ErrorCode::IndexOutOfRange,
         std::string(what) + " " + std::to_string(id) + " outside " + std::to_string(n) + " nodes");
  }
  return static_cast<NodeId>(id);
}

}  // namespace

void write_edges(const fs::path& path, std::span<const Edge> edges) {
  csv::Writer out(path, {"src", "dst", "weight"});
  for (const Edge& e : edges) {
    out.field(e.src).field(e.dst).field(e.weight);
    out.end_row();
  }
  out.close();
}

void write_edges(const fs::path& path, const WeightedNetwork& net) {
  const std::vector<Edge> edges = net.edges();
  write_edges(path, edges);
}

void write_economy(const fs::path& dir, const Economy& economy) {
  fs::create_directories(dir);
  write_edges(dir / "edges.csv", economy.network);
  csv::Writer out(dir / "nodes.csv", {"id", "sector", "value_added", "final_demand", "is_proxy"});
  const auto proxy = economy.network.proxy();
  for (NodeId i = 0; i < economy.network.n_nodes(); ++i) {
    const std::int32_t s = economy.sector[i];
    out.field(i)
        .field(s == kNoSector ? std::string_view{} : std::string_view(economy.sector_names[s]))
        .field(economy.accounts.value_added[i])
        .field(economy.accounts.final_demand[i])
        .field(std::string_view(proxy && *proxy == i ? "1" : "0"));
    out.end_row();
  }
  out.close();
  write_sector_table(dir / "sectors.csv",
                     derive_sector_table(economy.network, economy.accounts, economy.sector,
                                         economy.sector_names));
}

Economy read_economy(const fs::path& edges, const fs::path& nodes) {
  struct NodeRow {
    std::string sector;
    double y;
    double f;
    bool proxy;
  };
  std::vector<NodeRow> rows;
  {
    csv::Reader in(nodes, {"id", "sector", "value_added", "final_demand", "is_proxy"});
    std::vector<std::string_view> f;
    while (in.next(f)) {
      const std::uint64_t id = csv::parse_uint(f[0], "id");
      if (id != rows.size()) {
        fail(ErrorCode::ParseError, nodes.string() + ": ids must run 0, 1, 2, ... in order");
      }
      rows.push_back({std::string(f[1]), csv::parse_double(f[2], "value_added"),
                      csv::parse_double(f[3], "final_demand"), csv::parse_bool(f[4], "is_proxy")});
    }
  }
  const std::size_t n = rows.size();
  if (n == 0) fail(ErrorCode::EmptyInput, nodes.string() + " lists no nodes");

  std::optional<NodeId> proxy;
  std::set<std::string> names;
  for (NodeId i = 0; i < n; ++i) {
    if (rows[i].proxy) {
      if (proxy) fail(ErrorCode::InvalidProxy, "more than one proxy node");
      proxy = i;
    }
    if (!rows[i].sector.empty()) names.insert(rows[i].sector);
  }

  std::vector<Edge> list;
  {
    csv::Reader in(edges, {"src", "dst", "weight"});
    std::vector<std::string_view> f;
    while (in.next(f)) {
      const NodeId s = parse_node(f[0], "src", n);
      const NodeId d = parse_node(f[1], "dst", n);
      const double w = csv::parse_double(f[2], "weight");
      if (w == 0.0) continue;
      list.push_back({s, d, w});
    }
  }

  Economy economy;
  economy.network = WeightedNetwork::build(n, list, proxy);
  economy.sector_names.assign(names.begin(), names.end());
  std::map<std::string, std::int32_t> index;
  for (std::size_t s = 0; s < economy.sector_names.size(); ++s) {
    index[economy.sector_names[s]] = static_cast<std::int32_t>(s);
  }
  std::vector<double> y(n), fd(n);
  economy.sector.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    economy.sector[i] = rows[i].sector.empty() ? kNoSector : index[rows[i].sector];
    y[i] = rows[i].y;
    fd[i] = rows[i].f;
  }
  economy.accounts = accounts_from_network(economy.network, std::move(y), std::move(fd));
  return economy;
}

void write_sector_table(const fs::path& path, const SectorTable& table) {
  csv::Writer out(path, {"sector", "q", "x", "d", "y", "f"});
  for (std::size_t s = 0; s < table.size(); ++s) {
    const SectorRow& r = table.rows[s];
    out.field(table.names[s]).field(r.q).field(r.x).field(r.d).field(r.y).field(r.f);
    out.end_row();
  }
  out.close();
}

void write_topology(const fs::path& path, const Topology& t) {
  csv::Writer out(path, {"src", "dst"});
  for (EdgeIndex e = 0; e < t.n_edges(); ++e) {
    out.field(t.src(e)).field(t.dst(e));
    out.end_row();
  }
  out.close();
}

Topology read_topology(const fs::path& path, std::size_t n_nodes, std::optional<NodeId> proxy) {
  csv::Reader in(path, {"src", "dst"});
  std::vector<Arc> arcs;
  std::vector<std::string_view> f;
  while (in.next(f)) arcs.push_back({parse_node(f[0], "src", n_nodes), parse_node(f[1], "dst", n_nodes)});
  return Topology::build(n_nodes, arcs, proxy);
}

void write_proxied_accounts(const fs::path& path, const ProxiedEconomy& p,
                            std::span<const std::int32_t> labels,
                            std::span<const std::string> sector_names) {
  csv::Writer out(path, {"id", "orig_id", "sector", "s_in", "s_out", "value_added", "final_demand",
                         "is_proxy"});
  const NodeAccounts& a = p.accounts;
  for (NodeId i = 0; i < a.size(); ++i) {
    out.field(i);
    if (i < p.original_id.size()) {
      const std::int32_t s = labels[p.original_id[i]];
      out.field(p.original_id[i]);
      out.field(s == kNoSector ? std::string_view{} : std::string_view(sector_names[s]));
    } else {
      out.field(std::string_view{}).field(std::string_view{});
    }
    out.field(a.s_in[i]).field(a.s_out[i]).field(a.value_added[i]).field(a.final_demand[i]);
    out.field(std::string_view(i < p.original_id.size() ? "0" : "1"));
    out.end_row();
  }
  out.close();
}

ProxiedAccountsFile read_proxied_accounts(const fs::path& path) {
  csv::Reader in(path, {"id", "orig_id", "sector", "s_in", "s_out", "value_added", "final_demand",
                        "is_proxy"});
  ProxiedAccountsFile out;
  std::vector<std::string_view> f;
  while (in.next(f)) {
    const auto i = static_cast<NodeId>(csv::parse_uint(f[0], "id"));
    if (i != out.accounts.size()) fail(ErrorCode::ParseError, path.string() + ": ids must run in order");
    if (out.proxy) fail(ErrorCode::InvalidProxy, path.string() + ": proxy row must be last");
    out.accounts.s_in.push_back(csv::parse_double(f[3], "s_in"));
    out.accounts.s_out.push_back(csv::parse_double(f[4], "s_out"));
    out.accounts.value_added.push_back(csv::parse_double(f[5], "value_added"));
    out.accounts.final_demand.push_back(csv::parse_double(f[6], "final_demand"));
    if (csv::parse_bool(f[7], "is_proxy")) {
      out.proxy = i;
    } else {
      out.original_id.push_back(static_cast<NodeId>(csv::parse_uint(f[1], "orig_id")));
    }
  }
  if (out.accounts.size() == 0) fail(ErrorCode::EmptyInput, path.string() + " lists no nodes");
  return out;
}

void write_reconstruction(const fs::path& path, const ReconstructionResult& r) {
  csv::Writer out(path, {"src", "dst", "expected", "lambda", "ci_low", "ci_high"});
  const Topology& t = r.topology;
  for (EdgeIndex e = 0; e < t.n_edges(); ++e) {
    out.field(t.src(e)).field(t.dst(e)).field(r.expected[e]).field(r.rate[e]).field(r.ci_low[e]);
    out.field(r.ci_high[e]);
    out.end_row();
  }
  out.close();
}

ReconstructionResult read_reconstruction(const fs::path& path, std::size_t n_nodes,
                                         std::optional<NodeId> proxy) {
  csv::Reader in(path, {"src", "dst", "expected", "lambda", "ci_low", "ci_high"});
  struct Row {
    Arc arc;
    double expected, rate, low, high;
  };
  std::vector<Row> rows;
  std::vector<std::string_view> f;
  while (in.next(f)) {
    rows.push_back({{parse_node(f[0], "src", n_nodes), parse_node(f[1], "dst", n_nodes)},
                    csv::parse_double(f[2], "expected"), csv::parse_double(f[3], "lambda"),
                    csv::parse_double(f[4], "ci_low"), csv::parse_double(f[5], "ci_high")});
  }
  std::vector<Arc> arcs(rows.size());
  std::transform(rows.begin(), rows.end(), arcs.begin(), [](const Row& r) { return r.arc; });
  ReconstructionResult r;
  r.topology = Topology::build(n_nodes, arcs, proxy);
  const std::size_t m = r.topology.n_edges();
  r.expected.resize(m);
  r.rate.resize(m);
  r.ci_low.resize(m);
  r.ci_high.resize(m);
  for (const Row& row : rows) {
    const EdgeIndex e = *r.topology.find(row.arc.src, row.arc.dst);
    r.expected[e] = row.expected;
    r.rate[e] = row.rate;
    r.ci_low[e] = row.low;
    r.ci_high[e] = row.high;
  }
  r.converged = true;
  return r;
}

void write_vector(const fs::path& path, std::span<const double> values) {
  csv::Writer out(path, {"node", "value"});
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.field(std::uint64_t{i}).field(values[i]);
    out.end_row();
  }
  out.close();
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::OutputUnwritable, "cannot open " + path.string());
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorCode::OutputUnwritable, "write failed for " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InputUnreadable, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

}  // namespace firmrecon::io
