#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "firmrecon/coeffs.hpp"
#include "firmrecon/config.hpp"
#include "firmrecon/csv.hpp"
#include "firmrecon/error.hpp"
#include "firmrecon/harmonize.hpp"
#include "firmrecon/io.hpp"
#include "firmrecon/pipeline.hpp"
#include "firmrecon/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace firmrecon;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out = "out";
  std::optional<std::size_t> jobs;
};

RunConfig load(const Globals& g) {
  RunConfig cfg = g.config.empty() ? parse_config_text("") : parse_config(fs::path(g.config));
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.economy.seed = *g.seed;
  }
  if (g.jobs) cfg.jobs = *g.jobs;
  cfg.out = g.out;
  return cfg;
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::UnknownKey:
    case ErrorCode::TypeError:
    case ErrorCode::RangeError:
      return 2;
    case ErrorCode::InputUnreadable:
      return 3;
    default:
      return 1;
  }
}

// Firm-firm part of a proxied topology.
Topology firm_edges(const Topology& t) {
  const NodeId proxy = *t.proxy();
  std::vector<Arc> arcs;
  for (EdgeIndex e = 0; e < t.n_edges(); ++e) {
    if (t.src(e) != proxy && t.dst(e) != proxy) arcs.push_back({t.src(e), t.dst(e)});
  }
  return Topology::build(proxy, arcs);
}

struct TrimInputs {
  Economy economy;
  io::ProxiedAccountsFile accounts;
};

TrimInputs load_trimmed(const std::string& edges, const std::string& nodes, const std::string& accounts) {
  TrimInputs in{io::read_economy(edges, nodes), io::read_proxied_accounts(accounts)};
  if (!in.accounts.proxy) fail(ErrorCode::InvalidProxy, accounts + " has no proxy row");
  return in;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Firm-level production network reconstruction experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed; all randomness derives from it");
  app.add_option("--config", g.config, "JSON run configuration");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads for replicates (0: all cores)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic ground-truth economy");
  std::optional<std::size_t> gen_firms, gen_sectors;
  std::optional<double> gen_degree;
  gen->add_option("--firms", gen_firms, "Number of firms");
  gen->add_option("--sectors", gen_sectors, "Number of sectors");
  gen->add_option("--degree", gen_degree, "Target mean degree");

  // trim
  auto* trim = app.add_subcommand("trim", "Select top firms, delete links and add the proxy node");
  std::string trim_edges, trim_nodes;
  std::optional<std::size_t> trim_keep;
  std::optional<double> trim_fraction, trim_degree;
  std::size_t trim_replicate = 0;
  trim->add_option("--edges", trim_edges, "Ground-truth edges.csv")->required();
  trim->add_option("--nodes", trim_nodes, "Ground-truth nodes.csv")->required();
  trim->add_option("--keep", trim_keep, "Number of firms to keep");
  auto* frac_opt = trim->add_option("--fraction", trim_fraction, "Share of links to delete");
  trim->add_option("--degree", trim_degree, "Target mean degree after deletion")->excludes(frac_opt);
  trim->add_option("--replicate", trim_replicate, "Replicate index for the deletion draw");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Fit the conditional reconstruction");
  std::string rec_topology, rec_accounts;
  std::optional<double> rec_tol;
  std::optional<std::size_t> rec_iter;
  std::string rec_rate;
  rec->add_option("--topology", rec_topology, "Proxied topology.csv")->required();
  rec->add_option("--accounts", rec_accounts, "Proxied accounts.csv")->required();
  rec->add_option("--tol", rec_tol, "Relative L1 tolerance");
  rec->add_option("--max-iter", rec_iter, "Maximum IPF sweeps");
  rec->add_option("--ci-rate", rec_rate, "Rate for the confidence bounds")
      ->check(CLI::IsMember({"post_ipf", "maxent"}));

  // multipliers
  auto* mult = app.add_subcommand("multipliers", "Output multipliers and influence vector");
  std::string mult_recon, mult_accounts, mult_edges, mult_nodes;
  std::optional<double> mult_alpha;
  bool mult_no_proxy = false;
  auto* mr = mult->add_option("--recon", mult_recon, "recon.csv (expected weights)");
  auto* ma = mult->add_option("--accounts", mult_accounts, "Proxied accounts.csv")->needs(mr);
  mr->needs(ma);
  auto* me = mult->add_option("--edges", mult_edges, "edges.csv")->excludes(mr);
  auto* mn = mult->add_option("--nodes", mult_nodes, "nodes.csv")->needs(me);
  me->needs(mn);
  mult->add_option("--alpha", mult_alpha, "Labour share");
  mult->add_flag("--no-proxy", mult_no_proxy, "Drop the proxy node before solving");

  // shock
  auto* shock = app.add_subcommand("shock", "Aggregate volatility from simulated TFP shocks");
  std::string sh_edges, sh_nodes, sh_accounts, sh_recon;
  std::optional<std::size_t> sh_periods;
  std::optional<double> sh_sigma, sh_alpha;
  shock->add_option("--edges", sh_edges, "Ground-truth edges.csv")->required();
  shock->add_option("--nodes", sh_nodes, "Ground-truth nodes.csv")->required();
  shock->add_option("--accounts", sh_accounts, "Proxied accounts.csv")->required();
  shock->add_option("--recon", sh_recon, "recon.csv")->required();
  shock->add_option("--periods", sh_periods, "Simulated periods");
  shock->add_option("--sigma", sh_sigma, "Shock standard deviation");
  shock->add_option("--alpha", sh_alpha, "Labour share");

  // eval
  auto* ev = app.add_subcommand("eval", "Compare a reconstruction with the ground truth");
  std::string ev_edges, ev_nodes, ev_accounts, ev_topology, ev_recon;
  ev->add_option("--edges", ev_edges, "Ground-truth edges.csv")->required();
  ev->add_option("--nodes", ev_nodes, "Ground-truth nodes.csv")->required();
  ev->add_option("--accounts", ev_accounts, "Proxied accounts.csv")->required();
  ev->add_option("--topology", ev_topology, "Proxied topology.csv")->required();
  ev->add_option("--recon", ev_recon, "recon.csv")->required();

  auto* run = app.add_subcommand("run", "Full sweep: gen, trim, reconstruct, evaluate, summarize");

  auto* report = app.add_subcommand("report", "Rebuild summaries from the reports under --out");

  // harmonize
  auto* harm = app.add_subcommand("harmonize", "Labour split, value added and cleaning of financials");
  std::string h_fin, h_ratios, h_method = "2b";
  bool h_synthetic = false;
  double h_holdout = 0.2;
  harm->add_option("--financials", h_fin, "financials.csv");
  harm->add_flag("--synthetic", h_synthetic, "Generate a synthetic panel instead of reading one");
  harm->add_option("--ratios", h_ratios, "Sector ratios `sector,final_demand_ratio,gfcf_ratio`");
  harm->add_option("--method", h_method, "Labour-share method, or auto for the held-out best")
      ->check(CLI::IsMember({"1", "2a", "2b", "3", "auto"}));
  harm->add_option("--holdout", h_holdout, "Held-out share of disclosing firms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    cfg = load(g);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ParseError ? 2 : exit_code(e);
  }

  try {
    const fs::path out = cfg.out;

    if (gen->parsed()) {
      SynthConfig s = cfg.economy;
      if (gen_firms) s.n_firms = *gen_firms;
      if (gen_sectors) s.n_sectors = *gen_sectors;
      if (gen_degree) s.target_mean_degree = *gen_degree;
      try {
        validate(s);
      } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
      }
      const Economy economy = generate_ground_truth(s);
      io::write_economy(out, economy);
      std::cout << json{{"n_firms", economy.network.n_nodes()},
                        {"n_edges", economy.network.n_edges()},
                        {"mean_degree", average_degree(economy.network.topology())}}
                       .dump()
                << '\n';
      return 0;
    }

    if (trim->parsed()) {
      RunConfig c = cfg;
      if (trim_keep) c.n_keep = *trim_keep;
      const Baseline base = make_baseline(c, io::read_economy(trim_edges, trim_nodes));
      SweepPoint point{"match", std::nullopt};
      if (trim_fraction) {
        if (!(*trim_fraction >= 0.0 && *trim_fraction < 1.0)) {
          std::cerr << "--fraction must lie in [0, 1)\n";
          return 2;
        }
        point = {"f" + csv::format(*trim_fraction), *trim_fraction};
      }
      if (trim_degree) c.match_degree = *trim_degree;
      const std::uint64_t seed = trim_seed(c.seed, 0, trim_replicate);
      const TrimResult t = trim_for(base, c, point, seed);
      const ProxiedEconomy p = aggregate_proxy(base.full, base.empirical, base.kept, t.kept);
      fs::create_directories(out);
      io::write_topology(out / "topology.csv", p.network.topology());
      io::write_proxied_accounts(out / "accounts.csv", p, base.sector, base.sector_names);
      std::vector<Edge> deleted = t.deleted;
      for (Edge& e : deleted) {
        e.src = base.kept[e.src];
        e.dst = base.kept[e.dst];
      }
      io::write_edges(out / "deleted.csv", deleted);
      io::write_edges(out / "truth.csv", p.network);
      std::cout << json{{"n_firms", base.kept.size()},
                        {"test_edges", base.test_network.n_edges()},
                        {"known_edges", t.kept.n_edges()},
                        {"deleted_edges", t.deleted.size()},
                        {"seed", seed}}
                       .dump()
                << '\n';
      return 0;
    }

    if (rec->parsed()) {
      const io::ProxiedAccountsFile acc = io::read_proxied_accounts(rec_accounts);
      const Topology t = io::read_topology(rec_topology, acc.accounts.size(), acc.proxy);
      CremOptions opt = cfg.crem;
      if (rec_tol) opt.ipf.tol = *rec_tol;
      if (rec_iter) opt.ipf.max_iter = *rec_iter;
      if (!rec_rate.empty()) opt.ci_rate = rec_rate == "maxent" ? CiRate::MaxEnt : CiRate::PostIpf;
      const ReconstructionResult r = fit_crem(t, acc.accounts.s_out, acc.accounts.s_in, opt);
      fs::create_directories(out);
      io::write_reconstruction(out / "recon.csv", r);
      const json summary{{"l1", r.l1},
                         {"relative_l1", r.relative_l1},
                         {"iterations", r.iterations},
                         {"converged", r.converged},
                         {"n_edges", r.topology.n_edges()}};
      io::write_json(out / "recon.json", summary);
      std::cout << summary.dump() << '\n';
      return r.converged ? 0 : 1;
    }

    if (mult->parsed()) {
      const double alpha = mult_alpha.value_or(cfg.alpha);
      WeightedNetwork net;
      NodeAccounts acc;
      std::optional<NodeId> proxy;
      if (!mult_recon.empty()) {
        io::ProxiedAccountsFile a = io::read_proxied_accounts(mult_accounts);
        net = io::read_reconstruction(mult_recon, a.accounts.size(), a.proxy).expected_network();
        acc = std::move(a.accounts);
        proxy = a.proxy;
      } else if (!mult_edges.empty()) {
        Economy e = io::read_economy(mult_edges, mult_nodes);
        net = std::move(e.network);
        acc = std::move(e.accounts);
        proxy = net.proxy();
      } else {
        std::cerr << "multipliers needs --recon/--accounts or --edges/--nodes\n";
        return 2;
      }
      CoefficientMatrix tech = technical_coefficients(net, acc);
      CoefficientMatrix omega = input_shares(net);
      CoefficientMatrix uniform = uniform_input_shares(net.topology());
      if (mult_no_proxy && proxy) {
        tech = drop_node(tech, *proxy);
        omega = drop_node(omega, *proxy);
        uniform = drop_node(uniform, *proxy);
      }
      fs::create_directories(out);
      io::write_vector(out / "output_multipliers.csv", output_multipliers(tech));
      io::write_vector(out / "influence.csv", influence_from_shares(omega, alpha));
      io::write_vector(out / "uniform_influence.csv", influence_from_shares(uniform, alpha));
      return 0;
    }

    if (shock->parsed() || ev->parsed()) {
      RunConfig c = cfg;
      if (sh_periods) c.periods = *sh_periods;
      if (sh_sigma) c.sigma = *sh_sigma;
      if (sh_alpha) c.alpha = *sh_alpha;
      if (c.periods < 2 || !(c.sigma > 0.0) || !(c.alpha > 0.0 && c.alpha <= 1.0)) {
        std::cerr << "need periods >= 2, sigma > 0 and alpha in (0, 1]\n";
        return 2;
      }
      const bool is_shock = shock->parsed();
      TrimInputs in = is_shock ? load_trimmed(sh_edges, sh_nodes, sh_accounts)
                               : load_trimmed(ev_edges, ev_nodes, ev_accounts);
      const std::size_t n = in.accounts.accounts.size();
      const Baseline base = make_baseline(c, in.economy, in.accounts.original_id);
      const ReconstructionResult r =
          io::read_reconstruction(is_shock ? sh_recon : ev_recon, n, in.accounts.proxy);
      const Topology known =
          is_shock ? firm_edges(r.topology) : firm_edges(io::read_topology(ev_topology, n, in.accounts.proxy));
      const ProxiedEconomy p = aggregate_proxy(base.full, base.empirical, base.kept, known);
      json report = evaluate(c, base, known, p, r);
      report.erase("ipf");
      fs::create_directories(out);
      if (is_shock) {
        json s = report["volatility"];
        s["shares"] = report["variance_shares"];
        io::write_json(out / "shock.json", s);
        std::cout << s.dump() << '\n';
      } else {
        io::write_json(out / "report.json", report);
        std::cout << report.dump() << '\n';
      }
      return 0;
    }

    if (run->parsed()) {
      fs::create_directories(out);
      const RunOutcome o = run_pipeline(cfg, std::cerr);
      std::cerr << o.completed << " replicates completed, " << o.failed << " failed, " << o.invalid
                << " invalid\n";
      const json summary = io::read_json(out / "summary.json");
      if (summary.contains("checks")) std::cout << summary["checks"].dump() << '\n';
      return o.exit_code;
    }

    if (report->parsed()) {
      RunConfig c = parse_config(io::read_json(out / "config.json"));
      c.out = out;
      const RunOutcome o = summarize_run(out, c, std::cerr);
      const json summary = io::read_json(out / "summary.json");
      if (summary.contains("checks")) std::cout << summary["checks"].dump() << '\n';
      return o.exit_code;
    }

    if (harm->parsed()) {
      fs::create_directories(out);
      FinancialsPanel panel;
      if (h_synthetic) {
        FinancialsConfig fc;
        fc.seed = cfg.seed;
        panel = generate_financials(fc).panel;
        csv::Writer w(out / "financials.csv",
                      {"firm", "year", "sector", "revenue", "cogs", "labour", "ebit", "depamort"});
        for (const FirmYear& r : panel) {
          w.field(r.firm).field(std::uint64_t(r.year)).field(r.sector).field(r.revenue).field(r.cogs);
          if (r.labour) {
            w.field(*r.labour);
          } else {
            w.field(std::string_view{});
          }
          w.field(r.ebit).field(r.depamort);
          w.end_row();
        }
        w.close();
      } else if (!h_fin.empty()) {
        panel = read_financials_csv(h_fin);
      } else {
        std::cerr << "harmonize needs --financials or --synthetic\n";
        return 2;
      }
      json summary;
      LabourMethod method = LabourMethod::M2b;
      if (h_method == "auto") {
        const auto rmse = holdout_labour_rmse(panel, h_holdout, cfg.seed);
        double best = HUGE_VAL;
        for (const auto& [m, v] : rmse) {
          summary["holdout_rmse"][std::string(to_string(m))] = v;
          if (v < best) {
            best = v;
            method = m;
          }
        }
      } else {
        method = parse_labour_method(h_method);
      }
      summary["method"] = to_string(method);
      const LabourShareModel model = fit_labour_share(method, panel);
      const std::vector<SplitRecord> split = split_cogs(panel, model);
      const CleanResult clean = clean_accounting(panel, split);
      std::map<std::string, SectorRatios> ratios;
      if (!h_ratios.empty()) ratios = read_sector_ratios_csv(h_ratios);
      std::size_t clamped = 0;
      csv::Writer w(out / "financials_out.csv",
                    {"firm", "year", "sector", "revenue", "cogs", "labour", "ebit", "depamort",
                     "labour_hat", "intermediate_hat", "value_added", "final_demand", "gfcf", "flag"});
      for (std::size_t k = 0; k < panel.size(); ++k) {
        const FirmYear& r = panel[k];
        const CleanRecord& c = clean.records[k];
        w.field(r.firm).field(std::uint64_t(r.year)).field(r.sector).field(r.revenue).field(r.cogs);
        if (r.labour) {
          w.field(*r.labour);
        } else {
          w.field(std::string_view{});
        }
        w.field(r.ebit).field(r.depamort).field(c.labour).field(c.intermediate).field(c.value_added);
        const auto it = ratios.find(r.sector);
        if (it != ratios.end()) {
          const DemandSplit d = impute_demand_and_gfcf(r.revenue, it->second.final_demand, it->second.gfcf);
          clamped += d.gfcf_clamped;
          w.field(d.final_demand).field(d.gfcf);
        } else {
          w.field(std::string_view{}).field(std::string_view{});
        }
        w.field(to_string(c.flag));
        w.end_row();
      }
      w.close();
      if (clamped > 0) std::cerr << "warning: negative GFCF ratio clamped to 0 for " << clamped << " rows\n";
      summary["records"] = panel.size();
      summary["imputed"] = std::count_if(split.begin(), split.end(), [](const SplitRecord& s) { return s.imputed; });
      summary["corrected"] = clean.corrected.size();
      summary["dropped"] = clean.dropped.size();
      summary["dropped_fraction"] = clean.dropped_fraction();
      summary["gfcf_clamped"] = clamped;
      io::write_json(out / "harmonize.json", summary);
      std::cout << summary.dump() << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
