#include "firmrecon/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <ostream>

#include <omp.h>

#include "firmrecon/coeffs.hpp"
#include "firmrecon/csv.hpp"
#include "firmrecon/error.hpp"
#include "firmrecon/io.hpp"
#include "firmrecon/metrics.hpp"
#include "firmrecon/rng.hpp"

namespace firmrecon {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPercent = 100.0;

std::vector<NodeId> complement(std::size_t n, std::span<const NodeId> kept) {
  std::vector<NodeId> out;
  out.reserve(n - kept.size());
  std::size_t k = 0;
  for (NodeId i = 0; i < n; ++i) {
    if (k < kept.size() && kept[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

template <class T>
std::vector<T> head(const std::vector<T>& v, std::size_t n) {
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)};
}

json error_block(std::span<const double> x, std::span<const double> x_star) {
  const NormalizedErrors e = normalized_errors(x, x_star);
  return {{"rmse", e.rmse},
          {"mae", e.mae},
          {"medae", e.medae},
          {"phi", e.phi},
          {"cosine", cosine_similarity(x, x_star)}};
}

json powerlaw_block(std::span<const double> samples, const PowerLawOptions& opt) {
  try {
    const PowerLawFit fit = powerlaw_fit(samples, opt);
    return {{"gamma", fit.gamma}, {"xmin", fit.xmin}, {"n_tail", fit.n_tail}, {"ks", fit.ks_distance}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientTail) throw;
    return nullptr;
  }
}

// Firm-firm coefficient values on the known edges, read off a coefficient
// matrix over the proxied node set. Edges missing from the matrix are 0.
std::vector<double> on_edges(const CoefficientMatrix& c, const Topology& kept_edges) {
  std::vector<double> out(kept_edges.n_edges(), 0.0);
  for (EdgeIndex e = 0; e < kept_edges.n_edges(); ++e) {
    if (auto f = c.topology.find(kept_edges.src(e), kept_edges.dst(e))) out[e] = c.values[*f];
  }
  return out;
}

}  // namespace

Baseline make_baseline(const RunConfig& cfg, const Economy& economy,
                       std::optional<std::vector<NodeId>> kept) {
  if (economy.network.proxy()) fail(ErrorCode::InvalidProxy, "the empirical economy has no proxy node");
  Baseline b;
  b.full = economy.network;
  b.sector = economy.sector;
  b.sector_names = economy.sector_names;
  const SectorTable table =
      derive_sector_table(economy.network, economy.accounts, economy.sector, economy.sector_names);
  b.empirical = impute_from_sectors(economy.accounts, table, economy.sector);

  b.kept = kept ? std::move(*kept) : select_top_firms(b.full, b.empirical, cfg.n_keep);
  b.test_network = induced_subnetwork(b.full, b.kept);
  const std::vector<NodeId> excluded = complement(b.full.n_nodes(), b.kept);
  if (excluded.empty()) fail(ErrorCode::EmptySelection, "every firm is kept; nothing is left for the proxy");

  const std::vector<double> mult = output_multipliers(technical_coefficients(b.full, b.empirical));
  const std::vector<double> infl = influence_vector(b.full, b.empirical, cfg.alpha);
  b.multipliers.reserve(b.kept.size());
  b.influence.reserve(b.kept.size());
  for (NodeId i : b.kept) {
    b.multipliers.push_back(mult[i]);
    b.influence.push_back(infl[i]);
  }

  const ShockPanel panel = simulate_tfp(b.full.n_nodes(), cfg.periods, cfg.sigma, cfg.seed);
  b.empirical_volatility = kPercent * aggregate_volatility(panel, infl);
  b.shocks = with_proxy(panel.select(b.kept), panel.select(excluded), cfg.proxy_rule);
  return b;
}

Baseline make_baseline(const RunConfig& cfg) {
  SynthConfig s = cfg.economy;
  s.seed = cfg.seed;
  return make_baseline(cfg, generate_ground_truth(s));
}

std::uint64_t trim_seed(std::uint64_t seed, std::size_t point, std::size_t replicate) noexcept {
  return replicate_seed(derive_seed(seed, stream::kTrim, point), replicate);
}

TrimResult trim_for(const Baseline& base, const RunConfig& cfg, const SweepPoint& point,
                    std::uint64_t seed) {
  if (!point.fraction) return trim_links(base.test_network, cfg.match_degree, seed);
  const auto m = static_cast<double>(base.test_network.n_edges());
  const auto m_star = static_cast<std::size_t>(std::llround((1.0 - *point.fraction) * m));
  return trim_links_to_count(base.test_network, m_star, seed);
}

json evaluate(const RunConfig& cfg, const Baseline& base, const Topology& kept_edges,
              const ProxiedEconomy& proxied, const ReconstructionResult& recon) {
  const std::size_t k = base.kept.size();
  const auto proxy = static_cast<NodeId>(k);
  const NodeAccounts& acc = proxied.accounts;
  if (kept_edges.n_nodes() != k || acc.size() != k + 1 || recon.topology.n_nodes() != k + 1) {
    fail(ErrorCode::SizeMismatch, "reconstruction does not match the baseline");
  }
  const WeightedNetwork expected = recon.expected_network();
  const std::size_t m = kept_edges.n_edges();

  // Firm-firm weights on the known edges.
  std::vector<double> w_emp(m), w_hat(m, 0.0), lo(m, 0.0), hi(m, 0.0);
  for (EdgeIndex e = 0; e < m; ++e) {
    const NodeId i = kept_edges.src(e), j = kept_edges.dst(e);
    const auto t = base.test_network.topology().find(i, j);
    if (!t) fail(ErrorCode::EdgeSetMismatch, "known edge missing from the test network");
    w_emp[e] = base.test_network.weight(*t);
    if (auto r = recon.topology.find(i, j)) {
      w_hat[e] = recon.expected[*r];
      lo[e] = recon.ci_low[*r];
      hi[e] = recon.ci_high[*r];
    }
  }

  // Empirical coefficients use the firm's full-economy totals, which the
  // proxied accounts carry unchanged.
  std::vector<double> t_emp(m), b_emp(m);
  for (EdgeIndex e = 0; e < m; ++e) {
    t_emp[e] = w_emp[e] / acc.total_cost(kept_edges.dst(e));
    b_emp[e] = w_emp[e] / acc.total_sales(kept_edges.src(e));
  }
  const CoefficientMatrix tech = technical_coefficients(expected, acc);
  const CoefficientMatrix alloc = allocation_coefficients(expected, acc);
  const std::vector<double> t_hat = on_edges(tech, kept_edges);
  const std::vector<double> b_hat = on_edges(alloc, kept_edges);

  const std::vector<double> mult_full = output_multipliers(tech);
  const std::vector<double> mult_drop = output_multipliers(drop_node(tech, proxy));
  const CoefficientMatrix omega = input_shares(expected);
  const std::vector<double> v_full = influence_from_shares(omega, cfg.alpha);
  const std::vector<double> v_drop = influence_from_shares(drop_node(omega, proxy), cfg.alpha);
  const std::vector<double> v_unif = uniform_influence(recon.topology, cfg.alpha);

  const ShockPanel& panel = base.shocks;
  const std::vector<std::vector<NodeId>> parts = [&] {
    std::vector<NodeId> firms(k);
    for (NodeId i = 0; i < k; ++i) firms[i] = i;
    return std::vector<std::vector<NodeId>>{firms, {proxy}};
  }();
  const std::vector<double> shares = variance_shares(panel, v_full, parts);

  double proxy_in = 0.0, firm_in = 0.0, proxy_out = 0.0, firm_out = 0.0;
  const Topology& rt = recon.topology;
  for (EdgeIndex e = rt.row_begin(proxy); e < rt.row_end(proxy); ++e) {
    if (rt.dst(e) != proxy) proxy_in += recon.expected[e];
  }
  for (std::size_t c = rt.col_begin(proxy); c < rt.col_end(proxy); ++c) {
    const EdgeIndex e = rt.col_edge(c);
    if (rt.src(e) != proxy) proxy_out += recon.expected[e];
  }
  for (NodeId i = 0; i < k; ++i) {
    firm_in += acc.s_in[i];
    firm_out += acc.s_out[i];
  }

  const std::vector<double> v_firms = head(v_full, k);
  json report;
  report["network"] = {{"n_firms", k},
                       {"test_edges", base.test_network.n_edges()},
                       {"known_edges", m},
                       {"deleted_edges", base.test_network.n_edges() - m},
                       {"mean_degree", average_degree(kept_edges)},
                       {"reconstructed_edges", rt.n_edges()}};
  report["ipf"] = {{"l1", recon.l1},
                   {"relative_l1", recon.relative_l1},
                   {"iterations", recon.iterations},
                   {"converged", recon.converged}};
  report["weights"] = {{"cosine", cosine_similarity(w_hat, w_emp)},
                       {"ci_coverage", ci_coverage(w_emp, lo, hi)},
                       {"powerlaw_empirical", powerlaw_block(w_emp, cfg.powerlaw)},
                       {"powerlaw_reconstructed", powerlaw_block(w_hat, cfg.powerlaw)}};
  report["technical"] = error_block(t_hat, t_emp);
  report["allocation"] = error_block(b_hat, b_emp);
  report["multipliers"] = {{"with_proxy", error_block(head(mult_full, k), base.multipliers)},
                           {"without_proxy", error_block(mult_drop, base.multipliers)}};
  report["influence"] = {{"with_proxy", error_block(v_firms, base.influence)},
                         {"without_proxy", error_block(v_drop, base.influence)},
                         {"uniform", error_block(head(v_unif, k), base.influence)},
                         {"powerlaw_empirical", powerlaw_block(base.influence, cfg.powerlaw)},
                         {"powerlaw_reconstructed", powerlaw_block(v_firms, cfg.powerlaw)}};
  report["volatility"] = {
      {"empirical_vol", base.empirical_volatility},
      {"recon_vol_with_proxy", kPercent * aggregate_volatility(panel, v_full, true)},
      {"recon_vol_no_proxy", kPercent * aggregate_volatility(panel, v_full, false)},
      {"benchmark_vol_with_proxy", kPercent * aggregate_volatility(panel, v_unif, true)},
      {"benchmark_vol_no_proxy", kPercent * aggregate_volatility(panel, v_unif, false)}};
  report["variance_shares"] = {{"firms", shares[0]}, {"proxy", shares[1]}};
  report["proxy"] = {{"influence", v_full[proxy]},
                     {"input_share", proxy_in / firm_in},
                     {"output_share", proxy_out / firm_out}};
  return report;
}

json run_replicate(const RunConfig& cfg, const Baseline& base, const SweepPoint& point,
                   std::size_t point_index, std::size_t replicate) {
  const std::uint64_t seed = trim_seed(cfg.seed, point_index, replicate);
  const TrimResult trim = trim_for(base, cfg, point, seed);
  const ProxiedEconomy proxied = aggregate_proxy(base.full, base.empirical, base.kept, trim.kept);
  const ReconstructionResult recon =
      fit_crem(proxied.network.topology(), proxied.accounts.s_out, proxied.accounts.s_in, cfg.crem);
  json report = evaluate(cfg, base, trim.kept, proxied, recon);
  report["sweep"] = point.label;
  report["fraction"] = point.fraction ? json(*point.fraction) : json(nullptr);
  report["replicate"] = replicate;
  report["seed"] = seed;
  return report;
}

namespace {

enum class Kind { Number, Count, Boolean, String, Fit, Block };

struct Field {
  const char* pointer;
  Kind kind;
  double lo = -HUGE_VAL;
  double hi = HUGE_VAL;
};

const std::vector<Field>& report_schema() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f = {
        {"/sweep", Kind::String},
        {"/replicate", Kind::Count},
        {"/seed", Kind::Count},
        {"/network/n_firms", Kind::Count},
        {"/network/test_edges", Kind::Count},
        {"/network/known_edges", Kind::Count},
        {"/network/deleted_edges", Kind::Count},
        {"/network/reconstructed_edges", Kind::Count},
        {"/network/mean_degree", Kind::Number, 0.0},
        {"/ipf/l1", Kind::Number, 0.0},
        {"/ipf/relative_l1", Kind::Number, 0.0},
        {"/ipf/iterations", Kind::Count},
        {"/ipf/converged", Kind::Boolean},
        {"/weights/cosine", Kind::Number, -1.0 - 1e-12, 1.0 + 1e-12},
        {"/weights/ci_coverage", Kind::Number, 0.0, 1.0},
        {"/weights/powerlaw_empirical", Kind::Fit},
        {"/weights/powerlaw_reconstructed", Kind::Fit},
        {"/technical", Kind::Block},
        {"/allocation", Kind::Block},
        {"/multipliers/with_proxy", Kind::Block},
        {"/multipliers/without_proxy", Kind::Block},
        {"/influence/with_proxy", Kind::Block},
        {"/influence/without_proxy", Kind::Block},
        {"/influence/uniform", Kind::Block},
        {"/influence/powerlaw_empirical", Kind::Fit},
        {"/influence/powerlaw_reconstructed", Kind::Fit},
        {"/volatility/empirical_vol", Kind::Number, 0.0},
        {"/volatility/recon_vol_with_proxy", Kind::Number, 0.0},
        {"/volatility/recon_vol_no_proxy", Kind::Number, 0.0},
        {"/volatility/benchmark_vol_with_proxy", Kind::Number, 0.0},
        {"/volatility/benchmark_vol_no_proxy", Kind::Number, 0.0},
        {"/variance_shares/firms", Kind::Number, 0.0, 1.0},
        {"/variance_shares/proxy", Kind::Number, 0.0, 1.0},
        {"/proxy/influence", Kind::Number, 0.0, 1.0},
        {"/proxy/input_share", Kind::Number, 0.0, 1.0 + 1e-9},
        {"/proxy/output_share", Kind::Number, 0.0, 1.0 + 1e-9},
    };
    return f;
  }();
  return fields;
}

void check_number(const json& v, const std::string& where, double lo, double hi,
                  std::vector<std::string>& problems) {
  if (!v.is_number()) {
    problems.push_back(where + " is not a number");
    return;
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    problems.push_back(where + " is not finite");
  } else if (x < lo || x > hi) {
    problems.push_back(where + " = " + csv::format(x) + " is out of range");
  }
}

}  // namespace

std::vector<std::string> validate_report(const json& report) {
  std::vector<std::string> problems;
  if (!report.is_object()) return {"report is not an object"};
  if (!report.contains("fraction") || !(report["fraction"].is_null() || report["fraction"].is_number())) {
    problems.push_back("/fraction must be a number or null");
  }
  for (const Field& f : report_schema()) {
    const json::json_pointer ptr(f.pointer);
    if (!report.contains(ptr)) {
      problems.push_back(std::string(f.pointer) + " is missing");
      continue;
    }
    const json& v = report.at(ptr);
    switch (f.kind) {
      case Kind::Number: check_number(v, f.pointer, f.lo, f.hi, problems); break;
      case Kind::Count:
        if (!v.is_number_unsigned()) problems.push_back(std::string(f.pointer) + " is not a count");
        break;
      case Kind::Boolean:
        if (!v.is_boolean()) problems.push_back(std::string(f.pointer) + " is not a boolean");
        break;
      case Kind::String:
        if (!v.is_string()) problems.push_back(std::string(f.pointer) + " is not a string");
        break;
      case Kind::Fit:
        if (v.is_null()) break;
        check_number(v.value("gamma", json()), std::string(f.pointer) + "/gamma", 1.0, HUGE_VAL, problems);
        check_number(v.value("xmin", json()), std::string(f.pointer) + "/xmin", 0.0, HUGE_VAL, problems);
        check_number(v.value("ks", json()), std::string(f.pointer) + "/ks", 0.0, 1.0, problems);
        if (!v.contains("n_tail") || !v["n_tail"].is_number_unsigned()) {
          problems.push_back(std::string(f.pointer) + "/n_tail is not a count");
        }
        break;
      case Kind::Block:
        for (const char* key : {"rmse", "mae", "medae", "phi"}) {
          check_number(v.value(key, json()), std::string(f.pointer) + "/" + key, 0.0, HUGE_VAL, problems);
        }
        check_number(v.value("cosine", json()), std::string(f.pointer) + "/cosine", -1.0 - 1e-12,
                     1.0 + 1e-12, problems);
        break;
    }
  }
  if (problems.empty()) {
    const double total = report["variance_shares"]["firms"].get<double>() +
                         report["variance_shares"]["proxy"].get<double>();
    if (std::abs(total - 1.0) > 1e-9) problems.push_back("/variance_shares do not sum to 1");
  }
  return problems;
}

json summarize(const std::vector<json>& reports) {
  std::map<std::string, std::vector<double>> values;
  for (const json& r : reports) {
    const json flat = r.flatten();
    for (const auto& [key, v] : flat.items()) {
      if (key == "/replicate" || key == "/seed" || key == "/fraction") continue;
      if (v.is_number()) {
        values[key].push_back(v.get<double>());
      } else if (v.is_boolean()) {
        values[key].push_back(v.get<bool>() ? 1.0 : 0.0);
      }
    }
  }
  json mean = json::object(), sd = json::object(), count = json::object();
  for (const auto& [key, x] : values) {
    const auto n = static_cast<double>(x.size());
    double mu = 0.0;
    for (double v : x) mu += v;
    mu /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - mu) * (v - mu);
    mean[key] = mu;
    sd[key] = x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    count[key] = x.size();
  }
  return {{"n_reports", reports.size()}, {"mean", mean}, {"std", sd}, {"count", count}};
}

json qualitative_checks(const json& summary) {
  const json& mean = summary.at("mean");
  const auto at = [&](const char* key) { return mean.at(key).get<double>(); };
  const double emp = at("/volatility/empirical_vol");
  json checks;
  checks["recon_volatility_exceeds_empirical"] =
      at("/volatility/recon_vol_with_proxy") > emp && at("/volatility/recon_vol_no_proxy") > emp;
  checks["proxy_dominates_variance"] = at("/variance_shares/proxy") > at("/variance_shares/firms");
  checks["multiplier_cosine_exceeds_influence_cosine"] =
      at("/multipliers/with_proxy/cosine") > at("/influence/with_proxy/cosine");
  checks["technical_errors_not_above_allocation"] =
      at("/technical/rmse") <= at("/allocation/rmse") && at("/technical/mae") <= at("/allocation/mae") &&
      at("/technical/medae") <= at("/allocation/medae");
  return checks;
}

namespace {

fs::path point_dir(const fs::path& out, const SweepPoint& p) { return out / ("sweep_" + p.label); }

fs::path report_path(const fs::path& out, const SweepPoint& p, std::size_t r) {
  return point_dir(out, p) / ("replicate_" + std::to_string(r)) / "report.json";
}

struct Failure {
  std::string sweep;
  std::size_t replicate;
  std::string error;
};

RunOutcome write_summaries(const fs::path& out, const RunConfig& cfg, std::vector<Failure> failures,
                           std::ostream& log) {
  RunOutcome outcome;
  const std::vector<SweepPoint> points = sweep_points(cfg);
  json overall;
  overall["points"] = json::array();
  json invalid = json::array();
  csv::Writer curves(out / "sweep_curves.csv", {"sweep", "fraction", "metric", "mean", "std", "n"});
  std::set<std::pair<std::string, std::size_t>> failed;
  for (const Failure& f : failures) failed.insert({f.sweep, f.replicate});

  for (const SweepPoint& p : points) {
    std::vector<json> reports;
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
      if (failed.count({p.label, r})) continue;
      const fs::path path = report_path(out, p, r);
      if (!fs::exists(path)) {
        failures.push_back({p.label, r, "report.json is missing"});
        continue;
      }
      json report = io::read_json(path);
      const std::vector<std::string> problems = validate_report(report);
      if (!problems.empty()) {
        invalid.push_back({{"sweep", p.label}, {"replicate", r}, {"problems", problems}});
        ++outcome.invalid;
        continue;
      }
      reports.push_back(std::move(report));
    }
    outcome.completed += reports.size();
    if (reports.empty()) continue;
    json s = summarize(reports);
    s["sweep"] = p.label;
    s["fraction"] = p.fraction ? json(*p.fraction) : json(nullptr);
    s["checks"] = qualitative_checks(s);
    io::write_json(point_dir(out, p) / "report_summary.json", s);
    for (const auto& [key, v] : s["mean"].items()) {
      curves.field(p.label);
      curves.field(p.fraction ? csv::format(*p.fraction) : std::string("match"));
      curves.field(key).field(v.get<double>()).field(s["std"][key].get<double>());
      curves.field(s["count"][key].get<std::uint64_t>());
      curves.end_row();
    }
    overall["points"].push_back(std::move(s));
  }
  curves.close();

  std::sort(failures.begin(), failures.end(), [](const Failure& a, const Failure& b) {
    return std::tie(a.sweep, a.replicate) < std::tie(b.sweep, b.replicate);
  });
  json errors = json::array();
  for (const Failure& f : failures) {
    errors.push_back({{"sweep", f.sweep}, {"replicate", f.replicate}, {"error", f.error}});
    log << "replicate " << f.replicate << " of " << f.sweep << " failed: " << f.error << '\n';
  }
  outcome.failed = failures.size();
  overall["failed"] = errors;
  overall["invalid"] = invalid;
  if (!overall["points"].empty()) {
    // Directional claims are judged at the sparsest trim level.
    overall["checks"] = overall["points"].back()["checks"];
    overall["checks_at"] = overall["points"].back()["sweep"];
  }
  io::write_json(out / "summary.json", overall);
  outcome.exit_code = (outcome.failed == 0 && outcome.invalid == 0) ? 0 : 1;
  return outcome;
}

}  // namespace

RunOutcome run_pipeline(const RunConfig& cfg, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  fs::create_directories(cfg.out);
  io::write_json(cfg.out / "config.json", to_json(cfg));

  const Baseline base = make_baseline(cfg);
  io::write_json(cfg.out / "baseline.json",
                 {{"n_firms", base.full.n_nodes()},
                  {"n_edges", base.full.n_edges()},
                  {"mean_degree", average_degree(base.full.topology())},
                  {"n_kept", base.kept.size()},
                  {"test_edges", base.test_network.n_edges()},
                  {"test_mean_degree", average_degree(base.test_network.topology())},
                  {"empirical_vol", base.empirical_volatility}});
  log << "baseline: " << base.full.n_nodes() << " firms, " << base.full.n_edges() << " edges; kept "
      << base.kept.size() << " firms with " << base.test_network.n_edges() << " edges ("
      << elapsed() << " s)\n";

  const std::vector<SweepPoint> points = sweep_points(cfg);
  struct Task {
    std::size_t point;
    std::size_t replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < points.size(); ++p) {
    fs::create_directories(point_dir(cfg.out, points[p]));
    for (std::size_t r = 0; r < cfg.replicates; ++r) tasks.push_back({p, r});
  }

  std::vector<std::string> errors(tasks.size());
  const int threads = cfg.jobs == 0 ? omp_get_max_threads() : static_cast<int>(cfg.jobs);
  const auto n_tasks = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (std::int64_t t = 0; t < n_tasks; ++t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    const SweepPoint& p = points[task.point];
    try {
      const json report = run_replicate(cfg, base, p, task.point, task.replicate);
      const fs::path path = report_path(cfg.out, p, task.replicate);
      fs::create_directories(path.parent_path());
      io::write_json(path, report);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(t)] = e.what();
    }
  }
  log << "replicates done (" << elapsed() << " s)\n";

  std::vector<Failure> failures;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (!errors[t].empty()) failures.push_back({points[tasks[t].point].label, tasks[t].replicate, errors[t]});
  }
  return write_summaries(cfg.out, cfg, std::move(failures), log);
}

RunOutcome summarize_run(const fs::path& out_dir, const RunConfig& cfg, std::ostream& log) {
  return write_summaries(out_dir, cfg, {}, log);
}

}  // namespace firmrecon
