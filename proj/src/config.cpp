#include "firmrecon/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "firmrecon/csv.hpp"
#include "firmrecon/error.hpp"

namespace firmrecon {

std::string_view to_string(ProxyShockRule r) noexcept {
  return r == ProxyShockRule::MedianFirm ? "median_firm" : "period_median";
}

std::string_view to_string(CiRate r) noexcept { return r == CiRate::MaxEnt ? "maxent" : "post_ipf"; }

namespace {

using nlohmann::json;

static_assert(std::is_same_v<std::size_t, std::uint64_t>);

class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(ErrorCode::TypeError, where() + " must be an object");
  }

  const json* find(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void get(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (v->is_number_unsigned()) {
        out = v->get<std::uint64_t>();
      } else if (v->is_number_integer()) {
        fail(ErrorCode::RangeError, name(key) + " must be non-negative");
      } else {
        fail(ErrorCode::TypeError, name(key) + " must be an integer");
      }
    }
  }
  void get(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(ErrorCode::TypeError, name(key) + " must be a number");
      out = v->get<double>();
    }
  }
  void get(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(ErrorCode::TypeError, name(key) + " must be a boolean");
      out = v->get<bool>();
    }
  }
  void get(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(ErrorCode::TypeError, name(key) + " must be a string");
      out = v->get<std::string>();
    }
  }
  void get(const char* key, std::pair<double, double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
        fail(ErrorCode::TypeError, name(key) + " must be a two-number array");
      }
      out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
    }
  }
  void get(const char* key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(ErrorCode::TypeError, name(key) + " must be an array of numbers");
      out.clear();
      for (const json& x : *v) {
        if (!x.is_number()) fail(ErrorCode::TypeError, name(key) + " must be an array of numbers");
        out.push_back(x.get<double>());
      }
    }
  }

  Section sub(const char* key) {
    static const json kEmpty = json::object();
    const json* v = find(key);
    return Section(v ? *v : kEmpty, name(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail(ErrorCode::UnknownKey, "unknown key " + name(key.c_str()));
    }
  }

  std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::RangeError, what);
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  Section root(j, "");
  root.get("seed", cfg.seed);
  root.get("replicates", cfg.replicates);
  root.get("jobs", cfg.jobs);
  std::string out = cfg.out.string();
  root.get("out", out);
  cfg.out = out;
  require(cfg.replicates >= 1, "replicates must be at least 1");

  Section eco = root.sub("economy");
  SynthConfig& s = cfg.economy;
  eco.get("n_firms", s.n_firms);
  eco.get("n_sectors", s.n_sectors);
  eco.get("mean_degree", s.target_mean_degree);
  eco.get("weight_tail", s.weight_tail_exponent);
  eco.get("degree_tail", s.degree_tail_exponent);
  eco.get("size_tail", s.size_tail_exponent);
  eco.get("value_added_ratio", s.value_added_ratio_range);
  eco.get("final_demand_ratio", s.final_demand_ratio_range);
  eco.get("min_weight", s.min_weight);
  eco.get("fitness_noise", s.fitness_noise);
  eco.finish();
  s.seed = cfg.seed;
  try {
    validate(s);
  } catch (const Error& e) {
    fail(ErrorCode::RangeError, std::string("economy: ") + e.what());
  }

  Section trim = root.sub("trim");
  trim.get("n_keep", cfg.n_keep);
  trim.get("match_degree", cfg.match_degree);
  trim.get("fractions", cfg.fractions);
  trim.get("include_match", cfg.include_match);
  trim.finish();
  require(cfg.n_keep >= 1 && cfg.n_keep < s.n_firms, "trim.n_keep must be in [1, n_firms)");
  require(cfg.match_degree > 0.0, "trim.match_degree must be positive");
  for (double f : cfg.fractions) require(f >= 0.0 && f < 1.0, "trim.fractions must lie in [0, 1)");
  std::sort(cfg.fractions.begin(), cfg.fractions.end());
  cfg.fractions.erase(std::unique(cfg.fractions.begin(), cfg.fractions.end()), cfg.fractions.end());
  require(!cfg.fractions.empty() || cfg.include_match, "the sweep has no points");

  Section rec = root.sub("recon");
  rec.get("tol", cfg.crem.ipf.tol);
  rec.get("max_iter", cfg.crem.ipf.max_iter);
  rec.get("q_lower", cfg.crem.q_lower);
  rec.get("q_upper", cfg.crem.q_upper);
  std::string rate(to_string(cfg.crem.ci_rate));
  rec.get("ci_rate", rate);
  rec.finish();
  require(cfg.crem.ipf.tol > 0.0, "recon.tol must be positive");
  require(cfg.crem.ipf.max_iter >= 1, "recon.max_iter must be at least 1");
  if (rate == "post_ipf") {
    cfg.crem.ci_rate = CiRate::PostIpf;
  } else if (rate == "maxent") {
    cfg.crem.ci_rate = CiRate::MaxEnt;
  } else {
    fail(ErrorCode::RangeError, "recon.ci_rate must be post_ipf or maxent");
  }
  try {
    weight_confidence_interval(1.0, cfg.crem.q_lower, cfg.crem.q_upper);
  } catch (const Error& e) {
    fail(ErrorCode::RangeError, std::string("recon: ") + e.what());
  }

  Section mult = root.sub("multipliers");
  mult.get("alpha", cfg.alpha);
  mult.finish();
  require(cfg.alpha > 0.0 && cfg.alpha <= 1.0, "multipliers.alpha must be in (0, 1]");

  Section shocks = root.sub("shocks");
  shocks.get("sigma", cfg.sigma);
  shocks.get("periods", cfg.periods);
  std::string rule(to_string(cfg.proxy_rule));
  shocks.get("proxy_rule", rule);
  shocks.finish();
  require(cfg.sigma > 0.0, "shocks.sigma must be positive");
  require(cfg.periods >= 2, "shocks.periods must be at least 2");
  if (rule == "median_firm") {
    cfg.proxy_rule = ProxyShockRule::MedianFirm;
  } else if (rule == "period_median") {
    cfg.proxy_rule = ProxyShockRule::PeriodMedian;
  } else {
    fail(ErrorCode::RangeError, "shocks.proxy_rule must be median_firm or period_median");
  }

  Section pl = root.sub("powerlaw");
  pl.get("min_tail", cfg.powerlaw.min_tail);
  pl.get("max_candidates", cfg.powerlaw.max_candidates);
  pl.get("max_quantile", cfg.powerlaw.max_quantile);
  pl.finish();
  require(cfg.powerlaw.min_tail >= 1, "powerlaw.min_tail must be at least 1");
  require(cfg.powerlaw.max_candidates >= 1, "powerlaw.max_candidates must be at least 1");
  require(cfg.powerlaw.max_quantile > 0.0 && cfg.powerlaw.max_quantile <= 1.0,
          "powerlaw.max_quantile must be in (0, 1]");

  root.finish();
  return cfg;
}

RunConfig parse_config_text(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return parse_config(json::object());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  return parse_config(j);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InputUnreadable, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

nlohmann::json to_json(const RunConfig& cfg) {
  const SynthConfig& s = cfg.economy;
  return {
      {"seed", cfg.seed},
      {"replicates", cfg.replicates},
      {"economy",
       {{"n_firms", s.n_firms},
        {"n_sectors", s.n_sectors},
        {"mean_degree", s.target_mean_degree},
        {"weight_tail", s.weight_tail_exponent},
        {"degree_tail", s.degree_tail_exponent},
        {"size_tail", s.size_tail_exponent},
        {"value_added_ratio", {s.value_added_ratio_range.first, s.value_added_ratio_range.second}},
        {"final_demand_ratio", {s.final_demand_ratio_range.first, s.final_demand_ratio_range.second}},
        {"min_weight", s.min_weight},
        {"fitness_noise", s.fitness_noise}}},
      {"trim",
       {{"n_keep", cfg.n_keep},
        {"match_degree", cfg.match_degree},
        {"fractions", cfg.fractions},
        {"include_match", cfg.include_match}}},
      {"recon",
       {{"tol", cfg.crem.ipf.tol},
        {"max_iter", cfg.crem.ipf.max_iter},
        {"q_lower", cfg.crem.q_lower},
        {"q_upper", cfg.crem.q_upper},
        {"ci_rate", to_string(cfg.crem.ci_rate)}}},
      {"multipliers", {{"alpha", cfg.alpha}}},
      {"shocks",
       {{"sigma", cfg.sigma}, {"periods", cfg.periods}, {"proxy_rule", to_string(cfg.proxy_rule)}}},
      {"powerlaw",
       {{"min_tail", cfg.powerlaw.min_tail},
        {"max_candidates", cfg.powerlaw.max_candidates},
        {"max_quantile", cfg.powerlaw.max_quantile}}},
  };
}

std::vector<SweepPoint> sweep_points(const RunConfig& cfg) {
  std::vector<SweepPoint> out;
  for (double f : cfg.fractions) out.push_back({"f" + csv::format(f), f});
  if (cfg.include_match) out.push_back({"match", std::nullopt});
  return out;
}

}  // namespace firmrecon
