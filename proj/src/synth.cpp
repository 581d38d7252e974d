#include "firmrecon/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "firmrecon/error.hpp"
#include "firmrecon/rng.hpp"

namespace firmrecon {

std::int32_t SectorTable::find(std::string_view name) const {
  for (std::size_t s = 0; s < names.size(); ++s) {
    if (names[s] == name) return static_cast<std::int32_t>(s);
  }
  return kNoSector;
}

void validate(const SynthConfig& cfg) {
  const auto in_unit = [](std::pair<double, double> r) {
    return r.first > 0.0 && r.second < 1.0 && r.first <= r.second;
  };
  if (cfg.n_firms < 2) fail(ErrorCode::InfeasibleConfig, "n_firms must be at least 2");
  if (cfg.n_sectors < 1 || cfg.n_sectors > cfg.n_firms) {
    fail(ErrorCode::InfeasibleConfig, "n_sectors must be in [1, n_firms]");
  }
  if (!(cfg.target_mean_degree > 0.0) ||
      cfg.target_mean_degree > static_cast<double>(cfg.n_firms - 1)) {
    fail(ErrorCode::InfeasibleConfig, "target_mean_degree must be in (0, n_firms - 1]");
  }
  if (!(cfg.weight_tail_exponent > 1.0) || !(cfg.degree_tail_exponent > 1.0) ||
      !(cfg.size_tail_exponent > 1.0)) {
    fail(ErrorCode::InfeasibleConfig, "tail exponents must exceed 1");
  }
  if (!in_unit(cfg.value_added_ratio_range) || !in_unit(cfg.final_demand_ratio_range)) {
    fail(ErrorCode::InfeasibleConfig, "ratio ranges must lie within (0, 1)");
  }
  if (!(cfg.min_weight > 0.0) || !(cfg.fitness_noise >= 0.0)) {
    fail(ErrorCode::InfeasibleConfig, "min_weight must be positive, fitness_noise non-negative");
  }
}

namespace {

// Vose alias table over non-negative weights.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> w) : prob_(w.size()), alias_(w.size()) {
    const std::size_t n = w.size();
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = w[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.back();
      small.pop_back();
      const std::uint32_t l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (std::uint32_t l : large) prob_[l] = 1.0, alias_[l] = l;
    for (std::uint32_t s : small) prob_[s] = 1.0, alias_[s] = s;
  }

  std::uint32_t draw(Rng& rng) const {
    const auto k = static_cast<std::uint32_t>(rng.below(prob_.size()));
    return rng.uniform() < prob_[k] ? k : alias_[k];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

std::vector<std::size_t> draw_out_degrees(const SynthConfig& cfg, Rng& rng,
                                          std::vector<double>& propensity) {
  const std::size_t n = cfg.n_firms;
  const auto cap = static_cast<double>(n - 1);
  propensity.resize(n);
  for (double& x : propensity) x = rng.pareto(1.0, cfg.degree_tail_exponent);

  const auto target = static_cast<std::size_t>(std::llround(cfg.target_mean_degree * n));
  const auto total_at = [&](double c) {
    std::size_t sum = 0;
    for (double x : propensity) sum += static_cast<std::size_t>(std::min(cap, std::floor(c * x)));
    return sum;
  };
  double lo = 0.0, hi = 1.0;
  while (total_at(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (total_at(mid) <= target ? lo : hi) = mid;
  }

  std::vector<std::size_t> k(n);
  std::size_t sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = static_cast<std::size_t>(std::min(cap, std::floor(lo * propensity[i])));
    sum += k[i];
  }
  // Largest-remainder top-up to hit the edge target exactly.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return lo * propensity[a] - static_cast<double>(k[a]) >
           lo * propensity[b] - static_cast<double>(k[b]);
  });
  while (sum < target) {
    for (std::uint32_t i : order) {
      if (sum == target) break;
      if (k[i] < n - 1) ++k[i], ++sum;
    }
  }
  return k;
}

void choose_customers(std::uint32_t i, std::size_t k, std::span<const double> fitness,
                      const AliasTable& alias, Rng& rng, std::vector<std::uint32_t>& stamp,
                      std::vector<Arc>& arcs) {
  const std::size_t n = fitness.size();
  if (k == 0) return;
  if (k == n - 1) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j != i) arcs.push_back({i, j});
    }
    return;
  }
  // Rejection from the with-replacement law gives successive sampling;
  // exponential keys give the same law when rejection gets expensive.
  if (4 * k <= n) {
    const std::size_t start = arcs.size();
    const std::size_t budget = 50 * k + 1000;
    stamp[i] = i + 1;
    std::size_t tries = 0;
    while (arcs.size() - start < k && tries++ < budget) {
      const std::uint32_t j = alias.draw(rng);
      if (stamp[j] == i + 1) continue;
      stamp[j] = i + 1;
      arcs.push_back({i, j});
    }
    if (arcs.size() - start == k) return;
    arcs.resize(start);
  }
  std::vector<std::pair<double, std::uint32_t>> keys;
  keys.reserve(n - 1);
  for (std::uint32_t j = 0; j < n; ++j) {
    if (j != i) keys.emplace_back(rng.exponential() / fitness[j], j);
  }
  std::nth_element(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(k), keys.end());
  for (std::size_t r = 0; r < k; ++r) arcs.push_back({i, keys[r].second});
}

// Scales every draw by a supplier and a customer factor so that expected
// strengths follow size: the supplier factor is size per customer, the
// customer factor is size over the summed factors of its suppliers. The
// factors use degrees rather than realised sums, which keeps the draws' tail.
// Preserves the total weight.
void scale_to_size(const Topology& t, std::span<const double> size, std::vector<double>& weights) {
  const std::size_t n = t.n_nodes();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> g(n, 0.0), h(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t k = t.row_end(i) - t.row_begin(i);
    if (k > 0) g[i] = size[i] / static_cast<double>(k);
  }
  for (NodeId j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t c = t.col_begin(j); c < t.col_end(j); ++c) sum += g[t.src(t.col_edge(c))];
    if (sum > 0.0) h[j] = size[j] / sum;
  }
  double scaled = 0.0;
  for (EdgeIndex e = 0; e < weights.size(); ++e) {
    weights[e] *= g[t.src(e)] * h[t.dst(e)];
    scaled += weights[e];
  }
  for (double& w : weights) w *= total / scaled;
}

}  // namespace

Economy generate_ground_truth(const SynthConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.n_firms;

  Rng degree_rng(derive_seed(cfg.seed, stream::kDegrees));
  std::vector<double> propensity;
  const std::vector<std::size_t> k_out = draw_out_degrees(cfg, degree_rng, propensity);

  // Intended size: a power of the degree propensity with tail index
  // size_tail_exponent, times lognormal noise. Customers are drawn by the
  // square root of size, so the in-degree tail is lighter than the
  // out-degree tail.
  Rng fitness_rng(derive_seed(cfg.seed, stream::kFitness));
  const double lambda = cfg.degree_tail_exponent / cfg.size_tail_exponent;
  std::vector<double> size(n), fitness(n);
  for (std::size_t i = 0; i < n; ++i) {
    size[i] = std::pow(propensity[i], lambda) * fitness_rng.lognormal(0.0, cfg.fitness_noise);
    fitness[i] = std::sqrt(size[i]);
  }

  Rng attach_rng(derive_seed(cfg.seed, stream::kAttach));
  const AliasTable alias(fitness);
  std::vector<std::uint32_t> stamp(n, 0);
  std::vector<Arc> arcs;
  arcs.reserve(std::accumulate(k_out.begin(), k_out.end(), std::size_t{0}));
  for (std::uint32_t i = 0; i < n; ++i) {
    choose_customers(i, k_out[i], fitness, alias, attach_rng, stamp, arcs);
  }
  Topology topology = Topology::build(n, arcs);
  arcs = {};

  Rng weight_rng(derive_seed(cfg.seed, stream::kWeights));
  std::vector<double> weights(topology.n_edges());
  for (double& w : weights) w = weight_rng.pareto(cfg.min_weight, cfg.weight_tail_exponent);
  scale_to_size(topology, size, weights);
  WeightedNetwork net(std::move(topology), std::move(weights));

  // Balanced round-robin labels, shuffled.
  Rng sector_rng(derive_seed(cfg.seed, stream::kSectors));
  std::vector<std::int32_t> sector(n);
  for (std::size_t i = 0; i < n; ++i) sector[i] = static_cast<std::int32_t>(i % cfg.n_sectors);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(sector[i], sector[sector_rng.below(i + 1)]);
  }
  std::vector<std::string> names(cfg.n_sectors);
  for (std::size_t s = 0; s < cfg.n_sectors; ++s) {
    names[s] = "S" + std::string(s < 10 ? "0" : "") + std::to_string(s);
  }

  Rng ratio_rng(derive_seed(cfg.seed, stream::kRatios));
  std::vector<double> va_share(cfg.n_sectors), fd_share(cfg.n_sectors);
  for (std::size_t s = 0; s < cfg.n_sectors; ++s) {
    const auto [va_lo, va_hi] = cfg.value_added_ratio_range;
    const auto [fd_lo, fd_hi] = cfg.final_demand_ratio_range;
    va_share[s] = va_lo + (va_hi - va_lo) * ratio_rng.uniform();
    fd_share[s] = fd_lo + (fd_hi - fd_lo) * ratio_rng.uniform();
  }

  // Close each firm's accounts from its realised strengths: gross output is
  // the smallest value meeting both sector shares, the slack side absorbs
  // the difference.
  Strengths s = strengths(net);
  std::vector<double> y(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto sec = static_cast<std::size_t>(sector[i]);
    const double q = std::max({s.s_in[i] / (1.0 - va_share[sec]),
                               s.s_out[i] / (1.0 - fd_share[sec]), cfg.min_weight});
    y[i] = q - s.s_in[i];
    f[i] = q - s.s_out[i];
  }
  NodeAccounts acc{std::move(s.s_in), std::move(s.s_out), std::move(y), std::move(f)};
  return Economy{std::move(net), std::move(acc), std::move(sector), std::move(names)};
}

SectorTable derive_sector_table(const WeightedNetwork& net, const NodeAccounts& acc,
                                std::span<const std::int32_t> labels,
                                std::vector<std::string> names) {
  const std::size_t n = net.n_nodes();
  if (acc.size() != n || labels.size() != n) {
    fail(ErrorCode::SizeMismatch, "labels/accounts do not match network size");
  }
  SectorTable table{std::move(names), {}};
  table.rows.resize(table.names.size());
  for (NodeId i = 0; i < n; ++i) {
    const std::int32_t s = labels[i];
    if (s == kNoSector) {
      if (net.topology().is_proxy(i)) continue;
      fail(ErrorCode::UnlabeledNode, "node " + std::to_string(i) + " has no sector");
    }
    if (s < 0 || static_cast<std::size_t>(s) >= table.rows.size()) {
      fail(ErrorCode::IndexOutOfRange, "node " + std::to_string(i) + " has unknown sector");
    }
    SectorRow& row = table.rows[static_cast<std::size_t>(s)];
    row.q += acc.total_sales(i);
    row.x += acc.s_in[i];
    row.d += acc.s_out[i];
    row.y += acc.value_added[i];
    row.f += acc.final_demand[i];
  }
  return table;
}

}  // namespace firmrecon
