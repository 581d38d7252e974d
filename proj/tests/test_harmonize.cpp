#include <doctest.h>

#include <cmath>
#include <vector>

#include "firmrecon/error.hpp"
#include "firmrecon/harmonize.hpp"

using namespace firmrecon;

namespace {

FirmYear record(std::string firm, int year, std::string sector, double revenue, double cogs,
                std::optional<double> labour, double ebit = 1.0, double da = 0.0) {
  return FirmYear{std::move(firm), year, std::move(sector), revenue, cogs, labour, ebit, da};
}

}  // namespace

TEST_CASE("labour share of the cost pool") {
  CHECK(cogs_labour_share(10.0, 90.0) == doctest::Approx(0.1));
  CHECK(cogs_labour_share(0.0, 90.0) == 0.0);
  CHECK(cogs_labour_share(7.0, 7.0) == 0.5);
  CHECK_THROWS_AS(cogs_labour_share(0.0, 0.0), Error);
}

TEST_CASE("method names round-trip") {
  for (const LabourMethod m : kAllLabourMethods) CHECK(parse_labour_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_labour_method("4"), Error);
}

TEST_CASE("all methods agree on a degenerate panel") {
  FinancialsPanel panel;
  for (int y = 2010; y <= 2014; ++y) panel.push_back(record("A", y, "S", 500.0, 80.0, 20.0));
  for (const LabourMethod m : kAllLabourMethods) {
    const LabourShareModel model = fit_labour_share(m, panel);
    for (int y = 2008; y <= 2016; ++y) CHECK(model.share_for("S", y) == doctest::Approx(0.2).epsilon(1e-14));
  }
}

TEST_CASE("ratio of sums over the window") {
  FinancialsPanel panel;
  for (int y = 2010; y <= 2012; ++y) {
    panel.push_back(record("A", y, "S", 500.0, 90.0, 10.0));
    panel.push_back(record("B", y, "S", 500.0, 180.0, 20.0));
  }
  const LabourShareModel m2b = fit_labour_share(LabourMethod::M2b, panel);
  CHECK(m2b.share_for("S", 2012) == doctest::Approx(0.1));
  // Both firms have alpha 0.1, so every method agrees here too.
  for (const LabourMethod m : kAllLabourMethods) {
    CHECK(fit_labour_share(m, panel).share_for("S", 2012) == doctest::Approx(0.1));
  }
}

TEST_CASE("methods differ when firm shares differ") {
  FinancialsPanel panel;
  for (int y = 2010; y <= 2012; ++y) {
    panel.push_back(record("A", y, "S", 500.0, 90.0, 10.0));   // 0.1, pool 100
    panel.push_back(record("B", y, "S", 500.0, 100.0, 300.0)); // 0.75, pool 400
  }
  CHECK(fit_labour_share(LabourMethod::M1, panel).share_for("S", 2012) == doctest::Approx(0.425));
  CHECK(fit_labour_share(LabourMethod::M2a, panel).share_for("S", 2012) == doctest::Approx(0.425));
  CHECK(fit_labour_share(LabourMethod::M2b, panel).share_for("S", 2012) == doctest::Approx(310.0 / 500.0));
}

TEST_CASE("missing sector windows are reported") {
  FinancialsPanel panel{record("A", 2010, "S", 100.0, 50.0, std::nullopt),
                        record("B", 2010, "T", 100.0, 50.0, 5.0)};
  try {
    fit_labour_share(LabourMethod::M2b, panel);
    FAIL("expected EmptySectorWindow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySectorWindow);
  }
  LabourShareModel model;
  model.shares["S"][2012] = 0.2;
  CHECK_THROWS_AS(model.share_for("T", 2012), Error);
}

TEST_CASE("share lookup fills and interpolates") {
  LabourShareModel model;
  model.shares["S"][2011] = 0.2;
  model.shares["S"][2013] = 0.4;
  CHECK(model.share_for("S", 2009) == 0.2);
  CHECK(model.share_for("S", 2012) == doctest::Approx(0.3));
  CHECK(model.share_for("S", 2015) == 0.4);
}

TEST_CASE("cost split conserves the pool") {
  const CostSplit a = split_cogs(100.0, 0.25);
  CHECK(a.labour == 25.0);
  CHECK(a.intermediate == 75.0);
  const CostSplit z = split_cogs(100.0, 0.0);
  CHECK(z.labour == 0.0);
  CHECK(z.intermediate == 100.0);
  for (double g : {1.0, 3.7, 1234.5678, 1e9 + 0.1}) {
    for (double s : {0.0, 0.1, 0.333, 0.77, 1.0}) {
      const CostSplit c = split_cogs(g, s);
      CHECK(c.labour + c.intermediate == g);
    }
  }
  CHECK_THROWS_AS(split_cogs(100.0, 1.2), Error);

  const SyntheticFinancials fin = generate_financials({});
  const LabourShareModel model = fit_labour_share(LabourMethod::M2b, fin.panel);
  const std::vector<SplitRecord> split = split_cogs(fin.panel, model);
  for (std::size_t k = 0; k < split.size(); ++k) {
    if (split[k].imputed) {
      CHECK(split[k].labour_hat + split[k].intermediate_hat == fin.panel[k].cogs);
    } else {
      CHECK(split[k].labour_hat == *fin.panel[k].labour);
      CHECK(split[k].intermediate_hat == fin.panel[k].cogs);
    }
  }
}

TEST_CASE("value added and demand imputation") {
  CHECK(firm_value_added(10.0, 5.0, 2.0) == 17.0);
  CHECK(firm_value_added(0.0, 0.0, 0.0) == 0.0);

  const DemandSplit d = impute_demand_and_gfcf(100.0, 0.2, 0.1);
  CHECK(d.final_demand == doctest::Approx(20.0));
  CHECK(d.gfcf == doctest::Approx(10.0));
  CHECK(d.intermediate_sales == doctest::Approx(70.0));
  CHECK_FALSE(d.gfcf_clamped);

  const DemandSplit none = impute_demand_and_gfcf(100.0, 0.0, 0.0);
  CHECK(none.intermediate_sales == 100.0);

  const DemandSplit neg = impute_demand_and_gfcf(100.0, 0.2, -0.05);
  CHECK(neg.gfcf_clamped);
  CHECK(neg.gfcf == 0.0);
  CHECK(neg.intermediate_sales == doctest::Approx(80.0));
  CHECK_THROWS_AS(impute_demand_and_gfcf(100.0, 0.8, 0.5), Error);
}

TEST_CASE("cleaning leaves consistent firms and repairs a double count") {
  // Intermediate 50, labour 20, EBIT 20, depreciation 5 on sales 100.
  const FinancialsPanel panel{record("ok", 2012, "S", 100.0, 50.0, 20.0, 20.0, 5.0),
                              record("dbl", 2012, "S", 100.0, 70.0, 20.0, 20.0, 5.0),
                              record("bad", 2012, "S", 100.0, 95.0, 20.0, 20.0, 5.0)};
  std::vector<SplitRecord> split;
  for (const FirmYear& r : panel) split.push_back({*r.labour, r.cogs, false});
  const CleanResult c = clean_accounting(panel, split);
  CHECK(c.records[0].flag == RecordFlag::Ok);
  CHECK(c.records[0].intermediate == 50.0);
  CHECK(c.records[1].flag == RecordFlag::Corrected);
  CHECK(c.records[1].intermediate == 50.0);
  CHECK(100.0 - c.records[1].intermediate - c.records[1].value_added >= 0.0);
  CHECK(c.records[2].flag == RecordFlag::Dropped);
  CHECK(c.corrected == std::vector<std::size_t>{1, 2});
  CHECK(c.dropped == std::vector<std::size_t>{2});
  CHECK(c.dropped_fraction() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("cleaning is idempotent") {
  FinancialsConfig cfg;
  cfg.double_count_rate = 0.2;
  cfg.seed = 5;
  const SyntheticFinancials fin = generate_financials(cfg);
  const LabourShareModel model = fit_labour_share(LabourMethod::M2b, fin.panel);
  const std::vector<SplitRecord> split = split_cogs(fin.panel, model);
  const CleanResult first = clean_accounting(fin.panel, split);
  CHECK_FALSE(first.corrected.empty());

  FinancialsPanel again;
  std::vector<SplitRecord> again_split;
  std::vector<const CleanRecord*> kept;
  for (std::size_t k = 0; k < fin.panel.size(); ++k) {
    const CleanRecord& r = first.records[k];
    if (r.flag == RecordFlag::Dropped) continue;
    FirmYear y = fin.panel[k];
    y.cogs = r.intermediate;
    y.labour = r.labour;
    again.push_back(y);
    again_split.push_back({r.labour, r.intermediate, false});
    kept.push_back(&r);
  }
  const CleanResult second = clean_accounting(again, again_split);
  CHECK(second.corrected.empty());
  CHECK(second.dropped.empty());
  for (std::size_t k = 0; k < again.size(); ++k) {
    CHECK(second.records[k].intermediate == kept[k]->intermediate);
    CHECK(second.records[k].labour == kept[k]->labour);
    CHECK(second.records[k].value_added == kept[k]->value_added);
  }
}

TEST_CASE("cleaning finds the constructed double counts") {
  FinancialsConfig cfg;
  cfg.double_count_rate = 0.3;
  cfg.seed = 9;
  const SyntheticFinancials fin = generate_financials(cfg);
  std::vector<SplitRecord> split;
  for (std::size_t k = 0; k < fin.panel.size(); ++k) {
    const FirmYear& r = fin.panel[k];
    split.push_back(r.labour ? SplitRecord{*r.labour, r.cogs, false}
                             : SplitRecord{fin.true_labour[k], r.cogs, true});
  }
  const CleanResult c = clean_accounting(fin.panel, split);
  std::size_t visible = 0, repaired = 0;
  for (std::size_t k = 0; k < fin.panel.size(); ++k) {
    const FirmYear& y = fin.panel[k];
    if (!fin.double_counted[k]) continue;
    if (y.revenue - y.cogs - firm_value_added(*y.labour, y.ebit, y.depamort) >= 0.0) continue;
    ++visible;
    repaired += c.records[k].flag == RecordFlag::Corrected &&
                y.revenue - c.records[k].intermediate - c.records[k].value_added >= 0.0;
  }
  REQUIRE(visible > 0);
  CHECK(repaired == visible);
}

TEST_CASE("ratio of sums wins on held-out labour costs") {
  std::size_t wins = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    FinancialsConfig cfg;
    cfg.seed = seed;
    const SyntheticFinancials fin = generate_financials(cfg);
    const auto rmse = holdout_labour_rmse(fin.panel, 0.3, seed);
    REQUIRE(rmse.size() == 4);
    bool best = true;
    for (const auto& [m, e] : rmse) best &= rmse.at(LabourMethod::M2b) <= e;
    wins += best;
  }
  CHECK(wins == 5);
}

TEST_CASE("financials generator is deterministic") {
  FinancialsConfig cfg;
  cfg.seed = 3;
  const SyntheticFinancials a = generate_financials(cfg);
  const SyntheticFinancials b = generate_financials(cfg);
  REQUIRE(a.panel.size() == b.panel.size());
  CHECK(a.true_labour == b.true_labour);
  for (std::size_t k = 0; k < a.panel.size(); ++k) CHECK(a.panel[k].cogs == b.panel[k].cogs);
}
