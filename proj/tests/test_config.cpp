#include <doctest.h>

#include "firmrecon/config.hpp"
#include "firmrecon/error.hpp"

using namespace firmrecon;

namespace {

ErrorCode code_of(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error for " << text);
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("empty input gives the defaults") {
  const RunConfig a = parse_config_text("");
  const RunConfig b = parse_config_text("{}");
  const RunConfig d;
  CHECK(to_json(a) == to_json(d));
  CHECK(to_json(b) == to_json(d));
  CHECK(a.replicates == 50);
  CHECK(a.match_degree == 2.9);
  CHECK(a.crem.q_lower == 0.25);
}

TEST_CASE("out-of-range and malformed values are rejected") {
  CHECK(code_of(R"({"trim": {"fractions": [0.2, 1.5]}})") == ErrorCode::RangeError);
  CHECK(code_of(R"({"multipliers": {"alpha": 0}})") == ErrorCode::RangeError);
  CHECK(code_of(R"({"replicates": -1})") == ErrorCode::RangeError);
  CHECK(code_of(R"({"economy": {"mean_degree": 5000}})") == ErrorCode::RangeError);
  CHECK(code_of(R"({"shocks": {"proxy_rule": "mean"}})") == ErrorCode::RangeError);
  CHECK(code_of(R"({"economy": {"n_firm": 10}})") == ErrorCode::UnknownKey);
  CHECK(code_of(R"({"extra": 1})") == ErrorCode::UnknownKey);
  CHECK(code_of(R"({"seed": "seven"})") == ErrorCode::TypeError);
  CHECK(code_of(R"({"trim": 3})") == ErrorCode::TypeError);
  CHECK(code_of(R"({"seed": )") == ErrorCode::ParseError);
}

TEST_CASE("sweep fractions are sorted and deduplicated") {
  const RunConfig c = parse_config_text(R"({"trim": {"fractions": [0.5, 0.1, 0.3, 0.1]}})");
  CHECK(c.fractions == std::vector<double>{0.1, 0.3, 0.5});
  const std::vector<SweepPoint> p = sweep_points(c);
  REQUIRE(p.size() == 4);
  CHECK(p[0].label == "f0.1");
  CHECK(p.back().label == "match");
  CHECK_FALSE(p.back().fraction.has_value());
}

TEST_CASE("configuration round-trips through json") {
  const RunConfig c = parse_config_text(
      R"({"seed": 9, "economy": {"n_firms": 500, "size_tail": 2.0}, "recon": {"ci_rate": "maxent"},
          "shocks": {"proxy_rule": "period_median"}})");
  CHECK(c.seed == 9);
  CHECK(c.economy.seed == 9);
  CHECK(c.economy.size_tail_exponent == 2.0);
  CHECK(c.crem.ci_rate == CiRate::MaxEnt);
  CHECK(c.proxy_rule == ProxyShockRule::PeriodMedian);
  const RunConfig again = parse_config(to_json(c));
  CHECK(to_json(again) == to_json(c));
}
