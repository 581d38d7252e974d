#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "firmrecon/config.hpp"
#include "firmrecon/io.hpp"
#include "firmrecon/pipeline.hpp"

using namespace firmrecon;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> slurp_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    out[fs::relative(entry.path(), root).string()] = text.str();
  }
  return out;
}

RunConfig small_config(const fs::path& out) {
  RunConfig cfg = parse_config_text(R"({
    "seed": 11, "replicates": 3,
    "economy": {"n_firms": 200, "mean_degree": 8},
    "trim": {"n_keep": 60, "fractions": [0.0, 0.5]}
  })");
  cfg.out = out;
  return cfg;
}

}  // namespace

TEST_CASE("small run writes reports and reruns byte-identically") {
  const fs::path root = fs::temp_directory_path() / "firmrecon_pipeline_test";
  fs::remove_all(root);
  std::ostringstream log;

  const RunConfig a = small_config(root / "a");
  const RunOutcome ra = run_pipeline(a, log);
  CHECK(ra.exit_code == 0);
  CHECK(ra.completed == 9);
  for (const char* p : {"sweep_f0", "sweep_f0.5", "sweep_match"}) {
    for (int r = 0; r < 3; ++r) {
      const fs::path report = root / "a" / p / ("replicate_" + std::to_string(r)) / "report.json";
      REQUIRE(fs::exists(report));
      CHECK(validate_report(io::read_json(report)).empty());
    }
    CHECK(fs::exists(root / "a" / p / "report_summary.json"));
  }
  const nlohmann::json summary = io::read_json(root / "a" / "summary.json");
  CHECK(summary["points"].size() == 3);
  CHECK(summary["checks_at"] == "match");
  CHECK(summary["checks"].size() == 4);

  const RunOutcome rb = run_pipeline(small_config(root / "b"), log);
  CHECK(rb.exit_code == 0);
  CHECK(slurp_tree(root / "a") == slurp_tree(root / "b"));

  // Summaries rebuilt from the reports alone match as well.
  fs::remove(root / "b" / "summary.json");
  CHECK(summarize_run(root / "b", small_config(root / "b"), log).exit_code == 0);
  CHECK(slurp_tree(root / "a") == slurp_tree(root / "b"));
  fs::remove_all(root);
}

TEST_CASE("summaries average numeric leaves") {
  const std::vector<nlohmann::json> reports{{{"a", 1.0}, {"b", {{"c", 2.0}}}},
                                            {{"a", 3.0}, {"b", {{"c", 2.0}}}}};
  const nlohmann::json s = summarize(reports);
  CHECK(s["mean"]["/a"].get<double>() == doctest::Approx(2.0));
  CHECK(s["std"]["/a"].get<double>() == doctest::Approx(std::sqrt(2.0)));
  CHECK(s["mean"]["/b/c"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("report validation flags problems") {
  CHECK_FALSE(validate_report(nlohmann::json::object()).empty());
}
