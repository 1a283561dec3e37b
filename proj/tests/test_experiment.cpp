#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mim/error.hpp"
#include "mim/experiment.hpp"
#include "mim/synth.hpp"

using namespace mim;

namespace {

// Samples both scenarios from one shared coefficient set and intercept,
// so the groups are identically distributed.
SyntheticParams identical_groups_params() {
  SyntheticParams params = default_synthetic_params();
  for (auto& [outcome, per_scenario] : params.outcomes)
    per_scenario[Scenario::MIM] = per_scenario[Scenario::Original];
  return params;
}

}  // namespace

TEST_CASE("identically drawn scenarios produce no starred rank tests") {
  const auto records = generate_synthetic(identical_groups_params(), 400, 11);
  const auto report = analyze_experiment(records);
  REQUIRE(report.strategies.size() == 4);
  for (const auto& strategy : report.strategies) {
    CHECK(strategy.mann_whitney.p >= 0.05);
    CHECK(significance_stars(strategy.mann_whitney.p).empty());
  }
}

TEST_CASE("a positive comment offset stars the Comment row, MIM above") {
  // Defaults encode a higher comment mean under MIM.
  const auto records =
      generate_synthetic(default_synthetic_params(), 2000, 17);
  const auto report = analyze_experiment(records);
  const auto& comment = report.strategies[0];
  REQUIRE(comment.outcome == "comment");
  CHECK(comment.mann_whitney.p < 0.05);
  CHECK_FALSE(significance_stars(comment.mann_whitney.p).empty());
  // group_a is the MIM group.
  CHECK(comment.mann_whitney.group_a.mean > comment.mann_whitney.group_b.mean);
  CHECK(comment.mann_whitney.z > 0.0);
}

TEST_CASE("table cell renders the documented literal") {
  CHECK(format_u_z_p(10501, 2.155, 0.031) == "10501 / 2.155 / .031*");
  CHECK(format_u_z_p(11892, 0.259, 0.796) == "11892 / .259 / .796");
  CHECK(format_u_z_p(10914, 2.072, 0.038) == "10914 / 2.072 / .038*");
  CHECK(format_u_z_p(4.5, 0.0, 1.0) == "4.5 / .000 / 1.000");
}

TEST_CASE("stat formatting strips leading zeros, SPSS style") {
  CHECK(format_stat(0.031) == ".031");
  CHECK(format_stat(-0.228) == "-.228");
  CHECK(format_stat(2.155) == "2.155");
  CHECK(format_stat(-1.5) == "-1.500");
  CHECK(format_u(10501) == "10501");
  CHECK(format_u(4.5) == "4.5");
}

TEST_CASE("significance stars use the tables' legend") {
  CHECK(significance_stars(0.009) == "**");
  CHECK(significance_stars(0.031) == "*");
  CHECK(significance_stars(0.05) == "");
  CHECK(significance_stars(0.8) == "");
}

TEST_CASE("analyze requires both scenarios") {
  auto params = default_synthetic_params();
  params.mim_fraction = 1.0;
  const auto records = generate_synthetic(params, 50, 3);
  try {
    analyze_experiment(records);
    FAIL("expected EmptyGroup");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyGroup);
  }
}

TEST_CASE("report carries regressions for both scenarios per strategy") {
  const auto records =
      generate_synthetic(default_synthetic_params(), 600, 23);
  const auto report = analyze_experiment(records);
  for (const auto& strategy : report.strategies) {
    REQUIRE(strategy.regressions.count(Scenario::Original) == 1);
    REQUIRE(strategy.regressions.count(Scenario::MIM) == 1);
    const auto& regression = strategy.regressions.at(Scenario::MIM);
    CHECK(regression.blocks.size() == 3);
    CHECK(regression.predictors.size() == 9);
    CHECK(regression.total_r2 >= 0.0);
  }
}

TEST_CASE("too-small groups surface as regression errors, not crashes") {
  auto params = default_synthetic_params();
  params.mim_fraction = 0.5;
  const auto records = generate_synthetic(params, 14, 5);
  const auto report = analyze_experiment(records);
  for (const auto& strategy : report.strategies)
    CHECK((strategy.regression_errors.size() +
           strategy.regressions.size()) == 2);
}

TEST_CASE("text report contains the table structure") {
  const auto records =
      generate_synthetic(default_synthetic_params(), 600, 29);
  const auto report = analyze_experiment(records);
  const std::string text = format_experiment_report(report);
  CHECK(text.find("U / Z / p") != std::string::npos);
  CHECK(text.find("Comment") != std::string::npos);
  CHECK(text.find("Tell Offline") != std::string::npos);
  CHECK(text.find("Demographics") != std::string::npos);
  CHECK(text.find("Social Media and Politics") != std::string::npos);
  CHECK(text.find("Focal Variables") != std::string::npos);
  CHECK(text.find("Willingness to self-censor") != std::string::npos);
  CHECK(text.find("Incr. R2 (%)") != std::string::npos);
  CHECK(text.find("Total R2 (%)") != std::string::npos);
  CHECK(text.find("* p < .05, ** p < .01") != std::string::npos);

  const std::string json_text = experiment_report_to_json(report);
  CHECK(json_text.find("\"mann_whitney\"") != std::string::npos);
  CHECK(json_text.find("\"delta_r2\"") != std::string::npos);
}
