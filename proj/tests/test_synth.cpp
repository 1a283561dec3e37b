#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mim/error.hpp"
#include "mim/records.hpp"
#include "mim/synth.hpp"

using namespace mim;

TEST_CASE("n must be positive; a single record stays in range") {
  const auto params = default_synthetic_params();
  CHECK_THROWS_AS(generate_synthetic(params, 0, 1), Error);

  const auto records = generate_synthetic(params, 1, 1);
  REQUIRE(records.size() == 1);
  const auto& r = records[0];
  CHECK(*r.age >= 18);
  CHECK(*r.age <= 34);
  CHECK(*r.social_media_use >= 1);
  CHECK(*r.social_media_use <= 5);
  CHECK(*r.following_politics >= 1);
  CHECK(*r.following_politics <= 5);
  for (std::string_view outcome : kOutcomeNames) {
    const auto value = outcome_value(r, outcome);
    REQUIRE(value.has_value());
    CHECK(*value >= 1.0);
    CHECK(*value <= 7.0);
  }
}

TEST_CASE("same params, n, and seed give identical record lists") {
  const auto params = default_synthetic_params();
  const auto a = generate_synthetic(params, 500, 20260401);
  const auto b = generate_synthetic(params, 500, 20260401);
  CHECK(serialize_records_csv(a) == serialize_records_csv(b));
  const auto c = generate_synthetic(params, 500, 20260402);
  CHECK(serialize_records_csv(a) != serialize_records_csv(c));
}

TEST_CASE("likert and gender draws track their specs") {
  auto params = default_synthetic_params();
  params.mim_fraction = 0.5;
  const auto records = generate_synthetic(params, 20000, 99);
  double male = 0, mim = 0, politics_sum = 0;
  for (const auto& r : records) {
    male += (*r.gender == "male") ? 1 : 0;
    mim += r.scenario == Scenario::MIM ? 1 : 0;
    politics_sum += *r.following_politics;
  }
  const double n = static_cast<double>(records.size());
  CHECK(male / n == doctest::Approx(params.male_probability).epsilon(0.05));
  CHECK(mim / n == doctest::Approx(0.5).epsilon(0.05));
  const auto moments = params.predictor_moments();
  CHECK(politics_sum / n ==
        doctest::Approx(moments.at("following_politics").mean).epsilon(0.02));
}

TEST_CASE("empirical predictor moments match the analytic ones") {
  const auto params = default_synthetic_params();
  const auto records = generate_synthetic(params, 50000, 31337);
  const auto moments = params.predictor_moments();
  for (std::string_view name :
       {"age", "social_media_use", "following_politics",
        "willingness_to_self_censor", "congruence_nation"}) {
    double sum = 0, ss = 0, n = 0;
    for (const auto& r : records) {
      const auto v = predictor_value(r, name);
      sum += *v;
      ss += *v * *v;
      n += 1;
    }
    const double mean = sum / n;
    const double var = ss / n - mean * mean;
    const auto& m = moments.at(std::string(name));
    CHECK(mean == doctest::Approx(m.mean).epsilon(0.02));
    CHECK(var == doctest::Approx(m.variance).epsilon(0.06));
  }
}

TEST_CASE("outcome means land on the analytic expectation") {
  auto params = default_synthetic_params();
  params.mim_fraction = 1.0;
  const auto records = generate_synthetic(params, 30000, 555);
  double sum = 0;
  for (const auto& r : records) sum += *r.comment;
  CHECK(sum / static_cast<double>(records.size()) ==
        doctest::Approx(params.analytic_outcome_mean("comment", Scenario::MIM))
            .epsilon(0.01));
}

TEST_CASE("records CSV round trips") {
  const auto params = default_synthetic_params();
  const auto records = generate_synthetic(params, 50, 8);
  const std::string csv = serialize_records_csv(records);
  const auto reparsed = parse_records_csv(csv);
  CHECK(serialize_records_csv(reparsed) == csv);
  REQUIRE(reparsed.size() == records.size());
  CHECK(reparsed[0].scenario == records[0].scenario);
}

TEST_CASE("records CSV validation") {
  CHECK_THROWS_AS(parse_records_csv(""), Error);
  CHECK_THROWS_AS(parse_records_csv("bad,header\n1,2\n"), Error);
  const std::string header =
      "scenario,age,gender,social_media_use,following_politics,"
      "willingness_to_self_censor,attitude_certainty,issue_importance,"
      "congruence_friends_family,congruence_nation,comment,read_not_comment,"
      "ignore,tell_offline\n";
  // Out-of-range Likert.
  CHECK_THROWS_AS(
      parse_records_csv(header +
                        "Original,25,female,9,3,3,4,3,50,50,4,4,4,4\n"),
      Error);
  // Bad scenario.
  CHECK_THROWS_AS(
      parse_records_csv(header +
                        "Treatment,25,female,4,3,3,4,3,50,50,4,4,4,4\n"),
      Error);
  // Missing values are fine.
  const auto records = parse_records_csv(
      header + "MIM,NA,NA,4,3,3,4,3,50,50,4,NA,4,4\n");
  REQUIRE(records.size() == 1);
  CHECK_FALSE(records[0].age.has_value());
  CHECK_FALSE(records[0].read_not_comment.has_value());
  CHECK(records[0].scenario == Scenario::MIM);
}

TEST_CASE("params JSON round trips") {
  const auto params = default_synthetic_params();
  const std::string json_text = params_to_json(params);
  const auto reparsed = params_from_json(json_text);
  CHECK(params_to_json(reparsed) == json_text);
  CHECK(reparsed.outcomes.at("comment").at(Scenario::MIM).slopes.at(
            "willingness_to_self_censor") == doctest::Approx(-0.831));
  CHECK_THROWS_AS(params_from_json("{nope"), Error);
}

TEST_CASE("default params keep outcomes away from the clamp bounds") {
  for (std::string_view outcome : kOutcomeNames) {
    for (Scenario scenario : {Scenario::Original, Scenario::MIM}) {
      const auto params = default_synthetic_params();
      const double mean = params.analytic_outcome_mean(outcome, scenario);
      CHECK(mean > 3.0);
      CHECK(mean < 5.0);
    }
  }
}

TEST_CASE("gaussian stream has the right first moments") {
  SeededRng rng(123);
  double sum = 0, ss = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    ss += g * g;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.01));
  CHECK(ss / n == doctest::Approx(1.0).epsilon(0.01));
}
