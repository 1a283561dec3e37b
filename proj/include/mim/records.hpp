#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mim {

enum class Scenario { Original, MIM };

std::string scenario_name(Scenario scenario);

/// One survey-shaped row: exposure scenario, demographics, media/politics
/// habits, focal composites, and the four response-strategy outcomes
/// (Likert 1-7). Missing values are allowed anywhere but the scenario.
struct RespondentRecord {
  Scenario scenario = Scenario::Original;
  std::optional<double> age;
  std::optional<std::string> gender;  // free-form category, e.g. female/male
  std::optional<double> social_media_use;    // Likert 1-5
  std::optional<double> following_politics;  // Likert 1-5
  std::optional<double> willingness_to_self_censor;
  std::optional<double> attitude_certainty;
  std::optional<double> issue_importance;
  std::optional<double> congruence_friends_family;
  std::optional<double> congruence_nation;
  std::optional<double> comment;           // Likert 1-7
  std::optional<double> read_not_comment;  // Likert 1-7
  std::optional<double> ignore;            // Likert 1-7
  std::optional<double> tell_offline;      // Likert 1-7
};

inline constexpr std::array<std::string_view, 4> kOutcomeNames = {
    "comment", "read_not_comment", "ignore", "tell_offline"};

inline constexpr std::array<std::string_view, 4> kOutcomeLabels = {
    "Comment", "Read, not Comment", "Ignore", "Tell Offline"};

inline constexpr std::array<std::string_view, 9> kPredictorNames = {
    "age",
    "gender",
    "social_media_use",
    "following_politics",
    "willingness_to_self_censor",
    "attitude_certainty",
    "issue_importance",
    "congruence_friends_family",
    "congruence_nation"};

std::optional<double> outcome_value(const RespondentRecord& record,
                                    std::string_view outcome);

/// Predictor value for regressions. gender maps male -> 1, female -> 0 and
/// leaves every other category missing, which drops those rows listwise.
std::optional<double> predictor_value(const RespondentRecord& record,
                                      std::string_view predictor);

/// CSV with the documented header. Missing values round-trip as "NA".
/// Throws ParseError on malformed rows and out-of-range Likert values.
std::vector<RespondentRecord> parse_records_csv(std::string_view text);
std::string serialize_records_csv(const std::vector<RespondentRecord>& records);

}  // namespace mim
