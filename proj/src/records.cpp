#include "mim/records.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "mim/error.hpp"
#include "mim/lexicon.hpp"

namespace mim {

namespace {

constexpr std::string_view kHeader =
    "scenario,age,gender,social_media_use,following_politics,"
    "willingness_to_self_censor,attitude_certainty,issue_importance,"
    "congruence_friends_family,congruence_nation,comment,read_not_comment,"
    "ignore,tell_offline";

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(
        start,
        comma == std::string_view::npos ? std::string_view::npos
                                        : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(const std::string& field, int line_no,
                                   const char* column) {
  if (field.empty() || field == "NA") return std::nullopt;
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || !std::isfinite(value))
    raise(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                     ", column " + column + ": bad number \"" +
                                     field + "\"");
  return value;
}

void check_range(const std::optional<double>& value, double lo, double hi,
                 int line_no, const char* column) {
  if (value && (*value < lo || *value > hi))
    raise(ErrorCode::ParseError,
          "line " + std::to_string(line_no) + ", column " + column +
              ": value " + std::to_string(*value) + " outside [" +
              std::to_string(lo) + "," + std::to_string(hi) + "]");
}

std::string format_number(double value) {
  if (value == std::floor(value) && std::fabs(value) < 1e15) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.0f", value);
    return buffer;
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

std::string field_or_na(const std::optional<double>& value) {
  return value ? format_number(*value) : "NA";
}

}  // namespace

std::string scenario_name(Scenario scenario) {
  return scenario == Scenario::Original ? "Original" : "MIM";
}

std::optional<double> outcome_value(const RespondentRecord& record,
                                    std::string_view outcome) {
  if (outcome == "comment") return record.comment;
  if (outcome == "read_not_comment") return record.read_not_comment;
  if (outcome == "ignore") return record.ignore;
  if (outcome == "tell_offline") return record.tell_offline;
  raise(ErrorCode::InvalidArgument, "unknown outcome: " + std::string(outcome));
}

std::optional<double> predictor_value(const RespondentRecord& record,
                                      std::string_view predictor) {
  if (predictor == "age") return record.age;
  if (predictor == "gender") {
    if (!record.gender) return std::nullopt;
    if (ascii_iequals(*record.gender, "male")) return 1.0;
    if (ascii_iequals(*record.gender, "female")) return 0.0;
    return std::nullopt;  // other categories drop out listwise
  }
  if (predictor == "social_media_use") return record.social_media_use;
  if (predictor == "following_politics") return record.following_politics;
  if (predictor == "willingness_to_self_censor")
    return record.willingness_to_self_censor;
  if (predictor == "attitude_certainty") return record.attitude_certainty;
  if (predictor == "issue_importance") return record.issue_importance;
  if (predictor == "congruence_friends_family")
    return record.congruence_friends_family;
  if (predictor == "congruence_nation") return record.congruence_nation;
  raise(ErrorCode::InvalidArgument,
        "unknown predictor: " + std::string(predictor));
}

std::vector<RespondentRecord> parse_records_csv(std::string_view text) {
  std::vector<RespondentRecord> records;
  std::size_t pos = 0;
  int line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kHeader)
        raise(ErrorCode::ParseError,
              "unexpected CSV header; expected: " + std::string(kHeader));
      saw_header = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 14)
      raise(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                       ": expected 14 fields, got " +
                                       std::to_string(fields.size()));
    RespondentRecord record;
    if (ascii_iequals(fields[0], "original"))
      record.scenario = Scenario::Original;
    else if (ascii_iequals(fields[0], "mim"))
      record.scenario = Scenario::MIM;
    else
      raise(ErrorCode::ParseError,
            "line " + std::to_string(line_no) + ": bad scenario \"" +
                fields[0] + "\"");
    record.age = parse_number(fields[1], line_no, "age");
    if (!fields[2].empty() && fields[2] != "NA") record.gender = fields[2];
    record.social_media_use =
        parse_number(fields[3], line_no, "social_media_use");
    record.following_politics =
        parse_number(fields[4], line_no, "following_politics");
    record.willingness_to_self_censor =
        parse_number(fields[5], line_no, "willingness_to_self_censor");
    record.attitude_certainty =
        parse_number(fields[6], line_no, "attitude_certainty");
    record.issue_importance =
        parse_number(fields[7], line_no, "issue_importance");
    record.congruence_friends_family =
        parse_number(fields[8], line_no, "congruence_friends_family");
    record.congruence_nation =
        parse_number(fields[9], line_no, "congruence_nation");
    record.comment = parse_number(fields[10], line_no, "comment");
    record.read_not_comment =
        parse_number(fields[11], line_no, "read_not_comment");
    record.ignore = parse_number(fields[12], line_no, "ignore");
    record.tell_offline = parse_number(fields[13], line_no, "tell_offline");

    check_range(record.social_media_use, 1, 5, line_no, "social_media_use");
    check_range(record.following_politics, 1, 5, line_no,
                "following_politics");
    check_range(record.comment, 1, 7, line_no, "comment");
    check_range(record.read_not_comment, 1, 7, line_no, "read_not_comment");
    check_range(record.ignore, 1, 7, line_no, "ignore");
    check_range(record.tell_offline, 1, 7, line_no, "tell_offline");
    records.push_back(std::move(record));
  }
  if (!saw_header)
    raise(ErrorCode::ParseError, "empty records file (no header)");
  return records;
}

std::string serialize_records_csv(
    const std::vector<RespondentRecord>& records) {
  std::string out(kHeader);
  out.push_back('\n');
  for (const RespondentRecord& record : records) {
    out += scenario_name(record.scenario);
    out += "," + field_or_na(record.age);
    out += ",";
    out += record.gender ? *record.gender : "NA";
    out += "," + field_or_na(record.social_media_use);
    out += "," + field_or_na(record.following_politics);
    out += "," + field_or_na(record.willingness_to_self_censor);
    out += "," + field_or_na(record.attitude_certainty);
    out += "," + field_or_na(record.issue_importance);
    out += "," + field_or_na(record.congruence_friends_family);
    out += "," + field_or_na(record.congruence_nation);
    out += "," + field_or_na(record.comment);
    out += "," + field_or_na(record.read_not_comment);
    out += "," + field_or_na(record.ignore);
    out += "," + field_or_na(record.tell_offline);
    out.push_back('\n');
  }
  return out;
}

}  // namespace mim
