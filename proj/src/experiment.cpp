#include "mim/experiment.hpp"

#include <cmath>
#include <cstdio>

#include "mim/error.hpp"

#include "json.hpp"

namespace mim {

namespace {

std::vector<double> outcome_values(const std::vector<RespondentRecord>& records,
                                   std::string_view outcome,
                                   Scenario scenario) {
  std::vector<double> values;
  for (const RespondentRecord& record : records) {
    if (record.scenario != scenario) continue;
    const auto value = outcome_value(record, outcome);
    if (value) values.push_back(*value);
  }
  return values;
}

stats::RegressionInput regression_input(
    const std::vector<RespondentRecord>& records, std::string_view outcome,
    Scenario scenario) {
  stats::RegressionInput input;
  for (std::string_view name : kPredictorNames)
    input.predictor_names.emplace_back(name);
  for (const RespondentRecord& record : records) {
    if (record.scenario != scenario) continue;
    std::vector<std::optional<double>> row;
    row.reserve(kPredictorNames.size());
    for (std::string_view name : kPredictorNames)
      row.push_back(predictor_value(record, name));
    input.rows.push_back(std::move(row));
    input.outcome.push_back(outcome_value(record, outcome));
  }
  return input;
}

}  // namespace

stats::RegressionBlockSpec standard_blocks() {
  return {
      {"Demographics", {"age", "gender"}},
      {"Social Media and Politics",
       {"social_media_use", "following_politics"}},
      {"Focal Variables",
       {"willingness_to_self_censor", "attitude_certainty", "issue_importance",
        "congruence_friends_family", "congruence_nation"}},
  };
}

ExperimentReport analyze_experiment(
    const std::vector<RespondentRecord>& records) {
  ExperimentReport report;
  report.n_total = records.size();
  for (const RespondentRecord& record : records) {
    if (record.scenario == Scenario::MIM) ++report.n_mim;
    else ++report.n_original;
  }
  if (report.n_mim == 0 || report.n_original == 0)
    raise(ErrorCode::EmptyGroup, "records must contain both scenarios");

  const auto blocks = standard_blocks();
  for (std::size_t i = 0; i < kOutcomeNames.size(); ++i) {
    StrategyAnalysis analysis;
    analysis.outcome = kOutcomeNames[i];
    analysis.label = kOutcomeLabels[i];

    const auto mim_values =
        outcome_values(records, analysis.outcome, Scenario::MIM);
    const auto original_values =
        outcome_values(records, analysis.outcome, Scenario::Original);
    analysis.mann_whitney = stats::mann_whitney(mim_values, original_values);

    for (Scenario scenario : {Scenario::Original, Scenario::MIM}) {
      try {
        analysis.regressions[scenario] = stats::hierarchical_regression(
            regression_input(records, analysis.outcome, scenario), blocks);
      } catch (const Error& e) {
        analysis.regression_errors[scenario] = e.what();
      }
    }
    report.strategies.push_back(std::move(analysis));
  }
  return report;
}

std::string significance_stars(double p) {
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::string format_stat(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value);
  std::string out = buffer;
  // SPSS-style: strip the leading zero of |value| < 1.
  if (out.rfind("0.", 0) == 0) out = out.substr(1);
  else if (out.rfind("-0.", 0) == 0) out = "-" + out.substr(2);
  return out;
}

std::string format_u(double u) {
  if (u == std::floor(u)) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.0f", u);
    return buffer;
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f", u);
  return buffer;
}

std::string format_u_z_p(double u, double z, double p) {
  return format_u(u) + " / " + format_stat(z) + " / " + format_stat(p) +
         significance_stars(p);
}

namespace {

std::string format_percent(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f", fraction * 100.0);
  return buffer;
}

std::string pad(const std::string& text, std::size_t width) {
  if (text.size() >= width) return text;
  return text + std::string(width - text.size(), ' ');
}

void append_regression_table(std::string& out, const StrategyAnalysis& s) {
  out += "Hierarchical regression predicting \"" + s.label + "\"\n";
  const auto original = s.regressions.find(Scenario::Original);
  const auto mim = s.regressions.find(Scenario::MIM);
  for (Scenario scenario : {Scenario::Original, Scenario::MIM}) {
    const auto err = s.regression_errors.find(scenario);
    if (err != s.regression_errors.end())
      out += "  (" + scenario_name(scenario) + ": " + err->second + ")\n";
  }
  if (original == s.regressions.end() || mim == s.regressions.end()) {
    out += "\n";
    return;
  }
  const auto& ro = original->second;
  const auto& rm = mim->second;

  static const std::map<std::string, std::string> pretty = {
      {"age", "Age"},
      {"gender", "Gender"},
      {"social_media_use", "Social Media Use"},
      {"following_politics", "Following Politics"},
      {"willingness_to_self_censor", "Willingness to self-censor"},
      {"attitude_certainty", "Attitude certainty"},
      {"issue_importance", "Issue importance"},
      {"congruence_friends_family", "Congruence friends & family"},
      {"congruence_nation", "Congruence nation"},
  };

  out += pad("", 30) + pad("Original", 10) + pad("Std.", 10) +
         pad("MIM", 10) + pad("Std.", 10) + "\n";
  std::size_t predictor_index = 0;
  for (std::size_t bi = 0; bi < ro.blocks.size(); ++bi) {
    out += ro.blocks[bi].name + "\n";
    for (const std::string& name : ro.blocks[bi].predictors) {
      const auto& po = ro.predictors[predictor_index];
      const auto& pm = rm.predictors[predictor_index];
      const auto label = pretty.count(name) ? pretty.at(name) : name;
      out += pad("  " + label, 30);
      out += pad(format_stat(po.b) + significance_stars(po.p), 10);
      out += pad(format_stat(po.beta) + significance_stars(po.p), 10);
      out += pad(format_stat(pm.b) + significance_stars(pm.p), 10);
      out += pad(format_stat(pm.beta) + significance_stars(pm.p), 10);
      out += "\n";
      ++predictor_index;
    }
    out += pad("  Incr. R2 (%)", 30);
    out += pad(format_percent(ro.blocks[bi].delta_r2) +
                   significance_stars(ro.blocks[bi].f_change_p),
               20);
    out += pad(format_percent(rm.blocks[bi].delta_r2) +
                   significance_stars(rm.blocks[bi].f_change_p),
               20);
    out += "\n";
  }
  out += pad("  Total R2 (%)", 30);
  out += pad(format_percent(ro.total_r2), 20);
  out += pad(format_percent(rm.total_r2), 20);
  out += "\n";
  out += "  (n = " + std::to_string(ro.n_used) + " Original, " +
         std::to_string(rm.n_used) + " MIM)\n\n";
}

}  // namespace

std::string format_experiment_report(const ExperimentReport& report) {
  std::string out;
  out += "Rank test across scenarios (grouping variable: scenario)\n";
  out += "  N = " + std::to_string(report.n_total) + " (MIM " +
         std::to_string(report.n_mim) + ", Original " +
         std::to_string(report.n_original) + ")\n";
  for (const StrategyAnalysis& s : report.strategies) {
    out += pad("  " + s.label, 24) + "U / Z / p = " +
           format_u_z_p(s.mann_whitney.u, s.mann_whitney.z, s.mann_whitney.p) +
           "\n";
  }
  out += "  (* p < .05, ** p < .01; two-tailed)\n\n";

  out += "Descriptives per scenario\n";
  out += pad("  Strategy", 24) + pad("Group", 10) + pad("Mean", 8) +
         pad("Median", 8) + pad("SD", 8) + "\n";
  for (const StrategyAnalysis& s : report.strategies) {
    const auto& mw = s.mann_whitney;
    out += pad("  " + s.label, 24) + pad("MIM", 10) +
           pad(format_stat(mw.group_a.mean), 8) +
           pad(format_stat(mw.group_a.median), 8) +
           pad(format_stat(mw.group_a.sd), 8) + "\n";
    out += pad("", 24) + pad("Original", 10) +
           pad(format_stat(mw.group_b.mean), 8) +
           pad(format_stat(mw.group_b.median), 8) +
           pad(format_stat(mw.group_b.sd), 8) + "\n";
  }
  out += "\n";

  for (const StrategyAnalysis& s : report.strategies)
    append_regression_table(out, s);
  out += "(* p < .05, ** p < .01)\n";
  return out;
}

namespace {

using nlohmann::json;

json regression_to_json(const stats::HierarchicalRegressionResult& r) {
  json j;
  j["n_used"] = r.n_used;
  j["total_r2"] = r.total_r2;
  json predictors = json::array();
  for (const auto& p : r.predictors) {
    predictors.push_back(json{{"name", p.name},
                              {"b", p.b},
                              {"beta", p.beta},
                              {"se", p.se},
                              {"t", p.t},
                              {"p", p.p}});
  }
  j["predictors"] = predictors;
  json blocks = json::array();
  for (const auto& b : r.blocks) {
    blocks.push_back(json{{"name", b.name},
                          {"predictors", b.predictors},
                          {"delta_r2", b.delta_r2},
                          {"f_change", b.f_change},
                          {"f_change_p", b.f_change_p},
                          {"df1", b.df1},
                          {"df2", b.df2}});
  }
  j["blocks"] = blocks;
  return j;
}

json descriptives_to_json(const stats::GroupDescriptives& d) {
  return json{
      {"n", d.n}, {"mean", d.mean}, {"median", d.median}, {"sd", d.sd}};
}

}  // namespace

std::string experiment_report_to_json(const ExperimentReport& report) {
  json j;
  j["n_total"] = report.n_total;
  j["n_mim"] = report.n_mim;
  j["n_original"] = report.n_original;
  json strategies = json::array();
  for (const StrategyAnalysis& s : report.strategies) {
    json entry;
    entry["outcome"] = s.outcome;
    entry["label"] = s.label;
    const auto& mw = s.mann_whitney;
    entry["mann_whitney"] = json{{"u", mw.u},
                                 {"z", mw.z},
                                 {"p", mw.p},
                                 {"r", mw.r},
                                 {"n_mim", mw.n1},
                                 {"n_original", mw.n2},
                                 {"mim", descriptives_to_json(mw.group_a)},
                                 {"original", descriptives_to_json(mw.group_b)}};
    json regressions = json::object();
    for (const auto& [scenario, result] : s.regressions)
      regressions[scenario == Scenario::Original ? "original" : "mim"] =
          regression_to_json(result);
    for (const auto& [scenario, error] : s.regression_errors)
      regressions[scenario == Scenario::Original ? "original" : "mim"] =
          json{{"error", error}};
    entry["regressions"] = regressions;
    strategies.push_back(std::move(entry));
  }
  j["strategies"] = strategies;
  return j.dump(2) + "\n";
}

}  // namespace mim
