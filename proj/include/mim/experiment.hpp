#pragma once

#include <map>
#include <string>
#include <vector>

#include "mim/records.hpp"
#include "mim/stats.hpp"

namespace mim {

/// The three predictor blocks used by every response-strategy regression:
/// Demographics; Social Media and Politics; Focal Variables.
stats::RegressionBlockSpec standard_blocks();

struct StrategyAnalysis {
  std::string outcome;  // machine name
  std::string label;    // table label
  stats::MannWhitneyResult mann_whitney;  // MIM group first, Original second
  std::map<Scenario, stats::HierarchicalRegressionResult> regressions;
  std::map<Scenario, std::string> regression_errors;  // when a fit failed
};

struct ExperimentReport {
  std::vector<StrategyAnalysis> strategies;
  std::size_t n_total = 0;
  std::size_t n_mim = 0;
  std::size_t n_original = 0;
};

/// Per strategy: Mann-Whitney across scenarios with descriptives, and a
/// hierarchical regression per scenario over the standard blocks. Throws
/// EmptyGroup unless both scenarios are present; a regression that cannot
/// be fit (too few rows) is reported as an error string instead.
ExperimentReport analyze_experiment(
    const std::vector<RespondentRecord>& records);

// --- Formatting -----------------------------------------------------------

/// Significance stars: ** for p < .01, * for p < .05, empty otherwise.
std::string significance_stars(double p);

/// Three-decimal statistic with the leading zero stripped (".031", "-.228",
/// "2.155").
std::string format_stat(double value);

/// U with no trailing decimals when integral ("10501", "4.5").
std::string format_u(double u);

/// "U / Z / p" cell, e.g. "10501 / 2.155 / .031*".
std::string format_u_z_p(double u, double z, double p);

/// Text report shaped like the analysis tables: the rank-test table, group
/// descriptives, and one regression table per strategy.
std::string format_experiment_report(const ExperimentReport& report);

/// Machine-readable JSON mirror of the report.
std::string experiment_report_to_json(const ExperimentReport& report);

}  // namespace mim
