#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mim::stats {

struct GroupDescriptives {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;  // sample SD (n-1 denominator)
};

GroupDescriptives describe(const std::vector<double>& values);

struct MannWhitneyResult {
  double u = 0.0;        // min(U_a, U_b)
  double u_a = 0.0;      // U statistic of the first group
  double z = 0.0;        // tie-corrected normal approximation, signed
  double p = 0.0;        // two-tailed
  double r = 0.0;        // |Z| / sqrt(N)
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double sigma = 0.0;    // tie-corrected SD of U
  bool has_ties = false;
  GroupDescriptives group_a;
  GroupDescriptives group_b;
};

/// Mann-Whitney U with midranks for ties. sigma uses the tie-corrected
/// variance (n1*n2/12) * [(N+1) - sum(t^3-t)/(N(N-1))]; no continuity
/// correction unless requested. Z's sign follows U_a - n1*n2/2. Throws
/// EmptyGroup when either sample is empty.
MannWhitneyResult mann_whitney(const std::vector<double>& a,
                               const std::vector<double>& b,
                               bool continuity_correction = false);

/// Rank effect size |z| / sqrt(n).
double effect_size_r(double z, std::size_t n);

// Distribution helpers (two-tailed p values).
double normal_cdf(double z);
double normal_two_tailed_p(double z);
double student_t_two_tailed_p(double t, double df);
double f_upper_p(double f, double df1, double df2);
double incomplete_beta(double a, double b, double x);

struct PredictorStats {
  std::string name;
  double b = 0.0;     // unstandardized
  double beta = 0.0;  // b * SD_x / SD_y, final model
  double se = 0.0;
  double t = 0.0;
  double p = 0.0;
};

struct BlockStats {
  std::string name;
  std::vector<std::string> predictors;
  double delta_r2 = 0.0;  // fraction, not percent
  double f_change = 0.0;
  double f_change_p = 1.0;
  std::size_t df1 = 0;
  std::size_t df2 = 0;
};

struct HierarchicalRegressionResult {
  std::vector<PredictorStats> predictors;  // final model
  std::vector<BlockStats> blocks;
  double total_r2 = 0.0;
  std::size_t n_used = 0;
};

struct RegressionBlock {
  std::string name;
  std::vector<std::string> predictors;
};

using RegressionBlockSpec = std::vector<RegressionBlock>;

/// Nested OLS fits adding one block at a time, solved by Householder QR.
/// Rows with any missing value are dropped (listwise deletion). Throws
/// InsufficientData when fewer complete rows remain than total predictors
/// plus two, RankDeficient on collinear predictors.
///
/// `rows` holds one value per predictor name per row, plus the outcome;
/// a missing optional marks the row incomplete.
struct RegressionInput {
  std::vector<std::string> predictor_names;  // column order
  std::vector<std::vector<std::optional<double>>> rows;  // predictors
  std::vector<std::optional<double>> outcome;
};

HierarchicalRegressionResult hierarchical_regression(
    const RegressionInput& input, const RegressionBlockSpec& blocks);

}  // namespace mim::stats
