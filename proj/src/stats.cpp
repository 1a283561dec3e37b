#include "mim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "mim/error.hpp"

namespace mim::stats {

namespace {

constexpr double kEps = 1e-300;

// Regularized incomplete beta via Lentz's continued fraction.
double betacf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kEps) d = kEps;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kEps) d = kEps;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kEps) c = kEps;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kEps) d = kEps;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kEps) c = kEps;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 3e-15) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_two_tailed_p(double z) {
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

double student_t_two_tailed_p(double t, double df) {
  if (df <= 0.0) return 1.0;
  if (!std::isfinite(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double f_upper_p(double f, double df1, double df2) {
  if (f <= 0.0) return 1.0;
  if (!std::isfinite(f)) return 0.0;
  return incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f));
}

GroupDescriptives describe(const std::vector<double>& values) {
  GroupDescriptives d;
  d.n = values.size();
  if (values.empty()) return d;
  d.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  d.median = (n % 2 == 1) ? sorted[n / 2]
                          : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - d.mean) * (v - d.mean);
    d.sd = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return d;
}

MannWhitneyResult mann_whitney(const std::vector<double>& a,
                               const std::vector<double>& b,
                               bool continuity_correction) {
  if (a.empty() || b.empty())
    raise(ErrorCode::EmptyGroup, "both samples must be non-empty");

  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;

  // Midranks over the pooled sample.
  std::vector<std::pair<double, std::size_t>> pooled;  // value, source index
  pooled.reserve(n);
  for (std::size_t i = 0; i < n1; ++i) pooled.emplace_back(a[i], i);
  for (std::size_t i = 0; i < n2; ++i) pooled.emplace_back(b[i], n1 + i);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  std::vector<double> ranks(n);
  double tie_sum = 0.0;  // sum of t^3 - t over tie groups
  bool has_ties = false;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double midrank = (static_cast<double>(i + 1) +
                            static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[pooled[k].second] = midrank;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) {
      has_ties = true;
      tie_sum += t * t * t - t;
    }
    i = j;
  }

  double rank_sum_a = 0.0;
  for (std::size_t k = 0; k < n1; ++k) rank_sum_a += ranks[k];

  const double nn = static_cast<double>(n1) * static_cast<double>(n2);
  const double u_a =
      rank_sum_a - static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
  const double u_b = nn - u_a;
  const double u = std::min(u_a, u_b);
  const double mu = nn / 2.0;

  const double dn = static_cast<double>(n);
  const double sigma2 =
      (nn / 12.0) *
      ((dn + 1.0) - tie_sum / (dn * (dn - 1.0)));
  const double sigma = sigma2 > 0.0 ? std::sqrt(sigma2) : 0.0;

  double z = 0.0;
  if (sigma > 0.0) {
    double num = u_a - mu;
    if (continuity_correction) {
      if (num > 0.5) num -= 0.5;
      else if (num < -0.5) num += 0.5;
      else num = 0.0;
    }
    z = num / sigma;
  }

  MannWhitneyResult result;
  result.u = u;
  result.u_a = u_a;
  result.z = z;
  result.p = sigma > 0.0 ? normal_two_tailed_p(z) : 1.0;
  result.r = effect_size_r(z, n);
  result.n1 = n1;
  result.n2 = n2;
  result.sigma = sigma;
  result.has_ties = has_ties;
  result.group_a = describe(a);
  result.group_b = describe(b);
  return result;
}

double effect_size_r(double z, std::size_t n) {
  if (n == 0) raise(ErrorCode::InvalidArgument, "n must be >= 1");
  return std::fabs(z) / std::sqrt(static_cast<double>(n));
}

namespace {

// Householder QR on the design matrix with the outcome appended as the
// last column; returns R factors and residual sums of squares for a
// sequence of nested column counts in one pass per model.
struct OlsFit {
  std::vector<double> coef;     // includes intercept at index 0
  std::vector<double> se;
  double rss = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
  std::size_t p = 0;  // columns including intercept
};

OlsFit ols_qr(const std::vector<std::vector<double>>& columns,
              const std::vector<double>& y) {
  const std::size_t n = y.size();
  const std::size_t p = columns.size();
  // Work matrix: columns of X then y, column-major.
  std::vector<std::vector<double>> work(p + 1);
  for (std::size_t j = 0; j < p; ++j) work[j] = columns[j];
  work[p] = y;

  std::vector<double> rdiag(p, 0.0);
  double max_norm = 0.0;

  for (std::size_t k = 0; k < p; ++k) {
    // Householder vector for column k below row k.
    double norm = 0.0;
    for (std::size_t row = k; row < n; ++row)
      norm += work[k][row] * work[k][row];
    norm = std::sqrt(norm);
    max_norm = std::max(max_norm, norm);
    if (norm == 0.0) {
      rdiag[k] = 0.0;
      continue;
    }
    // Reflector maps the column to alpha * e_k with alpha = -sign(v_k)*|v|.
    if (work[k][k] > 0) norm = -norm;  // norm now holds alpha
    for (std::size_t row = k; row < n; ++row) work[k][row] /= -norm;
    work[k][k] += 1.0;
    // Apply the reflector to the remaining columns.
    for (std::size_t j = k + 1; j <= p; ++j) {
      double dot = 0.0;
      for (std::size_t row = k; row < n; ++row)
        dot += work[k][row] * work[j][row];
      dot = -dot / work[k][k];
      for (std::size_t row = k; row < n; ++row)
        work[j][row] += dot * work[k][row];
    }
    rdiag[k] = norm;
  }

  // Rank check on |R_kk|.
  for (std::size_t k = 0; k < p; ++k) {
    if (std::fabs(rdiag[k]) <= 1e-10 * std::max(1.0, max_norm))
      raise(ErrorCode::RankDeficient,
            "collinear predictors (column " + std::to_string(k) + ")");
  }

  // R is stored in work[j][i] for i<j plus rdiag; Q^T y occupies work[p].
  OlsFit fit;
  fit.n = n;
  fit.p = p;
  fit.coef.assign(p, 0.0);
  for (std::size_t k = p; k-- > 0;) {
    double value = work[p][k];
    for (std::size_t j = k + 1; j < p; ++j)
      value -= work[j][k] * fit.coef[j];
    fit.coef[k] = value / rdiag[k];
  }

  double rss = 0.0;
  for (std::size_t row = p; row < n; ++row)
    rss += work[p][row] * work[p][row];
  fit.rss = rss;

  // (X^T X)^{-1} diagonal via R^{-1}: solve R^T R d = e_k column-wise.
  // Equivalent: row norms of R^{-1}.
  std::vector<std::vector<double>> rinv(p, std::vector<double>(p, 0.0));
  for (std::size_t col = 0; col < p; ++col) {
    std::vector<double> e(p, 0.0);
    e[col] = 1.0;
    for (std::size_t k = p; k-- > 0;) {
      double value = e[k];
      for (std::size_t j = k + 1; j < p; ++j)
        value -= work[j][k] * rinv[j][col];
      rinv[k][col] = (k <= col) ? value / rdiag[k] : 0.0;
    }
  }
  const double dof = static_cast<double>(n) - static_cast<double>(p);
  const double sigma2 = dof > 0 ? rss / dof : 0.0;
  fit.se.assign(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    double row_norm2 = 0.0;
    for (std::size_t col = k; col < p; ++col)
      row_norm2 += rinv[k][col] * rinv[k][col];
    fit.se[k] = std::sqrt(sigma2 * row_norm2);
  }
  return fit;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

HierarchicalRegressionResult hierarchical_regression(
    const RegressionInput& input, const RegressionBlockSpec& blocks) {
  // Resolve block predictor names to column indices.
  std::vector<std::vector<std::size_t>> block_columns;
  std::vector<std::size_t> all_columns;
  for (const RegressionBlock& block : blocks) {
    std::vector<std::size_t> indices;
    for (const std::string& name : block.predictors) {
      const auto it = std::find(input.predictor_names.begin(),
                                input.predictor_names.end(), name);
      if (it == input.predictor_names.end())
        raise(ErrorCode::InvalidArgument, "unknown predictor: " + name);
      indices.push_back(static_cast<std::size_t>(
          it - input.predictor_names.begin()));
    }
    for (std::size_t idx : indices) all_columns.push_back(idx);
    block_columns.push_back(std::move(indices));
  }

  // Listwise deletion over the predictors in use plus the outcome.
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < input.rows.size(); ++r) {
    if (!input.outcome[r].has_value()) continue;
    bool complete = true;
    for (std::size_t idx : all_columns) {
      if (!input.rows[r][idx].has_value()) {
        complete = false;
        break;
      }
    }
    if (complete) rows.push_back(r);
  }

  const std::size_t total_predictors = all_columns.size();
  if (rows.size() < total_predictors + 2)
    raise(ErrorCode::InsufficientData,
          std::to_string(rows.size()) + " complete rows for " +
              std::to_string(total_predictors) + " predictors");

  const std::size_t n = rows.size();
  std::vector<double> y(n);
  for (std::size_t r = 0; r < n; ++r) y[r] = *input.outcome[rows[r]];

  auto column_values = [&](std::size_t idx) {
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = *input.rows[rows[r]][idx];
    return col;
  };

  const double y_mean = mean_of(y);
  double tss = 0.0;
  for (double v : y) tss += (v - y_mean) * (v - y_mean);

  HierarchicalRegressionResult result;
  result.n_used = n;

  // Nested fits: intercept + cumulative blocks.
  std::vector<std::vector<double>> columns;
  columns.push_back(std::vector<double>(n, 1.0));
  std::vector<std::string> names_in_order;

  double prev_r2 = 0.0;
  OlsFit final_fit;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    for (std::size_t idx : block_columns[bi]) {
      columns.push_back(column_values(idx));
      names_in_order.push_back(input.predictor_names[idx]);
    }
    OlsFit fit = ols_qr(columns, y);
    fit.r2 = tss > 0.0 ? 1.0 - fit.rss / tss : 0.0;

    BlockStats stats;
    stats.name = blocks[bi].name;
    stats.predictors = blocks[bi].predictors;
    stats.delta_r2 = fit.r2 - prev_r2;
    const std::size_t q = block_columns[bi].size();
    const double dof = static_cast<double>(n) - static_cast<double>(fit.p);
    stats.df1 = q;
    stats.df2 = static_cast<std::size_t>(dof);
    if (q > 0 && dof > 0 && fit.r2 < 1.0) {
      stats.f_change = (stats.delta_r2 / static_cast<double>(q)) /
                       ((1.0 - fit.r2) / dof);
      if (stats.f_change < 0.0) stats.f_change = 0.0;
      stats.f_change_p = f_upper_p(stats.f_change, static_cast<double>(q), dof);
    } else if (fit.r2 >= 1.0) {
      stats.f_change = std::numeric_limits<double>::infinity();
      stats.f_change_p = 0.0;
    }
    result.blocks.push_back(std::move(stats));

    prev_r2 = fit.r2;
    final_fit = std::move(fit);
  }

  result.total_r2 = prev_r2;

  const double sd_y = sample_sd(y);
  const double dof = static_cast<double>(n) - static_cast<double>(final_fit.p);
  for (std::size_t k = 0; k < names_in_order.size(); ++k) {
    PredictorStats ps;
    ps.name = names_in_order[k];
    ps.b = final_fit.coef[k + 1];
    const std::size_t idx = all_columns[k];
    const double sd_x = sample_sd(column_values(idx));
    ps.beta = sd_y > 0.0 ? ps.b * sd_x / sd_y : 0.0;
    ps.se = final_fit.se[k + 1];
    if (ps.se > 0.0) {
      ps.t = ps.b / ps.se;
      ps.p = student_t_two_tailed_p(ps.t, dof);
    } else {
      ps.t = ps.b == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      ps.p = ps.b == 0.0 ? 1.0 : 0.0;
    }
    result.predictors.push_back(std::move(ps));
  }
  return result;
}

}  // namespace mim::stats
