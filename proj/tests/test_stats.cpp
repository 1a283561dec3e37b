#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "mim/error.hpp"
#include "mim/stats.hpp"
#include "mim/synth.hpp"

using namespace mim;
using namespace mim::stats;

namespace {

// Independent oracle: U by counting all (a_i, b_j) pairs, half credit for
// ties.
double brute_force_u_a(const std::vector<double>& a,
                       const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a)
    for (double y : b) {
      if (x > y) u += 1.0;
      else if (x == y) u += 0.5;
    }
  return u;
}

double brute_force_u(const std::vector<double>& a,
                     const std::vector<double>& b) {
  const double u_a = brute_force_u_a(a, b);
  return std::min(u_a, static_cast<double>(a.size() * b.size()) - u_a);
}

// Independent oracle for the tie-corrected SD: the variance of the rank
// sum of a simple random sample of n1 midranks drawn from the pooled N,
// sigma^2 = n1*n2*S^2/(N-1) with S^2 the population variance of the
// midranks.
double rank_variance_sigma(const std::vector<double>& a,
                           const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> midranks;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) midranks.push_back(rank);
    i = j;
  }
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double s2 = 0.0;
  for (double r : midranks) s2 += (r - mean) * (r - mean);
  s2 /= static_cast<double>(n);
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  return std::sqrt(n1 * n2 * s2 / (static_cast<double>(n) - 1.0));
}

}  // namespace

TEST_CASE("identical fully-tied groups") {
  const auto result = mann_whitney({1, 2, 3}, {1, 2, 3});
  CHECK(result.u == doctest::Approx(4.5));
  CHECK(result.z == doctest::Approx(0.0));
  CHECK(result.p == doctest::Approx(1.0));
  CHECK(result.r == doctest::Approx(0.0));
}

TEST_CASE("fully separated groups give U = 0") {
  const auto result = mann_whitney({1, 2}, {3, 4});
  CHECK(result.u == doctest::Approx(0.0));
  CHECK(brute_force_u({1, 2}, {3, 4}) == doctest::Approx(0.0));
}

TEST_CASE("empty groups are rejected") {
  try {
    mann_whitney({}, {1.0});
    FAIL("expected EmptyGroup");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyGroup);
  }
}

TEST_CASE("U matches the pair-counting oracle on random tied samples") {
  std::mt19937_64 rng(0x11AAull);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(1 + rng() % 6);
    std::vector<double> b(1 + rng() % 6);
    for (double& v : a) v = static_cast<double>(1 + rng() % 4);
    for (double& v : b) v = static_cast<double>(1 + rng() % 4);
    const auto result = mann_whitney(a, b);
    CHECK(result.u == doctest::Approx(brute_force_u(a, b)).epsilon(1e-12));
    CHECK(result.u_a ==
          doctest::Approx(brute_force_u_a(a, b)).epsilon(1e-12));
    CHECK(result.u >= 0.0);
    CHECK(result.u <= static_cast<double>(a.size() * b.size()));
  }
}

TEST_CASE("tie-corrected sigma matches the rank-variance oracle") {
  std::mt19937_64 rng(0x51D3ull);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(2 + rng() % 10);
    std::vector<double> b(2 + rng() % 10);
    for (double& v : a) v = static_cast<double>(1 + rng() % 5);
    for (double& v : b) v = static_cast<double>(1 + rng() % 5);
    const auto result = mann_whitney(a, b);
    CHECK(result.sigma ==
          doctest::Approx(rank_variance_sigma(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("tie correction strictly shrinks sigma, growing |Z|") {
  const std::vector<double> a = {1, 2, 2, 3, 5, 5};
  const std::vector<double> b = {2, 2, 4, 5, 6};
  const auto tied = mann_whitney(a, b);
  REQUIRE(tied.has_ties);
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  const double sigma_no_ties = std::sqrt(n1 * n2 * (n + 1.0) / 12.0);
  CHECK(tied.sigma < sigma_no_ties);
  if (tied.z != 0.0)
    CHECK(std::fabs(tied.z) >
          std::fabs((tied.u_a - n1 * n2 / 2.0) / sigma_no_ties));
}

TEST_CASE("U is invariant under strictly monotone transforms") {
  std::mt19937_64 rng(0x300Dull);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(3 + rng() % 5);
    std::vector<double> b(3 + rng() % 5);
    for (double& v : a) v = static_cast<double>(1 + rng() % 6);
    for (double& v : b) v = static_cast<double>(1 + rng() % 6);
    auto transform = [](double x) { return std::exp(x / 2.0) + 3.0; };
    std::vector<double> ta(a.size()), tb(b.size());
    std::transform(a.begin(), a.end(), ta.begin(), transform);
    std::transform(b.begin(), b.end(), tb.begin(), transform);
    CHECK(mann_whitney(a, b).u == doctest::Approx(mann_whitney(ta, tb).u));
  }
}

TEST_CASE("Z sign follows the first group's U") {
  // First group stochastically larger: U_a > mean, positive Z.
  const auto high_first = mann_whitney({5, 6, 7}, {1, 2, 3});
  CHECK(high_first.z > 0.0);
  const auto low_first = mann_whitney({1, 2, 3}, {5, 6, 7});
  CHECK(low_first.z < 0.0);
}

TEST_CASE("effect size anchors") {
  CHECK(effect_size_r(2.155, 311) == doctest::Approx(0.1222).epsilon(1e-3));
  CHECK(effect_size_r(2.155, 311) < 0.3);
  CHECK(effect_size_r(0.0, 123) == doctest::Approx(0.0));
  CHECK(effect_size_r(1.0, 4) == doctest::Approx(0.5));
}

TEST_CASE("descriptives") {
  const auto d = describe({1, 2, 3, 4});
  CHECK(d.mean == doctest::Approx(2.5));
  CHECK(d.median == doctest::Approx(2.5));
  CHECK(d.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

namespace {

RegressionInput single_column_input(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  RegressionInput input;
  input.predictor_names = {"x"};
  for (std::size_t i = 0; i < x.size(); ++i) {
    input.rows.push_back({x[i]});
    input.outcome.push_back(y[i]);
  }
  return input;
}

}  // namespace

TEST_CASE("noiseless line recovers exactly") {
  std::vector<double> x, y;
  for (int i = 1; i <= 12; ++i) {
    x.push_back(i);
    y.push_back(2.0 * i);
  }
  const auto result = hierarchical_regression(single_column_input(x, y),
                                              {{"only", {"x"}}});
  REQUIRE(result.predictors.size() == 1);
  CHECK(result.predictors[0].b == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(result.predictors[0].beta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.total_r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.predictors[0].p == doctest::Approx(0.0));
}

TEST_CASE("null slope stays null at n=1000") {
  SeededRng rng(424242);
  std::vector<double> x(1000), y(1000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.gaussian();
    y[i] = 3.0 + rng.gaussian();
  }
  const auto result = hierarchical_regression(single_column_input(x, y),
                                              {{"only", {"x"}}});
  CHECK(std::fabs(result.predictors[0].b) < 0.1);
  CHECK(result.blocks[0].delta_r2 < 0.01);
  CHECK(result.blocks[0].f_change_p > 0.05);
}

TEST_CASE("rank-deficient designs are rejected") {
  RegressionInput input;
  input.predictor_names = {"x", "x_copy"};
  for (int i = 0; i < 20; ++i) {
    const double v = i;
    input.rows.push_back({v, v});
    input.outcome.push_back(2.0 * v + 1.0);
  }
  try {
    hierarchical_regression(input, {{"b", {"x", "x_copy"}}});
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("insufficient data is rejected") {
  RegressionInput input;
  input.predictor_names = {"x"};
  input.rows = {{1.0}, {2.0}};
  input.outcome = {1.0, 2.0};
  try {
    hierarchical_regression(input, {{"b", {"x"}}});
    FAIL("expected InsufficientData");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientData);
  }
}

TEST_CASE("listwise deletion drops incomplete rows") {
  RegressionInput input;
  input.predictor_names = {"x"};
  for (int i = 1; i <= 12; ++i) {
    input.rows.push_back({static_cast<double>(i)});
    input.outcome.push_back(2.0 * i);
  }
  input.rows.push_back({std::nullopt});
  input.outcome.push_back(99.0);
  input.rows.push_back({1.0});
  input.outcome.push_back(std::nullopt);
  const auto result =
      hierarchical_regression(input, {{"b", {"x"}}});
  CHECK(result.n_used == 12);
  CHECK(result.predictors[0].b == doctest::Approx(2.0));
}

TEST_CASE("blocks: delta R2 is non-negative and sums to the total") {
  SeededRng rng(7);
  RegressionInput input;
  input.predictor_names = {"x1", "x2", "x3"};
  for (int i = 0; i < 400; ++i) {
    const double x1 = rng.gaussian();
    const double x2 = rng.gaussian();
    const double x3 = rng.gaussian();
    input.rows.push_back({x1, x2, x3});
    input.outcome.push_back(1.0 + 0.8 * x1 - 0.5 * x2 + 0.0 * x3 +
                            rng.gaussian());
  }
  const auto result = hierarchical_regression(
      input, {{"one", {"x1"}}, {"two", {"x2"}}, {"three", {"x3"}}});
  double sum = 0.0;
  for (const auto& block : result.blocks) {
    CHECK(block.delta_r2 >= -1e-12);
    sum += block.delta_r2;
  }
  CHECK(sum == doctest::Approx(result.total_r2).epsilon(1e-12));
  // Strong predictors are starred, the null one is not.
  CHECK(result.blocks[0].f_change_p < 0.01);
  CHECK(result.blocks[1].f_change_p < 0.01);
  CHECK(result.blocks[2].f_change_p > 0.05);
}

TEST_CASE("beta and b share the sign of every predictor") {
  SeededRng rng(99);
  RegressionInput input;
  input.predictor_names = {"x1", "x2"};
  for (int i = 0; i < 200; ++i) {
    const double x1 = 2.0 + 0.5 * rng.gaussian();
    const double x2 = 10.0 * rng.gaussian();
    input.rows.push_back({x1, x2});
    input.outcome.push_back(0.7 * x1 - 0.02 * x2 + rng.gaussian());
  }
  const auto result =
      hierarchical_regression(input, {{"b", {"x1", "x2"}}});
  for (const auto& p : result.predictors) {
    if (p.b > 0) CHECK(p.beta > 0);
    if (p.b < 0) CHECK(p.beta < 0);
  }
}

TEST_CASE("distribution helpers agree with known values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_two_tailed_p(1.959963985) == doctest::Approx(0.05).epsilon(1e-6));
  // t with large df approaches the normal.
  CHECK(student_t_two_tailed_p(1.96, 100000) ==
        doctest::Approx(0.05).epsilon(1e-3));
  // F(1, df) equals t^2 with the same tail.
  const double t = 2.3;
  CHECK(f_upper_p(t * t, 1, 40) ==
        doctest::Approx(student_t_two_tailed_p(t, 40)).epsilon(1e-9));
}
