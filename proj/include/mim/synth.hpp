#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mim/records.hpp"

namespace mim {

/// Seeded uniform/gaussian stream built on std::mt19937_64 with an
/// explicit Box-Muller transform. The mt19937_64 output sequence is fixed
/// by the standard, so generated records are identical across platforms.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Standard normal.
  double gaussian();

 private:
  std::mt19937_64 engine_;
};

struct LatentSpec {
  double mean = 0.0;
  double sd = 1.0;
};

/// Exact mean/variance of a generated predictor, used for analytic R2.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

struct OutcomeCoefficients {
  double intercept = 0.0;
  std::map<std::string, double> slopes;  // keyed by predictor name
};

/// Generator parameters. Likert-style fields are produced by rounding and
/// clamping latent normals to their ranges; the congruence measures and
/// the self-censor composite stay continuous. Outcomes follow the linear
/// model per scenario plus normal noise, clamped to 1-7.
struct SyntheticParams {
  LatentSpec age{24.0, 3.0};  // rounded, clamped to [18, 34]
  double male_probability = 0.45;
  LatentSpec social_media_use{4.53, 0.74};     // Likert 1-5
  LatentSpec following_politics{2.85, 1.155};  // Likert 1-5
  LatentSpec willingness_to_self_censor{3.0, 0.5};
  LatentSpec attitude_certainty{4.0, 1.2};
  LatentSpec issue_importance{3.5, 1.0};
  LatentSpec congruence_friends_family{50.0, 20.0};
  LatentSpec congruence_nation{50.0, 20.0};
  double noise_sd = 0.4;
  double mim_fraction = 0.5;

  // outcome name -> scenario -> coefficients.
  std::map<std::string, std::map<Scenario, OutcomeCoefficients>> outcomes;

  /// Exact moments of each generated predictor (discretized where the
  /// field is rounded/clamped).
  std::map<std::string, Moments> predictor_moments() const;

  /// Population R2 of the model using the given cumulative predictor set,
  /// exact under independent predictors: explained = sum b^2 var over the
  /// set, total = explained(all) + noise variance.
  double analytic_r2(std::string_view outcome, Scenario scenario,
                     const std::vector<std::string>& predictors) const;

  /// Analytic expectation of the outcome under the linear model.
  double analytic_outcome_mean(std::string_view outcome,
                               Scenario scenario) const;
};

/// Defaults: predictor scales from the study descriptives, slope sets per
/// outcome and scenario from the reported regressions, intercepts placed
/// mid-scale so the 1-7 clamp is effectively never hit.
SyntheticParams default_synthetic_params();

/// Deterministic for a fixed (params, n, seed). Throws InvalidArgument
/// when n < 1.
std::vector<RespondentRecord> generate_synthetic(const SyntheticParams& params,
                                                 std::size_t n,
                                                 std::uint64_t seed);

/// JSON (de)serialization of the parameter set; schema documented in the
/// repository.
std::string params_to_json(const SyntheticParams& params);
SyntheticParams params_from_json(std::string_view json_text);

}  // namespace mim
