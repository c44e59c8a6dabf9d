#pragma once

// Maximum-likelihood fitting of the GPD, Gurland and generalized Gurland laws
// by Nelder-Mead simplex search over unconstrained coordinates.
//
// Coordinates: ln for every strictly positive parameter (lambda1, rate,
// delta, a, b) and for theta, phi; logit for lambda2, lambda3 (which must
// stay below one). Exact zeros are only reachable through pins.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ggd/gpd.hpp"
#include "ggd/mixtures.hpp"
#include "ggd/specfun.hpp"

namespace ggd {

enum class Model { gpd, gurland, ggd };

const char* to_string(Model m);
// Throws UsageError for unknown names.
Model parse_model(const std::string& name);
const std::vector<std::string>& parameter_names(Model m);

using ModelParams = std::variant<GpdParams, GurlandParams, GgdParams>;

Model model_of(const ModelParams& p);
// Values in parameter_names order.
std::vector<double> parameter_values(const ModelParams& p);
ModelParams make_params(Model m, std::span<const double> values);

class CountData {
 public:
  static CountData from_counts(std::span<const std::uint64_t> counts);
  // Frequencies must be positive; repeated x values accumulate.
  static CountData from_histogram(
      std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram);

  const std::map<std::uint64_t, std::uint64_t>& histogram() const { return hist_; }
  std::vector<std::uint64_t> to_counts() const;
  std::uint64_t size() const { return n_; }
  std::uint64_t max_value() const;
  double mean() const;
  double variance() const;

 private:
  std::map<std::uint64_t, std::uint64_t> hist_;
  std::uint64_t n_ = 0;
};

struct FitOptions {
  Model model = Model::ggd;
  std::map<std::string, double> fixed;  // pins, by parameter name
  int max_iters = 2000;
  double f_tol = 1e-9;
  int restarts = 3;
  std::uint64_t seed = 0;
  // Truncation used when the likelihood needs a measured normalizer
  // (lambda3 > 0 or phi > 0).
  SeriesControl table_ctl{1e-12, 10000};

  void validate() const;
};

struct FitResult {
  ModelParams params;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  double objective_history_final = 0.0;
  bool penalized = false;  // the objective at params carried a penalty term
};

// Finite stand-ins for log(0): per observation whose probability underflows
// or lies outside the normalizing table, and for the whole objective when the
// normalizer cannot be computed.
inline constexpr double kPointPenalty = 1e6;
inline constexpr double kNormalizerPenalty = 1e12;

struct LikelihoodEval {
  double value = 0.0;
  double log_normalizer = 0.0;
  std::uint64_t penalized_points = 0;
  bool normalization_failed = false;
};

// -sum_i log P(x_i), with P divided by its measured total mass whenever the
// model is not known to normalize (lambda3 > 0, phi > 0, or delta theta > 1).
LikelihoodEval evaluate_neg_log_likelihood(const ModelParams& params, const CountData& data,
                                           const SeriesControl& table_ctl = {1e-12, 10000});
double neg_log_likelihood(const ModelParams& params, const CountData& data,
                          const SeriesControl& table_ctl = {1e-12, 10000});

struct NelderMeadOptions {
  int max_iters = 2000;
  double f_tol = 1e-9;
  double initial_step = 0.5;
  // Extra runs started from the best point found so far plus a seeded jitter.
  int restarts = 0;
  double jitter = 0.1;
  std::uint64_t seed = 0;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Reflection 1, expansion 2, contraction 1/2, shrink 1/2. A run stops once
// max f - min f over the simplex is below f_tol. Across restarts the best
// value wins, ties going to the earliest run; converged is true if any run
// converged.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const NelderMeadOptions& opts = {});

// Throws UsageError for empty data or pins naming unknown parameters.
FitResult fit_mle(const CountData& data, const FitOptions& opts);

}  // namespace ggd
