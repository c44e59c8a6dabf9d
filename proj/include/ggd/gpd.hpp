#pragma once

// Generalized Poisson distribution with a quadratic dispersion term:
//
//   P(x) = l1 (l1 + x l2 + x^2 l3)^(x-1) exp(-(l1 + x l2 + x^2 l3)) / x!
//
// With l3 = 0 this is the Consul-Jain GPD (a proper distribution for
// 0 <= l2 < 1); l2 = l3 = 0 is Poisson(l1). For l3 > 0 the series is not
// normalized in general, so total mass is measured rather than assumed.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ggd/specfun.hpp"
#include "ggd/table.hpp"

namespace ggd {

struct GpdParams {
  double lambda1 = 1.0;  // rate, > 0
  double lambda2 = 0.0;  // linear dispersion, in [0, 1)
  double lambda3 = 0.0;  // quadratic dispersion, in [0, 1)

  // Shape view: alpha = l1, theta = l2 / l1, phi = l3 / l1.
  static GpdParams from_shape(double alpha, double theta, double phi);
  double alpha() const { return lambda1; }
  double theta() const { return lambda2 / lambda1; }
  double phi() const { return lambda3 / lambda1; }

  void validate() const;
};

struct MassReport {
  double total_mass = 0.0;
  double deviation_from_one = 0.0;
  std::uint64_t x_max_used = 0;
  bool converged = false;
};

// Formula moments next to moments of the tabulated (normalized) distribution.
struct MomentReport {
  double mean_formula = 0.0;
  double mean_numeric = 0.0;
  double m2_formula = 0.0;
  double m2_numeric = 0.0;
  double variance_numeric = 0.0;
  double abs_diff_mean = 0.0;
  double rel_diff_mean = 0.0;
  double abs_diff_m2 = 0.0;
  double rel_diff_m2 = 0.0;
  bool exact_regime = false;  // formulas are exact only here

  static MomentReport make(double mean_formula, double m2_formula, double mean_numeric,
                           double m2_numeric, bool exact_regime);
};

double gpd_log_pmf(const GpdParams& p, std::uint64_t x);

PmfTable gpd_pmf_table(const GpdParams& p, const SeriesControl& ctl = {});

MassReport gpd_total_mass(const GpdParams& p, const SeriesControl& ctl = {});

// l1 / (1 - l2 - l3). Throws DomainError when l2 + l3 >= 1.
double gpd_mean_formula(const GpdParams& p);

// l1 / (1 - l2 - l3)^3 + l1^2 / (1 - l2 - l3)^2.
double gpd_second_moment_formula(const GpdParams& p);

MomentReport gpd_moments_numeric(const GpdParams& p, const SeriesControl& ctl = {});

// n draws by inverse-CDF lookup on the normalized table. Draw i uses
// Rng::stream(seed, i).
std::vector<std::uint64_t> gpd_sample(const GpdParams& p, std::uint64_t seed,
                                      std::size_t n, const SeriesControl& ctl = {});

}  // namespace ggd
