#pragma once

// Beta mixtures of Poisson-type laws.
//
// Gurland: X | p ~ Poisson(rate p), p ~ Beta(a, b)
//   P(x) = (a)_x / (a+b)_x * rate^x / x! * 1F1(a+x; a+b+x; -rate)
//
// Generalized Gurland (GGD): X | p ~ GPD(l1 = delta p, l2 = delta p theta,
// l3 = delta p phi), p ~ Beta(a, b). With m(x) = 1 + x theta + x^2 phi,
//   P(x) = delta^x m(x)^(x-1) / x! * (a)_x / (a+b)_x * 1F1(a+x; a+b+x; -delta m(x))
//
// Moment formulas come from averaging the conditional GPD moment formulas
// over the beta law; with s = delta (theta + phi) < 1,
//   E X   = delta a / (a+b) * 2F1(a+1, 1; a+b+1; s)
//   E X^2 = delta sum_{k>=1} k s^(k-1) (a)_k / (a+b)_k [ (k+1)/2 + delta (a+k)/(a+b+k) ]
// Both are exact for phi = 0 and reduce to the Gurland moments at theta = phi = 0.
//
// Recurrence: with the shifted parameters
//   delta' = delta (1 + theta + phi), theta' = (theta + 2 phi) / (1 + theta + phi),
//   phi' = phi / (1 + theta + phi), a' = a + 1, b' = b
// (so that delta' m'(x) = delta m(x + 1)),
//   P(x+1; g) = delta / (x+1) * a / (a+b) * m'(x) * P(x; g').

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ggd/gpd.hpp"
#include "ggd/specfun.hpp"
#include "ggd/table.hpp"

namespace ggd {

struct GurlandParams {
  double a = 1.0;
  double b = 1.0;
  double rate = 1.0;

  void validate() const;
};

struct GgdParams {
  double delta = 1.0;  // mixing rate: conditional l1 = delta p
  double theta = 0.0;  // l2 / l1
  double phi = 0.0;    // l3 / l1
  double a = 1.0;
  double b = 1.0;

  void validate() const;
  // Moment series converge only for delta (theta + phi) < 1.
  bool series_moments_valid() const { return delta * (theta + phi) < 1.0; }
};

// --- Gurland -------------------------------------------------------------

double gurland_log_pmf(const GurlandParams& g, std::uint64_t x,
                       const SeriesControl& ctl = {});
double gurland_mean(const GurlandParams& g);
double gurland_variance(const GurlandParams& g);
PmfTable gurland_pmf_table(const GurlandParams& g, const SeriesControl& ctl = {});
// Formula moments are exact here, so exact_regime is always true.
MomentReport gurland_moments(const GurlandParams& g, const SeriesControl& ctl = {});

// --- generalized Gurland -------------------------------------------------

double ggd_log_pmf(const GgdParams& g, std::uint64_t x, const SeriesControl& ctl = {});
PmfTable ggd_pmf_table(const GgdParams& g, const SeriesControl& ctl = {});

double ggd_mean_formula(const GgdParams& g, const SeriesControl& ctl = {});
double ggd_second_moment_formula(const GgdParams& g, const SeriesControl& ctl = {});
MomentReport ggd_moments(const GgdParams& g, const SeriesControl& ctl = {});

GgdParams ggd_recurrence_shift(const GgdParams& g);
double ggd_recurrence_next(const GgdParams& g, std::uint64_t x, double p_shifted);

// P(0..x_max) where P(x) is reached by applying ggd_recurrence_next x times,
// starting from P(0) under the x-fold shifted parameters.
std::vector<double> ggd_recurrence_chain(const GgdParams& g, std::uint64_t x_max,
                                         const SeriesControl& ctl = {});

// Total mass of the mixture for phi = 0. Conditional GPDs with
// l2 = delta theta p < 1 sum to one; for l2 > 1 the sum is
// exp(-l1 (1 - w)) with l2 w = -W0(-l2 exp(-l2)), averaged over the beta law.
// Throws DomainError for phi > 0.
double ggd_mass_phi0(const GgdParams& g);

enum class SamplerMode {
  cached,  // conditional tables keyed on p quantized to a 1e-4 grid (bin midpoints)
  exact,   // a fresh conditional table per draw
};

inline constexpr double kSamplerGrid = 1e-4;

// p ~ Beta(a, b), then X | p from the normalized conditional GPD table.
// Requires delta theta < 1 and delta phi < 1 so every conditional GPD is valid.
std::vector<std::uint64_t> ggd_sample(const GgdParams& g, std::uint64_t seed,
                                      std::size_t n,
                                      SamplerMode mode = SamplerMode::cached,
                                      const SeriesControl& ctl = {});

std::vector<std::uint64_t> gurland_sample(const GurlandParams& g, std::uint64_t seed,
                                          std::size_t n,
                                          SamplerMode mode = SamplerMode::cached,
                                          const SeriesControl& ctl = {});

}  // namespace ggd
