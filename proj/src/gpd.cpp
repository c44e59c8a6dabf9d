#include "ggd/gpd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ggd/errors.hpp"
#include "ggd/oracle.hpp"
#include "ggd/random.hpp"

namespace ggd {

GpdParams GpdParams::from_shape(double alpha, double theta, double phi) {
  return GpdParams{alpha, theta * alpha, phi * alpha};
}

void GpdParams::validate() const {
  if (!(std::isfinite(lambda1) && lambda1 > 0.0)) {
    throw DomainError("lambda1 must be positive and finite");
  }
  if (!(lambda2 >= 0.0 && lambda2 < 1.0)) throw DomainError("lambda2 must lie in [0, 1)");
  if (!(lambda3 >= 0.0 && lambda3 < 1.0)) throw DomainError("lambda3 must lie in [0, 1)");
}

MomentReport MomentReport::make(double mean_formula, double m2_formula,
                                double mean_numeric, double m2_numeric,
                                bool exact_regime) {
  MomentReport r;
  r.mean_formula = mean_formula;
  r.m2_formula = m2_formula;
  r.mean_numeric = mean_numeric;
  r.m2_numeric = m2_numeric;
  r.variance_numeric = m2_numeric - mean_numeric * mean_numeric;
  r.abs_diff_mean = std::abs(mean_formula - mean_numeric);
  r.rel_diff_mean = mean_numeric != 0.0 ? r.abs_diff_mean / std::abs(mean_numeric)
                                        : r.abs_diff_mean;
  r.abs_diff_m2 = std::abs(m2_formula - m2_numeric);
  r.rel_diff_m2 =
      m2_numeric != 0.0 ? r.abs_diff_m2 / std::abs(m2_numeric) : r.abs_diff_m2;
  r.exact_regime = exact_regime;
  return r;
}

double gpd_log_pmf(const GpdParams& p, std::uint64_t x) {
  p.validate();
  if (x == 0) return -p.lambda1;
  const double xd = static_cast<double>(x);
  const double m = p.lambda1 + xd * p.lambda2 + xd * xd * p.lambda3;
  return std::log(p.lambda1) + (xd - 1.0) * std::log(m) - m - log_gamma(xd + 1.0);
}

PmfTable gpd_pmf_table(const GpdParams& p, const SeriesControl& ctl) {
  p.validate();
  ctl.validate();
  std::uint64_t guard = 0;
  if (const auto start = secondary_region_start(p.lambda1, p.theta(), p.phi())) {
    guard = static_cast<std::uint64_t>(std::ceil(std::min(*start, 1e18)));
  }
  return tabulate_log_pmf([&](std::uint64_t x) { return gpd_log_pmf(p, x); },
                          ctl.rel_tol, guard);
}

MassReport gpd_total_mass(const GpdParams& p, const SeriesControl& ctl) {
  const PmfTable t = gpd_pmf_table(p, ctl);
  MassReport r;
  r.total_mass = t.total();
  r.deviation_from_one = r.total_mass - 1.0;
  r.x_max_used = t.x_max;
  r.converged = !t.guard_beyond_cap;
  return r;
}

namespace {

double dispersion_denominator(const GpdParams& p) {
  p.validate();
  const double d = 1.0 - p.lambda2 - p.lambda3;
  if (!(d > 0.0)) throw DomainError("moment formulas require lambda2 + lambda3 < 1");
  return d;
}

}  // namespace

double gpd_mean_formula(const GpdParams& p) {
  return p.lambda1 / dispersion_denominator(p);
}

double gpd_second_moment_formula(const GpdParams& p) {
  const double d = dispersion_denominator(p);
  return p.lambda1 / (d * d * d) + p.lambda1 * p.lambda1 / (d * d);
}

MomentReport gpd_moments_numeric(const GpdParams& p, const SeriesControl& ctl) {
  const PmfTable t = gpd_pmf_table(p, ctl);
  return MomentReport::make(gpd_mean_formula(p), gpd_second_moment_formula(p),
                            moments_from_table(t, 1), moments_from_table(t, 2),
                            p.lambda3 == 0.0);
}

std::vector<std::uint64_t> gpd_sample(const GpdParams& p, std::uint64_t seed,
                                      std::size_t n, const SeriesControl& ctl) {
  p.validate();
  std::vector<std::uint64_t> out;
  if (n == 0) return out;
  const InverseCdf lookup(gpd_pmf_table(p, ctl));
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, i);
    out.push_back(lookup(rng.uniform()));
  }
  return out;
}

}  // namespace ggd
