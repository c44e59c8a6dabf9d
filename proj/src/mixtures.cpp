#include "ggd/mixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <boost/math/special_functions/lambert_w.hpp>

#include "ggd/errors.hpp"
#include "ggd/oracle.hpp"
#include "ggd/random.hpp"

namespace ggd {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double quad_m(const GgdParams& g, double x) { return 1.0 + x * g.theta + x * x * g.phi; }

std::uint64_t guard_from(std::optional<double> start) {
  if (!start) return 0;
  return static_cast<std::uint64_t>(std::ceil(std::min(*start, 1e18)));
}

}  // namespace

void GurlandParams::validate() const {
  if (!positive_finite(a) || !positive_finite(b) || !positive_finite(rate)) {
    throw DomainError("Gurland parameters a, b, rate must be positive and finite");
  }
}

void GgdParams::validate() const {
  if (!positive_finite(delta)) throw DomainError("delta must be positive and finite");
  if (!(std::isfinite(theta) && theta >= 0.0)) throw DomainError("theta must be >= 0");
  if (!(std::isfinite(phi) && phi >= 0.0)) throw DomainError("phi must be >= 0");
  if (!positive_finite(a) || !positive_finite(b)) {
    throw DomainError("beta shapes a, b must be positive and finite");
  }
}

// --- Gurland -------------------------------------------------------------

double gurland_log_pmf(const GurlandParams& g, std::uint64_t x, const SeriesControl& ctl) {
  g.validate();
  const double xd = static_cast<double>(x);
  return xd * std::log(g.rate) - log_gamma(xd + 1.0) +
         log_pochhammer_ratio(g.a, g.a + g.b, x) +
         log_hyp1f1(g.a + xd, g.a + g.b + xd, -g.rate, ctl);
}

double gurland_mean(const GurlandParams& g) {
  g.validate();
  return g.a * g.rate / (g.a + g.b);
}

double gurland_variance(const GurlandParams& g) {
  g.validate();
  const double s = g.a + g.b;
  return g.a * g.rate / s + g.a * g.b * g.rate * g.rate / (s * s * (s + 1.0));
}

PmfTable gurland_pmf_table(const GurlandParams& g, const SeriesControl& ctl) {
  g.validate();
  ctl.validate();
  return tabulate_log_pmf([&](std::uint64_t x) { return gurland_log_pmf(g, x, ctl); },
                          ctl.rel_tol);
}

MomentReport gurland_moments(const GurlandParams& g, const SeriesControl& ctl) {
  const PmfTable t = gurland_pmf_table(g, ctl);
  const double mean = gurland_mean(g);
  return MomentReport::make(mean, gurland_variance(g) + mean * mean,
                            moments_from_table(t, 1), moments_from_table(t, 2), true);
}

// --- generalized Gurland -------------------------------------------------

double ggd_log_pmf(const GgdParams& g, std::uint64_t x, const SeriesControl& ctl) {
  g.validate();
  const double xd = static_cast<double>(x);
  const double m = quad_m(g, xd);
  const double lead = x == 0 ? 0.0 : xd * std::log(g.delta) + (xd - 1.0) * std::log(m);
  return lead - log_gamma(xd + 1.0) + log_pochhammer_ratio(g.a, g.a + g.b, x) +
         log_hyp1f1(g.a + xd, g.a + g.b + xd, -g.delta * m, ctl);
}

PmfTable ggd_pmf_table(const GgdParams& g, const SeriesControl& ctl) {
  g.validate();
  ctl.validate();
  // The p = 1 component reaches furthest before any secondary region starts.
  const std::uint64_t guard = guard_from(secondary_region_start(g.delta, g.theta, g.phi));
  return tabulate_log_pmf([&](std::uint64_t x) { return ggd_log_pmf(g, x, ctl); },
                          ctl.rel_tol, guard);
}

namespace {

double series_argument(const GgdParams& g) {
  g.validate();
  const double s = g.delta * (g.theta + g.phi);
  if (!(s < 1.0)) {
    throw DomainError("moment series require delta * (theta + phi) < 1, got " +
                      std::to_string(s));
  }
  return s;
}

}  // namespace

double ggd_mean_formula(const GgdParams& g, const SeriesControl& ctl) {
  const double s = series_argument(g);
  return g.delta * g.a / (g.a + g.b) * hyp2f1_gauss(g.a + 1.0, 1.0, g.a + g.b + 1.0, s, ctl);
}

double ggd_second_moment_formula(const GgdParams& g, const SeriesControl& ctl) {
  const double s = series_argument(g);
  ctl.validate();
  const double ab = g.a + g.b;
  // term_k = k s^(k-1) (a)_k / (a+b)_k * bracket_k
  double poch = g.a / ab;  // (a)_1 / (a+b)_1
  double power = 1.0;      // s^0
  double sum = 0.0;
  for (int k = 1; k <= ctl.max_terms; ++k) {
    const double bracket = (k + 1.0) / 2.0 + g.delta * (g.a + k) / (ab + k);
    const double term = k * power * poch * bracket;
    sum += term;
    if (s == 0.0) break;
    // Successive term ratios tend to s from above; bound the tail by s-geometric
    // decay of the current ratio.
    const double next_poch = poch * (g.a + k) / (ab + k);
    const double next_bracket = (k + 2.0) / 2.0 + g.delta * (g.a + k + 1.0) / (ab + k + 1.0);
    const double next = (k + 1.0) * power * s * next_poch * next_bracket;
    const double rho = std::max(next / term, s);
    if (rho < 1.0 && next / (1.0 - rho) <= ctl.rel_tol * sum) {
      sum += next;
      break;
    }
    poch = next_poch;
    power *= s;
    if (k == ctl.max_terms) {
      throw ConvergenceError("second-moment series did not converge", g.delta * sum);
    }
  }
  return g.delta * sum;
}

MomentReport ggd_moments(const GgdParams& g, const SeriesControl& ctl) {
  const double mean_f = ggd_mean_formula(g, ctl);
  const double m2_f = ggd_second_moment_formula(g, ctl);
  const PmfTable t = ggd_pmf_table(g, ctl);
  return MomentReport::make(mean_f, m2_f, moments_from_table(t, 1),
                            moments_from_table(t, 2), g.phi == 0.0);
}

GgdParams ggd_recurrence_shift(const GgdParams& g) {
  g.validate();
  const double m1 = 1.0 + g.theta + g.phi;
  return GgdParams{g.delta * m1, (g.theta + 2.0 * g.phi) / m1, g.phi / m1, g.a + 1.0, g.b};
}

double ggd_recurrence_next(const GgdParams& g, std::uint64_t x, double p_shifted) {
  g.validate();
  if (!(p_shifted >= 0.0)) throw DomainError("shifted probability must be >= 0");
  const double xd = static_cast<double>(x);
  const double m1 = 1.0 + g.theta + g.phi;
  const double bracket = (m1 + xd * (g.theta + 2.0 * g.phi) + xd * xd * g.phi) / m1;
  return g.delta / (xd + 1.0) * g.a / (g.a + g.b) * bracket * p_shifted;
}

std::vector<double> ggd_recurrence_chain(const GgdParams& g, std::uint64_t x_max,
                                         const SeriesControl& ctl) {
  g.validate();
  std::vector<GgdParams> shifted{g};
  shifted.reserve(x_max + 1);
  for (std::uint64_t k = 0; k < x_max; ++k) {
    shifted.push_back(ggd_recurrence_shift(shifted.back()));
  }
  std::vector<double> out;
  out.reserve(x_max + 1);
  for (std::uint64_t x = 0; x <= x_max; ++x) {
    const GgdParams& base = shifted[x];
    double v = hyp1f1(base.a, base.a + base.b, -base.delta, ctl);
    for (std::uint64_t k = x; k-- > 0;) {
      v = ggd_recurrence_next(shifted[k], x - 1 - k, v);
    }
    out.push_back(v);
  }
  return out;
}

double ggd_mass_phi0(const GgdParams& g) {
  g.validate();
  if (g.phi != 0.0) throw DomainError("ggd_mass_phi0 requires phi = 0");
  const double dt = g.delta * g.theta;
  if (dt <= 1.0) return 1.0;
  // Conditional GPDs with l2 = dt p > 1 (p > 1/dt) are deficient.
  const double p_star = 1.0 / dt;
  const double span = 1.0 - p_star;
  const double lb = log_beta(g.a, g.b);
  const double deficit = integrate_unit_interval([&](double u) {
    const double p = p_star + span * u;
    const double l1 = g.delta * p;
    const double l2 = dt * p;
    const double w = -boost::math::lambert_w0(-l2 * std::exp(-l2)) / l2;
    const double missing = -std::expm1(-l1 * (1.0 - w));
    const double log_density =
        (g.a - 1.0) * std::log(p) + (g.b - 1.0) * std::log1p(-p) - lb;
    return span * std::exp(log_density) * missing;
  });
  return 1.0 - deficit;
}

namespace {

std::vector<std::uint64_t> sample_mixture(const GgdParams& g, std::uint64_t seed,
                                          std::size_t n, SamplerMode mode,
                                          const SeriesControl& ctl) {
  g.validate();
  if (!(g.delta * g.theta < 1.0 && g.delta * g.phi < 1.0)) {
    throw DomainError(
        "sampling requires delta * theta < 1 and delta * phi < 1 so that every "
        "conditional GPD is valid");
  }
  std::vector<std::uint64_t> out;
  out.reserve(n);
  std::map<std::int64_t, InverseCdf> cache;
  const auto conditional = [&](double p) {
    return GpdParams{g.delta * p, g.delta * p * g.theta, g.delta * p * g.phi};
  };
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, i);
    const double p = sample_beta(g.a, g.b, rng);
    const double u = rng.uniform();
    if (mode == SamplerMode::exact) {
      const InverseCdf lookup(gpd_pmf_table(conditional(p), ctl));
      out.push_back(lookup(u));
      continue;
    }
    const auto bin = static_cast<std::int64_t>(std::floor(p / kSamplerGrid));
    auto it = cache.find(bin);
    if (it == cache.end()) {
      const double pq = (static_cast<double>(bin) + 0.5) * kSamplerGrid;
      it = cache.emplace(bin, InverseCdf(gpd_pmf_table(conditional(pq), ctl))).first;
    }
    out.push_back(it->second(u));
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> ggd_sample(const GgdParams& g, std::uint64_t seed,
                                      std::size_t n, SamplerMode mode,
                                      const SeriesControl& ctl) {
  return sample_mixture(g, seed, n, mode, ctl);
}

std::vector<std::uint64_t> gurland_sample(const GurlandParams& g, std::uint64_t seed,
                                          std::size_t n, SamplerMode mode,
                                          const SeriesControl& ctl) {
  g.validate();
  return sample_mixture(GgdParams{g.rate, 0.0, 0.0, g.a, g.b}, seed, n, mode, ctl);
}

}  // namespace ggd
