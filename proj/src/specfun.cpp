#include "ggd/specfun.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "ggd/errors.hpp"

namespace ggd {

namespace {

// Scale applied when a positive-term partial sum grows past the double range.
constexpr double kRescaleThreshold = 1e250;
constexpr double kRescaleFactor = 1e-250;
const double kLogRescale = std::log(1e250);

// Exact error of the floating-point sum s = fl(p + q) (Knuth two-sum).
template <class T>
T rounding_error(T p, T q, T s) {
  const T qq = s - p;
  const T pp = s - qq;
  return (p - pp) + (q - qq);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_positive(double v, const char* what) {
  if (!positive_finite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " +
                      std::to_string(v));
  }
}

// Stirling correction ln Gamma(z) - [(z - 1/2) ln z - z + ln(2 pi)/2].
long double stirling_tail(long double z) {
  const long double r = 1.0L / z;
  const long double r2 = r * r;
  return r * (1.0L / 12.0L +
              r2 * (-1.0L / 360.0L +
                    r2 * (1.0L / 1260.0L +
                          r2 * (-1.0L / 1680.0L +
                                r2 * (1.0L / 1188.0L +
                                      r2 * (-691.0L / 360360.0L + r2 * (1.0L / 156.0L)))))));
}

// ln Gamma(u) - ln Gamma(v) in extended precision. For large arguments the
// leading Stirling terms are rearranged so the difference is formed without
// cancelling two large log-gamma values.
long double log_gamma_difference_ext(long double u, long double v) {
  if (u == v) return 0.0L;
  if (std::min(u, v) < 20.0L) {
    int su = 1;
    int sv = 1;
    return ::lgammal_r(u, &su) - ::lgammal_r(v, &sv);
  }
  const long double d = u - v;
  // (u - 1/2) ln u - (v - 1/2) ln v - d
  //   = d ln v + (u - 1/2) log1p(d / v) - d
  const long double lead = d * std::log(v) + (u - 0.5L) * std::log1p(d / v) - d;
  return lead + (stirling_tail(u) - stirling_tail(v));
}

double log_gamma_difference(double u, double v) {
  return static_cast<double>(log_gamma_difference_ext(u, v));
}

// ln[(a)_x / (c)_x] via log-gamma differences, carried in long double.
long double log_pochhammer_ratio_ext(double a, double c, std::uint64_t x) {
  const long double xl = static_cast<long double>(x);
  const long double u = a + xl;
  const long double v = c + xl;
  // Residual rounding of a + x and c + x enters through first-order digamma terms.
  const long double eu = rounding_error<long double>(a, xl, u);
  const long double ev = rounding_error<long double>(c, xl, v);
  const long double correction =
      boost::math::digamma(static_cast<double>(u)) * eu -
      boost::math::digamma(static_cast<double>(v)) * ev;
  return log_gamma_difference_ext(u, v) - log_gamma_difference_ext(a, c) + correction;
}

// ln sum_{s>=0} (A)_s / (C)_s z^s / s!  for A >= 0, C > 0, z > 0.
// All terms are positive; the ratio of consecutive terms is decreasing in s,
// so once it is below one the tail is bounded by t r / (1 - r).
double log_positive_series(double A, double C, double z, const SeriesControl& ctl,
                           int& terms) {
  double sum = 1.0;
  double term = 1.0;
  double log_scale = 0.0;
  for (int s = 0; s < ctl.max_terms; ++s) {
    const double ratio = (A + s) * z / ((C + s) * (s + 1.0));
    term *= ratio;
    sum += term;
    terms = s + 2;
    if (term == 0.0) return log_scale + std::log(sum);
    const double next = (A + s + 1.0) * z / ((C + s + 1.0) * (s + 2.0));
    if (next < 1.0 && term * next / (1.0 - next) <= ctl.rel_tol * sum) {
      return log_scale + std::log(sum);
    }
    if (sum > kRescaleThreshold) {
      sum *= kRescaleFactor;
      term *= kRescaleFactor;
      log_scale += kLogRescale;
    }
  }
  throw ConvergenceError("hypergeometric series did not converge within " +
                             std::to_string(ctl.max_terms) + " terms",
                         std::exp(log_scale) * sum);
}

// Large-argument expansion of 1F1(A; C; -z), C > A. Returns false unless
// the terms shrink monotonically down to the tolerance.
bool log_hyp1f1_asymptotic(double A, double C, double z, const SeriesControl& ctl,
                           double& log_value, int& terms) {
  const double b = C - A;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < ctl.max_terms; ++n) {
    const double next = term * (A + n) * (1.0 - b + n) / ((n + 1.0) * z);
    terms = n + 2;
    if (next == 0.0) break;
    if (std::abs(next) >= std::abs(term)) return false;
    sum += next;
    term = next;
    if (std::abs(term) <= ctl.rel_tol * std::abs(sum)) break;
    if (n + 1 == ctl.max_terms) return false;
  }
  if (!(sum > 0.0)) return false;
  log_value = log_gamma_difference(C, b) - A * std::log(z) + std::log(sum);
  return true;
}

bool asymptotic_applicable(double A, double z) {
  const double gap = z - A;
  return z > 50.0 && gap > 0.0 && gap * gap > 80.0 * z;
}

// prod_{j<x} (a+j)/(c+j) as value * exp(log_scale) * (1 + correction). The
// correction collects, to first order, the exact rounding errors of every
// sum, product and quotient (two-sum and fma residuals).
struct CompensatedRatio {
  double value = 1.0;
  double log_scale = 0.0;
  double correction = 0.0;
};

CompensatedRatio compensated_ratio(double a, double c, std::uint64_t x) {
  CompensatedRatio r;
  for (std::uint64_t j = 0; j < x; ++j) {
    const double jd = static_cast<double>(j);
    const double num = a + jd;
    const double den = c + jd;
    const double q = num / den;
    const double q_err = std::fma(-q, den, num) / den;
    const double p = r.value * q;
    const double p_err = std::fma(r.value, q, -p);
    r.correction += rounding_error(a, jd, num) / num - rounding_error(c, jd, den) / den +
                    q_err / q + p_err / p;
    r.value = p;
    if (r.value < 1e-200 || r.value > 1e200) {
      r.log_scale += std::log(r.value);
      r.value = 1.0;
    }
  }
  return r;
}

}  // namespace

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("SeriesControl.rel_tol must lie in (0, 1)");
  }
  if (max_terms < 1) throw DomainError("SeriesControl.max_terms must be >= 1");
}

double log_gamma(double x) {
  require_positive(x, "log_gamma argument");
  int sign = 1;
  return ::lgamma_r(x, &sign);
}

double log_beta(double a, double b) {
  require_positive(a, "log_beta a");
  require_positive(b, "log_beta b");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_pochhammer_ratio_product(double a, double c, std::uint64_t x) {
  require_positive(a, "pochhammer a");
  require_positive(c, "pochhammer c");
  const CompensatedRatio r = compensated_ratio(a, c, x);
  return r.log_scale + std::log(r.value) + std::log1p(r.correction);
}

double log_pochhammer_ratio_lgamma(double a, double c, std::uint64_t x) {
  require_positive(a, "pochhammer a");
  require_positive(c, "pochhammer c");
  return static_cast<double>(log_pochhammer_ratio_ext(a, c, x));
}

double log_pochhammer_ratio(double a, double c, std::uint64_t x) {
  if (x == 0) {
    require_positive(a, "pochhammer a");
    require_positive(c, "pochhammer c");
    return 0.0;
  }
  return x <= kPochhammerCrossover ? log_pochhammer_ratio_product(a, c, x)
                                   : log_pochhammer_ratio_lgamma(a, c, x);
}

double pochhammer_ratio(double a, double c, std::uint64_t x) {
  require_positive(a, "pochhammer a");
  require_positive(c, "pochhammer c");
  if (x > kPochhammerCrossover) {
    return static_cast<double>(std::exp(log_pochhammer_ratio_ext(a, c, x)));
  }
  const CompensatedRatio r = compensated_ratio(a, c, x);
  return r.value * std::exp(r.log_scale) * (1.0 + r.correction);
}

const char* to_string(SeriesMethod m) {
  switch (m) {
    case SeriesMethod::direct: return "direct";
    case SeriesMethod::kummer: return "kummer";
    case SeriesMethod::asymptotic: return "asymptotic";
    case SeriesMethod::direct_alternating: return "direct_alternating";
  }
  return "unknown";
}

SeriesResult hyp1f1_eval(double A, double C, double z, const SeriesControl& ctl) {
  ctl.validate();
  require_positive(A, "hyp1f1 A");
  require_positive(C, "hyp1f1 C");
  if (!std::isfinite(z)) throw DomainError("hyp1f1 argument must be finite");

  SeriesResult r;
  if (z == 0.0) {
    r.value = 1.0;
    r.terms = 1;
    return r;
  }

  if (z > 0.0) {
    r.method = SeriesMethod::direct;
    r.log_value = log_positive_series(A, C, z, ctl, r.terms);
    r.value = std::exp(r.log_value);
    return r;
  }

  const double zz = -z;
  const double b = C - A;
  if (b >= 0.0) {
    if (b == 0.0) {
      // 1F1(A; A; z) = e^z: the transformed series is the single term 1.
      r.method = SeriesMethod::kummer;
      r.terms = 1;
      r.log_value = z;
      r.value = std::exp(z);
      return r;
    }
    if (asymptotic_applicable(A, zz)) {
      double lv = 0.0;
      int terms = 0;
      if (log_hyp1f1_asymptotic(A, C, zz, ctl, lv, terms)) {
        r.method = SeriesMethod::asymptotic;
        r.log_value = lv;
        r.terms = terms;
        r.value = std::exp(lv);
        return r;
      }
    }
    r.method = SeriesMethod::kummer;
    r.log_value = z + log_positive_series(b, C, zz, ctl, r.terms);
    r.value = std::exp(r.log_value);
    return r;
  }

  // C < A with a negative argument: alternating series with compensated
  // accumulation. The result is flagged because cancellation can still eat
  // digits when |z| is large.
  r.method = SeriesMethod::direct_alternating;
  r.reduced_accuracy = true;
  double sum = 1.0;
  double comp = 0.0;
  double term = 1.0;
  bool done = false;
  for (int s = 0; s < ctl.max_terms; ++s) {
    term *= (A + s) * z / ((C + s) * (s + 1.0));
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    r.terms = s + 2;
    const double next = std::abs((A + s + 1.0) * z / ((C + s + 1.0) * (s + 2.0)));
    if (term == 0.0 ||
        (next < 1.0 && std::abs(term) * next / (1.0 - next) <=
                           ctl.rel_tol * std::abs(sum + comp))) {
      done = true;
      break;
    }
  }
  if (!done) {
    throw ConvergenceError("alternating 1F1 series did not converge", sum + comp);
  }
  r.value = sum + comp;
  r.sign = r.value < 0.0 ? -1 : 1;
  r.log_value = std::log(std::abs(r.value));
  return r;
}

double hyp1f1(double A, double C, double z, const SeriesControl& ctl) {
  return hyp1f1_eval(A, C, z, ctl).value;
}

double log_hyp1f1(double A, double C, double z, const SeriesControl& ctl) {
  const SeriesResult r = hyp1f1_eval(A, C, z, ctl);
  if (r.sign < 0) throw DomainError("log_hyp1f1: series value is negative");
  return r.log_value;
}

double hyp2f1_gauss(double A, double B, double C, double x, const SeriesControl& ctl) {
  ctl.validate();
  require_positive(A, "hyp2f1 A");
  require_positive(B, "hyp2f1 B");
  require_positive(C, "hyp2f1 C");
  if (!(std::abs(x) < 1.0)) {
    throw DomainError("hyp2f1_gauss requires |x| < 1, got " + std::to_string(x));
  }
  if (x == 0.0) return 1.0;

  double sum = 1.0;
  double term = 1.0;
  const double ax = std::abs(x);
  for (int s = 0; s < ctl.max_terms; ++s) {
    term *= (A + s) * (B + s) * x / ((C + s) * (s + 1.0));
    sum += term;
    // Ratios tend to x; bound the tail with the larger of the current ratio
    // and |x|.
    const double next =
        std::abs((A + s + 1.0) * (B + s + 1.0) * x / ((C + s + 1.0) * (s + 2.0)));
    const double rho = std::max(next, ax);
    if (term == 0.0 ||
        (rho < 1.0 && std::abs(term) * rho / (1.0 - rho) <= ctl.rel_tol * std::abs(sum))) {
      return sum;
    }
  }
  throw ConvergenceError("2F1 series did not converge within " +
                             std::to_string(ctl.max_terms) + " terms",
                         sum);
}

std::vector<double> hyp2f1_partial_sums(double A, double B, double C, double x, int n) {
  require_positive(A, "hyp2f1 A");
  require_positive(B, "hyp2f1 B");
  require_positive(C, "hyp2f1 C");
  if (!(std::abs(x) < 1.0)) throw DomainError("hyp2f1_partial_sums requires |x| < 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  double sum = 0.0;
  double term = 1.0;
  for (int s = 0; s < n; ++s) {
    sum += term;
    out.push_back(sum);
    term *= (A + s) * (B + s) * x / ((C + s) * (s + 1.0));
  }
  return out;
}

}  // namespace ggd
