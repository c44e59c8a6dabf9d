#pragma once

// Special-function kernel: log-gamma, log-beta, Pochhammer ratios and the
// confluent (1F1) and Gauss (2F1) hypergeometric series.
//
// Series are summed by term recurrence and stopped once a geometric bound on
// the remaining tail drops below rel_tol times the partial sum. Every 1F1 that
// the distributions in this library generate has a negative argument and
// C - A = b > 0; those are evaluated through the Kummer transformation
//
//   1F1(A; C; -z) = exp(-z) 1F1(C - A; C; z),
//
// which turns the alternating series into a positive-term one. For very large
// z the Kummer series needs O(z) terms, so the large-argument expansion
//
//   1F1(A; C; -z) ~ Gamma(C) / Gamma(C - A) z^-A sum_n (A)_n (1 + A - C)_n / (n! z^n)
//
// is used once its smallest term is below exp(-40) relative to the leading one
// (the exponentially small companion term is then of the same order).

#include <cstdint>
#include <vector>

namespace ggd {

struct SeriesControl {
  double rel_tol = 1e-15;
  int max_terms = 10000;

  // Throws DomainError unless 0 < rel_tol < 1 and max_terms >= 1.
  void validate() const;
};

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double log_beta(double a, double b);

// Below this length (a)_x / (c)_x is a direct product, above it a log-gamma
// difference.
inline constexpr std::uint64_t kPochhammerCrossover = 64;

// (a)_x / (c)_x for a, c > 0.
double pochhammer_ratio(double a, double c, std::uint64_t x);
double log_pochhammer_ratio(double a, double c, std::uint64_t x);

// The two routes behind pochhammer_ratio, exposed so they can be compared.
double log_pochhammer_ratio_product(double a, double c, std::uint64_t x);
double log_pochhammer_ratio_lgamma(double a, double c, std::uint64_t x);

enum class SeriesMethod {
  direct,              // plain series, z >= 0
  kummer,              // positive-term series after the Kummer transformation
  asymptotic,          // large negative argument expansion
  direct_alternating,  // z < 0 with C < A: cancellation possible
};

const char* to_string(SeriesMethod m);

struct SeriesResult {
  double value = 0.0;      // may overflow to inf when only log_value is representable
  double log_value = 0.0;  // ln |value|
  int sign = 1;
  int terms = 0;
  SeriesMethod method = SeriesMethod::direct;
  // Set when the alternating fallback was used; the result may have lost
  // digits to cancellation.
  bool reduced_accuracy = false;
};

// Full evaluation of 1F1(A; C; z) with method and status. Requires A > 0,
// C > 0 and finite z.
SeriesResult hyp1f1_eval(double A, double C, double z, const SeriesControl& ctl = {});

double hyp1f1(double A, double C, double z, const SeriesControl& ctl = {});
double log_hyp1f1(double A, double C, double z, const SeriesControl& ctl = {});

// 2F1(A, B; C; x) for |x| < 1 and A, B, C > 0.
double hyp2f1_gauss(double A, double B, double C, double x,
                    const SeriesControl& ctl = {});

// First n partial sums of the 2F1 series (sum of terms 0..k for k < n).
std::vector<double> hyp2f1_partial_sums(double A, double B, double C, double x,
                                        int n);

}  // namespace ggd
