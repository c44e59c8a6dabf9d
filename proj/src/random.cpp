#include "ggd/random.hpp"

#include <cmath>

#include "ggd/errors.hpp"

namespace ggd {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

double Rng::uniform() {
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma shape must be positive and finite");
  }
  if (shape < 1.0) {
    // Work in logs: for tiny shapes U^(1/k) underflows.
    const double g = gamma(shape + 1.0);
    return std::exp(std::log(g) + std::log(uniform()) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double a, double b) {
  for (;;) {
    const double x = gamma(a);
    const double y = gamma(b);
    const double p = x / (x + y);
    if (p > 0.0 && p < 1.0) return p;
  }
}

double sample_beta(double a, double b, Rng& rng) {
  if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("sample_beta requires a, b > 0");
  }
  return rng.beta(a, b);
}

}  // namespace ggd
