#include "ggd/table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ggd/errors.hpp"

namespace ggd {

double PmfTable::sum() const {
  // Neumaier summation; tables can hold 10^5 entries spanning many decades.
  double s = 0.0;
  double c = 0.0;
  for (double p : probs) {
    const double t = s + p;
    c += std::abs(s) >= std::abs(p) ? (s - t) + p : (p - t) + s;
    s = t;
  }
  return s + c;
}

PmfTable tabulate_log_pmf(const std::function<double(std::uint64_t)>& log_pmf,
                          double rel_tol, std::uint64_t guard_x) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("table rel_tol must lie in (0, 1)");
  }
  PmfTable t;
  t.rel_tol = rel_tol;
  if (guard_x > kTableCap) {
    t.guard_beyond_cap = true;
    guard_x = 0;
  }
  t.guard_x = guard_x;

  double running_max = 0.0;
  int below = 0;
  for (std::uint64_t x = 0;; ++x) {
    if (x >= kTableCap) {
      throw ConvergenceError("pmf table reached the cap of " + std::to_string(kTableCap) +
                                 " entries before the terms decayed",
                             t.sum());
    }
    const double p = std::exp(log_pmf(x));
    t.probs.push_back(p);
    running_max = std::max(running_max, p);
    if (running_max > 0.0 && p < rel_tol * running_max) {
      ++below;
    } else {
      below = 0;
    }
    if (below >= kStopRun && x >= guard_x) break;
  }
  t.x_max = t.probs.size() - 1;

  const std::size_t n = t.probs.size();
  if (n >= 2 && t.probs[n - 2] > 0.0) {
    const double r = t.probs[n - 1] / t.probs[n - 2];
    if (r < 1.0) t.tail_mass = t.probs[n - 1] * r / (1.0 - r);
  }
  return t;
}

std::optional<double> secondary_region_start(double scale, double lin, double quad) {
  if (!(quad > 0.0)) return std::nullopt;
  // scale * (1 + lin x + quad x^2) = x
  const double qa = scale * quad;
  const double qb = scale * lin - 1.0;
  const double qc = scale;
  const double vertex = -qb / (2.0 * qa);
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return std::max(vertex, 0.0);
  const double root = vertex + std::sqrt(disc) / (2.0 * qa);
  return std::max(root, 0.0);
}

InverseCdf::InverseCdf(const PmfTable& table) {
  cdf_.reserve(table.probs.size());
  double acc = 0.0;
  for (double p : table.probs) {
    acc += p;
    cdf_.push_back(acc);
  }
  if (!(acc > 0.0)) throw DomainError("cannot sample from an all-zero table");
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

std::uint64_t InverseCdf::operator()(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return cdf_.size() - 1;
  return static_cast<std::uint64_t>(it - cdf_.begin());
}

}  // namespace ggd
