#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ggd {

// Truncated probability vector indexed from x = 0.
struct PmfTable {
  std::vector<double> probs;
  std::uint64_t x_max = 0;
  double tail_mass = 0.0;  // geometric extrapolation of the mass beyond x_max
  double rel_tol = 0.0;
  // Tabulation was not allowed to stop before this point (see secondary_region_start).
  std::uint64_t guard_x = 0;
  // A secondary region was predicted beyond the hard cap and is not included.
  bool guard_beyond_cap = false;

  double sum() const;
  double total() const { return sum() + tail_mass; }
};

inline constexpr std::uint64_t kTableCap = 100000;
inline constexpr int kStopRun = 5;

// Tabulates exp(log_pmf(x)) from x = 0 upward. Stops once kStopRun consecutive
// values are below rel_tol times the running maximum and x has passed
// guard_x; throws ConvergenceError if x reaches kTableCap first. A guard past
// the cap is ignored and recorded in guard_beyond_cap.
PmfTable tabulate_log_pmf(const std::function<double(std::uint64_t)>& log_pmf,
                          double rel_tol, std::uint64_t guard_x = 0);

// For a count law whose x-th term behaves like a Poisson term with "mean"
// scale * (1 + lin x + quad x^2), the terms become exponentially small while
// that mean is below x and climb back to O(x^-3/2) where it crosses x again.
// Returns the larger crossing (or the closest approach when there is no
// crossing), i.e. the last x at which the terms can grow again. Empty when
// quad == 0.
std::optional<double> secondary_region_start(double scale, double lin, double quad);

// Precomputed normalized CDF over a table, for inverse-CDF draws.
class InverseCdf {
 public:
  explicit InverseCdf(const PmfTable& table);
  // u in [0, 1).
  std::uint64_t operator()(double u) const;

 private:
  std::vector<double> cdf_;
};

}  // namespace ggd
