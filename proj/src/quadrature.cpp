#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "ggd/errors.hpp"
#include "ggd/oracle.hpp"

namespace ggd {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15). Odd-indexed
// Kronrod nodes are the Gauss nodes.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
};

Panel gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }
  // QUADPACK error heuristic.
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return Panel{lo, hi, kronrod * half, err};
}

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

double sorted_sum(std::vector<Panel>& panels, double Panel::*field) {
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  double s = 0.0;
  double c = 0.0;
  for (const Panel& p : panels) {
    const double v = p.*field;
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return s + c;
}

double adaptive(const std::function<double(double)>& f, const QuadratureControl& ctl) {
  ctl.validate();
  std::vector<Panel> panels;
  const int n0 = ctl.initial_panels;
  for (int i = 0; i < n0; ++i) {
    panels.push_back(gauss_kronrod(f, static_cast<double>(i) / n0,
                                   static_cast<double>(i + 1) / n0));
  }

  const auto totals = [&](double& value, double& error) {
    value = 0.0;
    error = 0.0;
    for (const Panel& p : panels) {
      value += p.value;
      error += p.error;
    }
  };

  double value = 0.0;
  double error = 0.0;
  totals(value, error);

  if (ctl.order == RefinementOrder::worst_first) {
    std::priority_queue<Panel, std::vector<Panel>, ByError> heap(ByError{}, panels);
    while (error > ctl.rel_tol * std::abs(value)) {
      if (static_cast<int>(heap.size()) >= ctl.max_panels) {
        throw ConvergenceError("quadrature exceeded " + std::to_string(ctl.max_panels) +
                                   " panels",
                               value, error);
      }
      const Panel worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.lo + worst.hi);
      const Panel left = gauss_kronrod(f, worst.lo, mid);
      const Panel right = gauss_kronrod(f, mid, worst.hi);
      value += left.value + right.value - worst.value;
      error += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
      if (!std::isfinite(value)) break;
    }
    panels.clear();
    while (!heap.empty()) {
      panels.push_back(heap.top());
      heap.pop();
    }
  } else {
    while (error > ctl.rel_tol * std::abs(value)) {
      const double share = ctl.rel_tol * std::abs(value) / static_cast<double>(panels.size());
      std::vector<Panel> next;
      next.reserve(panels.size() * 2);
      std::sort(panels.begin(), panels.end(),
                [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
      for (const Panel& p : panels) {
        if (p.error <= share) {
          next.push_back(p);
          continue;
        }
        const double mid = 0.5 * (p.lo + p.hi);
        next.push_back(gauss_kronrod(f, p.lo, mid));
        next.push_back(gauss_kronrod(f, mid, p.hi));
      }
      panels.swap(next);
      if (static_cast<int>(panels.size()) > ctl.max_panels) {
        totals(value, error);
        throw ConvergenceError("quadrature exceeded " + std::to_string(ctl.max_panels) +
                                   " panels",
                               value, error);
      }
      totals(value, error);
      if (!std::isfinite(value)) break;
    }
  }
  // Final value summed in position order, independent of refinement history.
  return sorted_sum(panels, &Panel::value);
}

}  // namespace

void QuadratureControl::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("QuadratureControl.rel_tol must lie in (0, 1)");
  }
  if (max_panels < 1 || initial_panels < 1 || initial_panels > max_panels) {
    throw DomainError("QuadratureControl panel counts are inconsistent");
  }
}

double integrate_unit_interval(const std::function<double(double)>& f,
                               const QuadratureControl& ctl) {
  return adaptive(f, ctl);
}

double integrate_log_unit_interval(const std::function<double(double)>& log_f,
                                   const QuadratureControl& ctl) {
  ctl.validate();
  // Locate the peak on a coarse node grid, then integrate the shifted
  // integrand. If refinement finds a much larger value the pass is repeated
  // with the new shift.
  double shift = -std::numeric_limits<double>::infinity();
  constexpr int kProbe = 256;
  for (int i = 0; i < kProbe; ++i) {
    shift = std::max(shift, log_f((i + 0.5) / kProbe));
  }
  if (!std::isfinite(shift)) {
    if (shift < 0) return shift;
    throw DomainError("log integrand is not finite");
  }
  for (int attempt = 0; attempt < 4; ++attempt) {
    double seen = shift;
    const double value = adaptive(
        [&](double p) {
          const double l = log_f(p);
          seen = std::max(seen, l);
          return std::exp(l - shift);
        },
        ctl);
    if (seen <= shift + 300.0 && std::isfinite(value)) return shift + std::log(value);
    shift = seen;
  }
  throw ConvergenceError("could not find a stable scale for the log integrand");
}

}  // namespace ggd
