#include "ggd/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ggd/errors.hpp"
#include "ggd/random.hpp"

namespace ggd {

const char* to_string(Model m) {
  switch (m) {
    case Model::gpd: return "gpd";
    case Model::gurland: return "gurland";
    case Model::ggd: return "ggd";
  }
  return "unknown";
}

Model parse_model(const std::string& name) {
  if (name == "gpd") return Model::gpd;
  if (name == "gurland") return Model::gurland;
  if (name == "ggd") return Model::ggd;
  throw UsageError("unknown model '" + name + "' (expected gpd, gurland or ggd)");
}

const std::vector<std::string>& parameter_names(Model m) {
  static const std::vector<std::string> gpd{"lambda1", "lambda2", "lambda3"};
  static const std::vector<std::string> gurland{"a", "b", "rate"};
  static const std::vector<std::string> ggd{"delta", "theta", "phi", "a", "b"};
  switch (m) {
    case Model::gpd: return gpd;
    case Model::gurland: return gurland;
    case Model::ggd: return ggd;
  }
  return ggd;
}

Model model_of(const ModelParams& p) {
  return static_cast<Model>(p.index());
}

std::vector<double> parameter_values(const ModelParams& p) {
  if (const auto* g = std::get_if<GpdParams>(&p)) return {g->lambda1, g->lambda2, g->lambda3};
  if (const auto* g = std::get_if<GurlandParams>(&p)) return {g->a, g->b, g->rate};
  const auto& g = std::get<GgdParams>(p);
  return {g.delta, g.theta, g.phi, g.a, g.b};
}

ModelParams make_params(Model m, std::span<const double> v) {
  if (v.size() != parameter_names(m).size()) {
    throw UsageError("wrong number of parameter values for model");
  }
  switch (m) {
    case Model::gpd: return GpdParams{v[0], v[1], v[2]};
    case Model::gurland: return GurlandParams{v[0], v[1], v[2]};
    case Model::ggd: return GgdParams{v[0], v[1], v[2], v[3], v[4]};
  }
  throw UsageError("unknown model");
}

// --- data ----------------------------------------------------------------

CountData CountData::from_counts(std::span<const std::uint64_t> counts) {
  CountData d;
  for (std::uint64_t c : counts) ++d.hist_[c];
  d.n_ = counts.size();
  return d;
}

CountData CountData::from_histogram(
    std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram) {
  CountData d;
  for (const auto& [x, freq] : histogram) {
    if (freq == 0) throw UsageError("histogram frequencies must be positive");
    d.hist_[x] += freq;
    d.n_ += freq;
  }
  return d;
}

std::vector<std::uint64_t> CountData::to_counts() const {
  std::vector<std::uint64_t> out;
  out.reserve(n_);
  for (const auto& [x, freq] : hist_) out.insert(out.end(), freq, x);
  return out;
}

std::uint64_t CountData::max_value() const {
  return hist_.empty() ? 0 : hist_.rbegin()->first;
}

double CountData::mean() const {
  if (n_ == 0) return 0.0;
  double s = 0.0;
  for (const auto& [x, freq] : hist_) s += static_cast<double>(x) * static_cast<double>(freq);
  return s / static_cast<double>(n_);
}

double CountData::variance() const {
  if (n_ == 0) return 0.0;
  const double m = mean();
  double s = 0.0;
  for (const auto& [x, freq] : hist_) {
    const double d = static_cast<double>(x) - m;
    s += d * d * static_cast<double>(freq);
  }
  return s / static_cast<double>(n_);
}

// --- likelihood ------------------------------------------------------------

namespace {

struct Normalizer {
  double log_mass = 0.0;
  // Observations above this x have no mass in the normalized truncation.
  std::uint64_t support_max = std::numeric_limits<std::uint64_t>::max();
};

Normalizer table_normalizer(const PmfTable& t) {
  return Normalizer{std::log(t.sum()), t.x_max};
}

Normalizer normalizer_for(const ModelParams& params, const SeriesControl& ctl) {
  if (const auto* g = std::get_if<GpdParams>(&params)) {
    if (g->lambda3 == 0.0) return {};
    return table_normalizer(gpd_pmf_table(*g, ctl));
  }
  if (std::holds_alternative<GurlandParams>(params)) return {};
  const auto& g = std::get<GgdParams>(params);
  if (g.phi == 0.0) return Normalizer{std::log(ggd_mass_phi0(g))};
  return table_normalizer(ggd_pmf_table(g, ctl));
}

double log_pmf(const ModelParams& params, std::uint64_t x, const SeriesControl& ctl) {
  if (const auto* g = std::get_if<GpdParams>(&params)) return gpd_log_pmf(*g, x);
  if (const auto* g = std::get_if<GurlandParams>(&params)) return gurland_log_pmf(*g, x, ctl);
  return ggd_log_pmf(std::get<GgdParams>(params), x, ctl);
}

void validate(const ModelParams& params) {
  std::visit([](const auto& p) { p.validate(); }, params);
}

}  // namespace

LikelihoodEval evaluate_neg_log_likelihood(const ModelParams& params, const CountData& data,
                                           const SeriesControl& table_ctl) {
  validate(params);
  LikelihoodEval out;
  Normalizer norm;
  try {
    norm = normalizer_for(params, table_ctl);
  } catch (const ConvergenceError&) {
    out.normalization_failed = true;
    out.value = kNormalizerPenalty;
    return out;
  }
  if (!std::isfinite(norm.log_mass)) {
    out.normalization_failed = true;
    out.value = kNormalizerPenalty;
    return out;
  }
  out.log_normalizer = norm.log_mass;
  const SeriesControl series_ctl;
  double total = 0.0;
  for (const auto& [x, freq] : data.histogram()) {
    const double f = static_cast<double>(freq);
    double lp = -std::numeric_limits<double>::infinity();
    if (x <= norm.support_max) {
      try {
        lp = log_pmf(params, x, series_ctl);
      } catch (const ConvergenceError&) {
      }
    }
    if (!std::isfinite(lp)) {
      out.penalized_points += freq;
      total += f * kPointPenalty;
      continue;
    }
    total -= f * (lp - norm.log_mass);
  }
  out.value = total;
  return out;
}

double neg_log_likelihood(const ModelParams& params, const CountData& data,
                          const SeriesControl& table_ctl) {
  return evaluate_neg_log_likelihood(params, data, table_ctl).value;
}

// --- Nelder-Mead -------------------------------------------------------------

namespace {

double safe_eval(const Objective& f, std::span<const double> x) {
  const double v = f(x);
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

NelderMeadResult nelder_mead_run(const Objective& f, const std::vector<double>& x0,
                                 double step, int max_iters, double f_tol) {
  const std::size_t n = x0.size();
  NelderMeadResult res;
  if (n == 0) {
    res.x = x0;
    res.f = safe_eval(f, x0);
    res.converged = true;
    return res;
  }
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) fv[i] = safe_eval(f, pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  const auto along = [&](std::vector<double>& out, double t) {
    // out = centroid + t (centroid - worst)
    const auto& w = pts[order[n]];
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (centroid[j] - w[j]);
  };

  int it = 0;
  for (;; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return fv[i] < fv[j]; });
    const double best = fv[order[0]];
    const double worst = fv[order[n]];
    if (worst - best < f_tol || (std::isinf(best) && best == worst)) {
      res.converged = std::isfinite(best) || best == worst;
      break;
    }
    if (it >= max_iters) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[order[k]][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    along(xr, 1.0);
    const double fr = safe_eval(f, xr);
    const double second_worst = fv[order[n - 1]];
    const std::size_t w = order[n];
    if (fr < best) {
      along(xe, 2.0);
      const double fe = safe_eval(f, xe);
      if (fe < fr) {
        pts[w] = xe;
        fv[w] = fe;
      } else {
        pts[w] = xr;
        fv[w] = fr;
      }
      continue;
    }
    if (fr < second_worst) {
      pts[w] = xr;
      fv[w] = fr;
      continue;
    }
    if (fr < worst) {
      along(xc, 0.5);
      const double fc = safe_eval(f, xc);
      if (fc <= fr) {
        pts[w] = xc;
        fv[w] = fc;
        continue;
      }
    } else {
      along(xc, -0.5);
      const double fc = safe_eval(f, xc);
      if (fc < worst) {
        pts[w] = xc;
        fv[w] = fc;
        continue;
      }
    }
    // Shrink toward the best vertex.
    const auto& xb = pts[order[0]];
    for (std::size_t k = 1; k <= n; ++k) {
      auto& p = pts[order[k]];
      for (std::size_t j = 0; j < n; ++j) p[j] = xb[j] + 0.5 * (p[j] - xb[j]);
      fv[order[k]] = safe_eval(f, p);
    }
  }
  const std::size_t b = static_cast<std::size_t>(
      std::min_element(fv.begin(), fv.end()) - fv.begin());
  res.x = pts[b];
  res.f = fv[b];
  res.iterations = it;
  return res;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const NelderMeadOptions& opts) {
  if (opts.max_iters < 1) throw UsageError("max_iters must be >= 1");
  if (!(opts.f_tol > 0.0)) throw UsageError("f_tol must be positive");
  NelderMeadResult best =
      nelder_mead_run(objective, x0, opts.initial_step, opts.max_iters, opts.f_tol);
  int total_iters = best.iterations;
  bool any_converged = best.converged;
  for (int k = 1; k <= opts.restarts; ++k) {
    Rng rng = Rng::stream(opts.seed, static_cast<std::uint64_t>(k));
    std::vector<double> start = best.x;
    for (double& v : start) v += opts.jitter * opts.initial_step * rng.normal();
    NelderMeadResult run =
        nelder_mead_run(objective, start, opts.initial_step, opts.max_iters, opts.f_tol);
    total_iters += run.iterations;
    any_converged = any_converged || run.converged;
    if (run.f < best.f) best = std::move(run);
  }
  best.iterations = total_iters;
  best.converged = any_converged;
  return best;
}

// --- fitting -------------------------------------------------------------------

namespace {

enum class Transform { log, logit };

double forward(Transform t, double v) {
  if (t == Transform::log) return std::log(v);
  return std::log(v / (1.0 - v));
}

double backward(Transform t, double u) {
  if (t == Transform::log) return std::exp(u);
  // Keep strictly inside [0, 1): logistic(u) rounds to 1 for u > ~37.
  const double v = 1.0 / (1.0 + std::exp(-u));
  return std::min(v, 1.0 - 1e-12);
}

std::vector<Transform> transforms(Model m) {
  switch (m) {
    case Model::gpd: return {Transform::log, Transform::logit, Transform::logit};
    case Model::gurland: return {Transform::log, Transform::log, Transform::log};
    case Model::ggd: return std::vector<Transform>(5, Transform::log);
  }
  return {};
}

// Moment-matched starting point in natural parameters.
std::vector<double> initial_values(Model m, const CountData& data) {
  const double mean = std::max(data.mean(), 1e-3);
  const double var = data.variance();
  switch (m) {
    case Model::gpd: {
      double l2 = var > mean ? 1.0 - std::sqrt(mean / var) : 0.05;
      l2 = std::clamp(l2, 0.01, 0.9);
      return {std::max(mean * (1.0 - l2), 1e-3), l2, 1e-3};
    }
    case Model::gurland:
      return {1.0, 1.0, 2.0 * mean};
    case Model::ggd:
      return {2.0 * mean, 0.05, 1e-3, 1.0, 1.0};
  }
  return {};
}

}  // namespace

void FitOptions::validate() const {
  const auto& names = parameter_names(model);
  for (const auto& [name, value] : fixed) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw UsageError("parameter '" + name + "' does not exist in model " +
                       to_string(model));
    }
    if (!std::isfinite(value)) throw UsageError("pinned value for '" + name + "' is not finite");
  }
  if (max_iters < 1) throw UsageError("max_iters must be >= 1");
  if (!(f_tol > 0.0)) throw UsageError("f_tol must be positive");
  if (restarts < 0) throw UsageError("restarts must be >= 0");
  table_ctl.validate();
}

FitResult fit_mle(const CountData& data, const FitOptions& opts) {
  if (data.size() == 0) throw UsageError("cannot fit an empty data set");
  opts.validate();

  const Model m = opts.model;
  const auto& names = parameter_names(m);
  const std::vector<Transform> tr = transforms(m);
  std::vector<double> natural = initial_values(m, data);
  std::vector<std::size_t> free_idx;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (const auto it = opts.fixed.find(names[i]); it != opts.fixed.end()) {
      natural[i] = it->second;
    } else {
      free_idx.push_back(i);
    }
  }
  // Pins must describe a valid parameter point on their own.
  validate(make_params(m, natural));

  const auto assemble = [&](std::span<const double> u) {
    std::vector<double> v = natural;
    for (std::size_t k = 0; k < free_idx.size(); ++k) {
      v[free_idx[k]] = backward(tr[free_idx[k]], u[k]);
    }
    return make_params(m, v);
  };

  const Objective objective = [&](std::span<const double> u) {
    try {
      return neg_log_likelihood(assemble(u), data, opts.table_ctl);
    } catch (const DomainError&) {
      return kNormalizerPenalty;
    }
  };

  std::vector<double> u0;
  for (std::size_t i : free_idx) u0.push_back(forward(tr[i], natural[i]));

  NelderMeadOptions nm;
  nm.max_iters = opts.max_iters;
  nm.f_tol = opts.f_tol;
  nm.restarts = opts.restarts;
  nm.seed = opts.seed;
  nm.initial_step = 0.5;
  nm.jitter = 0.2;
  const NelderMeadResult best = nelder_mead(objective, u0, nm);

  FitResult r;
  r.params = assemble(best.x);
  const LikelihoodEval eval = evaluate_neg_log_likelihood(r.params, data, opts.table_ctl);
  r.log_likelihood = -eval.value;
  r.objective_history_final = best.f;
  r.iterations = best.iterations;
  r.converged = best.converged;
  r.penalized = eval.penalized_points > 0 || eval.normalization_failed;
  return r;
}

}  // namespace ggd
