#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "cli/format.hpp"
#include "ggd/errors.hpp"
#include "ggd/fit.hpp"
#include "ggd/gpd.hpp"
#include "ggd/mixtures.hpp"
#include "ggd/oracle.hpp"

namespace ggd::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kAllParamNames{"lambda1", "lambda2", "lambda3", "rate", "delta",
                                              "theta",   "phi",     "a",       "b"};

struct DistFlags {
  std::string dist;
  std::map<std::string, std::optional<double>> values;

  void attach(CLI::App* app) {
    app->add_option("--dist", dist, "Distribution: gpd, gurland or ggd")->required();
    for (const auto& name : kAllParamNames) {
      app->add_option("--" + name, values[name], "Parameter " + name);
    }
  }

  ModelParams params() const {
    const Model m = parse_model(dist);
    const auto& names = parameter_names(m);
    std::vector<double> v;
    for (const auto& name : names) {
      const auto& opt = values.at(name);
      if (!opt) throw UsageError("--" + name + " is required for --dist " + dist);
      v.push_back(*opt);
    }
    for (const auto& [name, opt] : values) {
      if (opt && std::find(names.begin(), names.end(), name) == names.end()) {
        throw UsageError("--" + name + " does not apply to --dist " + dist);
      }
    }
    ModelParams p = make_params(m, v);
    std::visit([](const auto& q) { q.validate(); }, p);
    return p;
  }
};

double log_pmf_of(const ModelParams& p, std::uint64_t x) {
  if (const auto* g = std::get_if<GpdParams>(&p)) return gpd_log_pmf(*g, x);
  if (const auto* g = std::get_if<GurlandParams>(&p)) return gurland_log_pmf(*g, x);
  return ggd_log_pmf(std::get<GgdParams>(p), x);
}

PmfTable table_of(const ModelParams& p, const SeriesControl& ctl) {
  if (const auto* g = std::get_if<GpdParams>(&p)) return gpd_pmf_table(*g, ctl);
  if (const auto* g = std::get_if<GurlandParams>(&p)) return gurland_pmf_table(*g, ctl);
  return ggd_pmf_table(std::get<GgdParams>(p), ctl);
}

struct FormulaMoments {
  double mean;
  double m2;
  bool exact;
};

FormulaMoments formula_moments(const ModelParams& p) {
  if (const auto* g = std::get_if<GpdParams>(&p)) {
    return {gpd_mean_formula(*g), gpd_second_moment_formula(*g), g->lambda3 == 0.0};
  }
  if (const auto* g = std::get_if<GurlandParams>(&p)) {
    const double mean = gurland_mean(*g);
    return {mean, gurland_variance(*g) + mean * mean, true};
  }
  const auto& g = std::get<GgdParams>(p);
  return {ggd_mean_formula(g), ggd_second_moment_formula(g), g.phi == 0.0};
}

std::vector<std::uint64_t> sample_of(const ModelParams& p, std::uint64_t seed, std::size_t n,
                                     bool exact) {
  const SamplerMode mode = exact ? SamplerMode::exact : SamplerMode::cached;
  if (const auto* g = std::get_if<GpdParams>(&p)) return gpd_sample(*g, seed, n);
  if (const auto* g = std::get_if<GurlandParams>(&p)) return gurland_sample(*g, seed, n, mode);
  return ggd_sample(std::get<GgdParams>(p), seed, n, mode);
}

SeriesControl table_control(double rel_tol) {
  SeriesControl ctl;
  ctl.rel_tol = rel_tol;
  ctl.validate();
  return ctl;
}

// --- pmf -------------------------------------------------------------------

struct PmfCmd {
  DistFlags dist;
  std::uint64_t xmax = 0;
  std::string format = "csv";

  int run(std::ostream& out) const {
    const ModelParams p = dist.params();
    std::vector<double> lp(xmax + 1);
    for (std::uint64_t x = 0; x <= xmax; ++x) lp[x] = log_pmf_of(p, x);
    double cumulative = 0.0;
    for (double v : lp) cumulative += std::exp(v);

    if (parse_format(format) == Format::csv) {
      CsvWriter w(out);
      w.row({"x", "pmf", "log_pmf"});
      for (std::uint64_t x = 0; x <= xmax; ++x) {
        w.row({std::to_string(x), format_double(std::exp(lp[x])), format_double(lp[x])});
      }
      w.row({"total", format_double(cumulative), format_double(std::log(cumulative))});
      return kExitOk;
    }
    json rows = json::array();
    for (std::uint64_t x = 0; x <= xmax; ++x) {
      rows.push_back({{"x", x}, {"pmf", std::exp(lp[x])}, {"log_pmf", lp[x]}});
    }
    write_json(out, {{"command", "pmf"},
                     {"dist", dist.dist},
                     {"params", params_json(p)},
                     {"xmax", xmax},
                     {"rows", rows},
                     {"cumulative_mass", cumulative}});
    return kExitOk;
  }
};

// --- moments -----------------------------------------------------------------

struct MomentsCmd {
  DistFlags dist;
  std::string method = "both";
  double rel_tol = 1e-15;
  std::string format = "csv";

  int run(std::ostream& out) const {
    if (method != "formula" && method != "numeric" && method != "both") {
      throw UsageError("--method must be formula, numeric or both");
    }
    const Format fmt = parse_format(format);
    const ModelParams p = dist.params();
    std::vector<std::pair<std::string, json>> fields;
    const auto add = [&](const std::string& k, double v) { fields.emplace_back(k, v); };

    std::optional<FormulaMoments> f;
    if (method != "numeric") {
      f = formula_moments(p);
      add("mean_formula", f->mean);
      add("m2_formula", f->m2);
      add("variance_formula", f->m2 - f->mean * f->mean);
    }
    if (method != "formula") {
      const PmfTable t = table_of(p, table_control(rel_tol));
      const double mean = moments_from_table(t, 1);
      const double m2 = moments_from_table(t, 2);
      add("mean_numeric", mean);
      add("m2_numeric", m2);
      add("variance_numeric", m2 - mean * mean);
      add("table_mass", t.sum());
      fields.emplace_back("table_x_max", t.x_max);
      if (f) {
        const MomentReport r = MomentReport::make(f->mean, f->m2, mean, m2, f->exact);
        add("abs_diff_mean", r.abs_diff_mean);
        add("rel_diff_mean", r.rel_diff_mean);
        add("abs_diff_m2", r.abs_diff_m2);
        add("rel_diff_m2", r.rel_diff_m2);
      }
    }
    if (f) fields.emplace_back("exact_regime", f->exact);

    if (fmt == Format::csv) {
      CsvWriter w(out);
      w.row({"field", "value"});
      for (const auto& [k, v] : fields) {
        if (v.is_boolean()) {
          w.row({k, v.get<bool>() ? "true" : "false"});
        } else if (v.is_number_unsigned()) {
          w.row({k, std::to_string(v.get<std::uint64_t>())});
        } else {
          w.row({k, format_double(v.get<double>())});
        }
      }
      return kExitOk;
    }
    json j{{"command", "moments"},
           {"dist", dist.dist},
           {"params", params_json(p)},
           {"method", method}};
    json report = json::object();
    for (const auto& [k, v] : fields) report[k] = v;
    j["report"] = std::move(report);
    write_json(out, j);
    return kExitOk;
  }
};

// --- verify ------------------------------------------------------------------

template <typename T>
void read_field(const json& j, const char* key, T& dest) {
  if (j.contains(key)) dest = j.at(key).get<T>();
}

ParameterGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open grid file '" + path + "'");
  ParameterGrid grid;
  try {
    const json j = json::parse(in);
    if (!j.is_object()) throw UsageError("grid file must hold a JSON object");
    static const std::vector<std::string> known{
        "delta",          "theta",         "phi",           "a",
        "b",              "mixture_x_max", "recurrence_x_max", "poisson_x_max",
        "lambda1",        "lambda2",       "lambda3",       "sampler_params",
        "sampler_n",      "sampler_seed"};
    for (const auto& [k, v] : j.items()) {
      if (std::find(known.begin(), known.end(), k) == known.end()) {
        throw UsageError("unknown grid key '" + k + "'");
      }
    }
    read_field(j, "delta", grid.delta);
    read_field(j, "theta", grid.theta);
    read_field(j, "phi", grid.phi);
    read_field(j, "a", grid.a);
    read_field(j, "b", grid.b);
    read_field(j, "mixture_x_max", grid.mixture_x_max);
    read_field(j, "recurrence_x_max", grid.recurrence_x_max);
    read_field(j, "poisson_x_max", grid.poisson_x_max);
    read_field(j, "lambda1", grid.lambda1);
    read_field(j, "lambda2", grid.lambda2);
    read_field(j, "lambda3", grid.lambda3);
    read_field(j, "sampler_n", grid.sampler_n);
    read_field(j, "sampler_seed", grid.sampler_seed);
    if (j.contains("sampler_params")) {
      grid.sampler_params.clear();
      for (const auto& s : j.at("sampler_params")) {
        grid.sampler_params.push_back(GgdParams{s.at("delta").get<double>(),
                                                s.at("theta").get<double>(),
                                                s.at("phi").get<double>(),
                                                s.at("a").get<double>(),
                                                s.at("b").get<double>()});
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed grid file: ") + e.what());
  }
  return grid;
}

struct VerifyCmd {
  std::vector<std::string> suites;
  std::string grid_path;
  bool details = false;
  std::string format = "csv";

  int run(std::ostream& out) const {
    const Format fmt = parse_format(format);
    const std::vector<std::string> names = suites.empty() ? suite_names() : suites;
    for (const auto& n : names) {
      const auto& all = suite_names();
      if (std::find(all.begin(), all.end(), n) == all.end()) {
        throw UsageError("unknown verification suite '" + n + "'");
      }
    }
    const ParameterGrid grid = grid_path.empty() ? ParameterGrid{} : load_grid(grid_path);
    std::vector<VerificationReport> reports;
    bool all_passed = true;
    for (const auto& n : names) {
      reports.push_back(verify_suite(n, grid));
      all_passed = all_passed && reports.back().passed;
    }

    if (fmt == Format::csv) {
      CsvWriter w(out);
      w.row({"suite", "passed", "max_rel_error", "threshold", "n_cases", "n_diagnostics"});
      for (const auto& r : reports) {
        w.row({r.suite, r.passed ? "true" : "false", format_double(r.max_rel_error),
               format_double(r.threshold), std::to_string(r.cases.size()),
               std::to_string(r.diagnostics.size())});
      }
    } else {
      json arr = json::array();
      for (const auto& r : reports) arr.push_back(report_json(r, details));
      write_json(out, {{"command", "verify"}, {"passed", all_passed}, {"reports", arr}});
    }
    return all_passed ? kExitOk : kExitVerifyFailed;
  }
};

// --- sample ------------------------------------------------------------------

struct SampleCmd {
  DistFlags dist;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool exact = false;
  std::string format = "csv";

  int run(std::ostream& out) const {
    const Format fmt = parse_format(format);
    const ModelParams p = dist.params();
    const std::vector<std::uint64_t> draws = sample_of(p, seed, n, exact);
    if (fmt == Format::csv) {
      std::string buf = "x\n";
      for (std::uint64_t v : draws) {
        buf += std::to_string(v);
        buf += '\n';
      }
      out << buf;
      return kExitOk;
    }
    write_json(out, {{"command", "sample"},
                     {"dist", dist.dist},
                     {"params", params_json(p)},
                     {"n", n},
                     {"seed", seed},
                     {"sampler", exact ? "exact" : "cached"},
                     {"samples", draws}});
    return kExitOk;
  }
};

// --- fit -------------------------------------------------------------------------

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_count(const std::string& field, std::size_t line) {
  const std::string s = trim(field);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("line " + std::to_string(line) + ": '" + s +
                     "' is not a nonnegative integer");
  }
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

CountData read_counts(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  for (auto& h : header) h = trim(h);
  const bool single = header == std::vector<std::string>{"count"};
  const bool pairs = header == std::vector<std::string>{"x", "freq"};
  if (!single && !pairs) {
    throw UsageError("input header must be 'count' or 'x,freq'");
  }
  std::vector<std::uint64_t> counts;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> hist;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw UsageError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " field(s)");
    }
    if (single) {
      counts.push_back(parse_count(fields[0], lineno));
    } else {
      const std::uint64_t freq = parse_count(fields[1], lineno);
      if (freq == 0) {
        throw UsageError("line " + std::to_string(lineno) + ": frequency must be positive");
      }
      hist.emplace_back(parse_count(fields[0], lineno), freq);
    }
  }
  CountData d = single ? CountData::from_counts(counts) : CountData::from_histogram(hist);
  if (d.size() == 0) throw UsageError("input holds no observations");
  return d;
}

struct FitCmd {
  std::string input;
  std::string model = "ggd";
  std::vector<std::string> fix;
  int restarts = 3;
  int max_iters = 2000;
  double f_tol = 1e-9;
  std::uint64_t seed = 0;
  std::string format = "csv";

  int run(std::ostream& out) const {
    const Format fmt = parse_format(format);
    FitOptions opts;
    opts.model = parse_model(model);
    opts.restarts = restarts;
    opts.max_iters = max_iters;
    opts.f_tol = f_tol;
    opts.seed = seed;
    for (const auto& pin : fix) {
      const auto eq = pin.find('=');
      if (eq == std::string::npos) throw UsageError("--fix expects name=value, got '" + pin + "'");
      const std::string name = trim(pin.substr(0, eq));
      const std::string value = trim(pin.substr(eq + 1));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
        throw UsageError("--fix value for '" + name + "' is not a number");
      }
      opts.fixed[name] = v;
    }
    opts.validate();

    CountData data;
    if (input == "-") {
      data = read_counts(std::cin);
    } else {
      std::ifstream in(input);
      if (!in) throw UsageError("cannot open input file '" + input + "'");
      data = read_counts(in);
    }

    const FitResult r = fit_mle(data, opts);
    const auto& names = parameter_names(opts.model);
    const std::vector<double> values = parameter_values(r.params);
    if (fmt == Format::csv) {
      CsvWriter w(out);
      w.row({"field", "value"});
      w.row({"model", to_string(opts.model)});
      for (std::size_t i = 0; i < names.size(); ++i) w.row({names[i], format_double(values[i])});
      w.row({"log_likelihood", format_double(r.log_likelihood)});
      w.row({"iterations", std::to_string(r.iterations)});
      w.row({"converged", r.converged ? "true" : "false"});
      w.row({"objective_history_final", format_double(r.objective_history_final)});
      w.row({"penalized", r.penalized ? "true" : "false"});
      w.row({"n", std::to_string(data.size())});
    } else {
      json fixed = json::object();
      for (const auto& [k, v] : opts.fixed) fixed[k] = v;
      write_json(out, {{"command", "fit"},
                       {"model", to_string(opts.model)},
                       {"params", params_json(r.params)},
                       {"fixed", fixed},
                       {"log_likelihood", r.log_likelihood},
                       {"iterations", r.iterations},
                       {"converged", r.converged},
                       {"objective_history_final", r.objective_history_final},
                       {"penalized", r.penalized},
                       {"n", data.size()}});
    }
    return r.converged ? kExitOk : kExitNumeric;
  }
};

void add_format(CLI::App* app, std::string& format) {
  app->add_option("--format", format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Gurland and generalized Poisson count distributions", "ggd-cli"};
  app.require_subcommand(1);

  PmfCmd pmf;
  auto* pmf_app = app.add_subcommand("pmf", "Tabulate the probability mass function");
  pmf.dist.attach(pmf_app);
  pmf_app->add_option("--xmax", pmf.xmax, "Largest x to tabulate")->required();
  add_format(pmf_app, pmf.format);

  MomentsCmd moments;
  auto* moments_app = app.add_subcommand("moments", "Formula and numeric moments");
  moments.dist.attach(moments_app);
  moments_app->add_option("--method", moments.method, "formula, numeric or both")
      ->check(CLI::IsMember({"formula", "numeric", "both"}));
  moments_app->add_option("--rel-tol", moments.rel_tol, "Table truncation tolerance");
  add_format(moments_app, moments.format);

  VerifyCmd verify;
  auto* verify_app = app.add_subcommand("verify", "Run verification suites");
  verify_app->add_option("--suite", verify.suites, "Suite name (repeatable; default all)");
  verify_app->add_option("--grid", verify.grid_path, "JSON parameter grid");
  verify_app->add_flag("--details", verify.details, "Include every case in JSON output");
  add_format(verify_app, verify.format);

  SampleCmd sample;
  auto* sample_app = app.add_subcommand("sample", "Draw seeded samples");
  sample.dist.attach(sample_app);
  sample_app->add_option("--n", sample.n, "Number of draws")->required();
  sample_app->add_option("--seed", sample.seed, "Seed");
  sample_app->add_flag("--exact", sample.exact, "Fresh conditional table per draw");
  add_format(sample_app, sample.format);

  FitCmd fit;
  auto* fit_app = app.add_subcommand("fit", "Maximum-likelihood fit to count data");
  fit_app->add_option("--input", fit.input, "CSV with a count column or x,freq ('-' = stdin)")
      ->required();
  fit_app->add_option("--model", fit.model, "gpd, gurland or ggd");
  fit_app->add_option("--fix", fit.fix, "Pin a parameter: name=value (repeatable)");
  fit_app->add_option("--restarts", fit.restarts, "Jittered restarts");
  fit_app->add_option("--max-iters", fit.max_iters, "Simplex iterations per run");
  fit_app->add_option("--f-tol", fit.f_tol, "Simplex f-spread tolerance");
  fit_app->add_option("--seed", fit.seed, "Restart seed");
  add_format(fit_app, fit.format);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (pmf_app->parsed()) return pmf.run(out);
    if (moments_app->parsed()) return moments.run(out);
    if (verify_app->parsed()) return verify.run(out);
    if (sample_app->parsed()) return sample.run(out);
    if (fit_app->parsed()) return fit.run(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ConvergenceError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace ggd::cli
