#include "cli/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ggd/errors.hpp"

namespace ggd::cli {

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw UsageError("unknown format '" + s + "' (expected csv or json)");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out_ << f;
      continue;
    }
    out_ << '"';
    for (char c : f) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  out_ << '\n';
}

nlohmann::json params_json(const ModelParams& p) {
  nlohmann::json j = nlohmann::json::object();
  const auto& names = parameter_names(model_of(p));
  const std::vector<double> values = parameter_values(p);
  for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = values[i];
  return j;
}

nlohmann::json case_json(const VerificationCase& c) {
  return {{"inputs", c.inputs},
          {"expected_source", c.expected_source},
          {"got", c.got},
          {"reference", c.reference},
          {"rel_error", c.rel_error}};
}

nlohmann::json report_json(const VerificationReport& r, bool details) {
  nlohmann::json j{{"suite", r.suite},
                   {"passed", r.passed},
                   {"max_rel_error", r.max_rel_error},
                   {"threshold", r.threshold},
                   {"n_cases", r.cases.size()},
                   {"n_diagnostics", r.diagnostics.size()}};
  const auto worst = std::max_element(
      r.cases.begin(), r.cases.end(), [](const VerificationCase& x, const VerificationCase& y) {
        // NaN sorts last so that a failed evaluation is what gets shown.
        if (std::isnan(x.rel_error)) return false;
        if (std::isnan(y.rel_error)) return true;
        return x.rel_error < y.rel_error;
      });
  j["worst_case"] = worst == r.cases.end() ? nlohmann::json(nullptr) : case_json(*worst);
  nlohmann::json diags = nlohmann::json::array();
  for (const auto& c : r.diagnostics) diags.push_back(case_json(c));
  j["diagnostics"] = std::move(diags);
  if (details) {
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : r.cases) cases.push_back(case_json(c));
    j["cases"] = std::move(cases);
  }
  return j;
}

void write_json(std::ostream& out, const nlohmann::json& j) {
  out << j.dump(2) << '\n';
}

}  // namespace ggd::cli
