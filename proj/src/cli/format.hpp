#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ggd/fit.hpp"
#include "ggd/gpd.hpp"
#include "ggd/oracle.hpp"

namespace ggd::cli {

enum class Format { csv, json };

Format parse_format(const std::string& s);

// %.17g, with inf, -inf and nan spelled out.
std::string format_double(double v);

// RFC 4180 quoting, '\n' line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

nlohmann::json params_json(const ModelParams& p);
nlohmann::json case_json(const VerificationCase& c);
nlohmann::json report_json(const VerificationReport& r, bool details);

// Single top-level object, two-space indent, trailing newline.
void write_json(std::ostream& out, const nlohmann::json& j);

}  // namespace ggd::cli
