#include "revpipe/csv.hpp"

#include <cmath>
#include <cstdio>

#include "revpipe/error.hpp"

namespace revpipe::csv {

std::string fmt(double value, int decimals) {
  if (std::isnan(value)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string fmt_opt(std::optional<double> value, int decimals) {
  return value ? fmt(*value, decimals) : "";
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

Writer::Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
  if (!out_) {
    throw PipelineError(ErrorKind::MissingFile, "cannot open for writing: " + path.string());
  }
}

void Writer::header(const std::vector<std::string>& names) { row(names); }

void Writer::row(const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << escape(fields[i]);
  }
  out_ << '\n';
}

}  // namespace revpipe::csv
