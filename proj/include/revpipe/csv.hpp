#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace revpipe::csv {

// Fixed-precision decimal rendering so report files are byte-stable.
std::string fmt(double value, int decimals = 6);
std::string fmt_opt(std::optional<double> value, int decimals = 6);

std::string escape(const std::string& field);

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);

  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
};

}  // namespace revpipe::csv
