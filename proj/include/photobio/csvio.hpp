#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "photobio/config.hpp"

namespace photobio {

/// Row-oriented table writer: CSV with a header line, or NDJSON with one
/// object per row.  Numbers carry 9 significant digits.
class TableWriter {
 public:
  TableWriter(const std::string& path, OutputFormat fmt, std::vector<std::string> columns);
  ~TableWriter();

  using Cell = std::variant<double, long long, std::string>;
  void row(const std::vector<Cell>& cells);
  void comment(const std::string& text);  // CSV comment line / NDJSON note object

  static std::string format_number(double v);

 private:
  std::ofstream out_;
  OutputFormat fmt_;
  std::vector<std::string> columns_;
};

std::string branch_name(Branch b);

}  // namespace photobio
