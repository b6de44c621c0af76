#include "photobio/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace photobio {

std::string TableWriter::format_number(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

TableWriter::TableWriter(const std::string& path, OutputFormat fmt,
                         std::vector<std::string> columns)
    : out_(path), fmt_(fmt), columns_(std::move(columns)) {
  if (!out_) throw std::runtime_error("cannot open output file '" + path + "'");
  if (fmt_ == OutputFormat::Csv) {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      out_ << (i ? "," : "") << columns_[i];
    out_ << "\n";
  }
}

TableWriter::~TableWriter() = default;

void TableWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_.size())
    throw std::logic_error("TableWriter: cell count does not match header");
  if (fmt_ == OutputFormat::Csv) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      if (std::holds_alternative<double>(cells[i]))
        out_ << format_number(std::get<double>(cells[i]));
      else if (std::holds_alternative<long long>(cells[i]))
        out_ << std::get<long long>(cells[i]);
      else
        out_ << std::get<std::string>(cells[i]);
    }
    out_ << "\n";
  } else {
    out_ << "{";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << "\"" << columns_[i] << "\":";
      if (std::holds_alternative<double>(cells[i])) {
        const double v = std::get<double>(cells[i]);
        out_ << (std::isfinite(v) ? format_number(v) : "null");
      } else if (std::holds_alternative<long long>(cells[i])) {
        out_ << std::get<long long>(cells[i]);
      } else {
        out_ << "\"" << std::get<std::string>(cells[i]) << "\"";
      }
    }
    out_ << "}\n";
  }
}

void TableWriter::comment(const std::string& text) {
  if (fmt_ == OutputFormat::Csv)
    out_ << "# " << text << "\n";
  else
    out_ << "{\"note\":\"" << text << "\"}\n";
}

std::string branch_name(Branch b) {
  return b == Branch::Stationary ? "stationary" : "oscillatory";
}

}  // namespace photobio
