#include "rim/dsv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rim {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

DsvWriter::DsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void DsvWriter::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) {
    throw std::invalid_argument("dsv row width does not match header");
  }
  rows_.push_back(values);
}

std::string DsvWriter::to_string() const {
  std::string out = "# ";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void DsvWriter::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << to_string();
}

}  // namespace rim
