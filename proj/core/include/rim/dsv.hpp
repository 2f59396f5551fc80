#pragma once

#include <string>
#include <vector>

namespace rim {

/// Writer for the delimiter-separated result files: a '#'-prefixed header
/// line names the columns (units encoded in the names), every following
/// line carries one comma-separated row. Numeric formatting is fixed at
/// %.12g so identical inputs produce byte-identical files.
class DsvWriter {
 public:
  explicit DsvWriter(std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  void write(const std::string& path) const;
  std::string to_string() const;
  std::size_t num_rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

std::string format_double(double v);

}  // namespace rim
