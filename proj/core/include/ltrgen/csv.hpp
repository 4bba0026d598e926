#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ltrgen {

/// Quotes a field when it contains a comma, quote, CR or LF (RFC 4180).
std::string csv_escape(const std::string& field);

/// "%.10g"; non-finite values print as nan/inf.
std::string format_real(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void write_row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

}  // namespace ltrgen
