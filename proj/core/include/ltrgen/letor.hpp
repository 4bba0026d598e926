#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltrgen/types.hpp"

namespace ltrgen {

/// One document line: "<rel> qid:<id> <idx>:<val> ... [# comment]".
struct LetorRecord {
  int relevance = 0;
  std::string query_id;
  std::map<std::size_t, double> features;  // 1-based indices
};

class LetorParseError : public std::runtime_error {
 public:
  LetorParseError(std::size_t line, const std::string& message);
  /// 1-based line number of the offending line (0 for whole-file errors).
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LetorData {
  Dataset dataset;
  std::vector<std::string> query_ids;  // one per query, in dataset order
};

/// Parses a single line; returns false for blank and comment-only lines.
bool parse_letor_line(const std::string& line, std::size_t line_number, LetorRecord& out);

/// Groups documents by qid in order of first appearance; d is the largest
/// feature index in the file and missing features are 0.
LetorData parse_letor(std::istream& in);
LetorData parse_letor_string(const std::string& text);

/// Integer relevance, qid per query (1-based unless ids are given), every
/// feature in ascending index order with 9 significant digits.
void serialize_letor(std::ostream& out, const Dataset& data,
                     const std::vector<std::string>& query_ids = {});
std::string serialize_letor_string(const Dataset& data, const std::vector<std::string>& query_ids = {});

}  // namespace ltrgen
