#include "ltrgen/letor.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

namespace ltrgen {

LetorParseError::LetorParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

namespace {

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_real(std::string_view text, double& out) {
  // from_chars rejects a leading '+'; accept it for robustness.
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  return parse_number(text, out) && std::isfinite(out);
}

}  // namespace

bool parse_letor_line(const std::string& raw, std::size_t line_number, LetorRecord& out) {
  std::string_view line(raw);
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  if (tokens.empty()) return false;
  if (tokens.size() < 2) throw LetorParseError(line_number, "expected '<rel> qid:<id> ...'");

  out = LetorRecord{};
  if (!parse_number(tokens[0], out.relevance) || out.relevance < 0) {
    throw LetorParseError(line_number, "relevance '" + std::string(tokens[0]) + "' is not a nonnegative integer");
  }
  if (tokens[1].substr(0, 4) != "qid:" || tokens[1].size() == 4) {
    throw LetorParseError(line_number, "expected 'qid:<id>' but found '" + std::string(tokens[1]) + "'");
  }
  out.query_id = std::string(tokens[1].substr(4));
  for (std::size_t t = 2; t < tokens.size(); ++t) {
    const auto tok = tokens[t];
    const auto colon = tok.find(':');
    std::size_t index = 0;
    double value = 0.0;
    if (colon == std::string_view::npos || !parse_number(tok.substr(0, colon), index) || index < 1 ||
        !parse_real(tok.substr(colon + 1), value)) {
      throw LetorParseError(line_number, "malformed feature token '" + std::string(tok) + "'");
    }
    if (!out.features.emplace(index, value).second) {
      throw LetorParseError(line_number, "duplicate feature index " + std::to_string(index));
    }
  }
  return true;
}

LetorData parse_letor(std::istream& in) {
  std::vector<LetorRecord> records;
  std::string line;
  std::size_t line_number = 0;
  std::size_t d = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    LetorRecord rec;
    if (!parse_letor_line(line, line_number, rec)) continue;
    if (!rec.features.empty()) d = std::max(d, rec.features.rbegin()->first);
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw LetorParseError(0, "no records in input");
  if (d == 0) throw LetorParseError(0, "no features in input");

  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> group_of;
  std::vector<std::vector<const LetorRecord*>> groups;
  for (const auto& rec : records) {
    auto [it, inserted] = group_of.emplace(rec.query_id, groups.size());
    if (inserted) {
      groups.emplace_back();
      ids.push_back(rec.query_id);
    }
    groups[it->second].push_back(&rec);
  }
  std::vector<QueryInstance> queries;
  queries.reserve(groups.size());
  for (const auto& g : groups) {
    Matrix x(g.size(), d);
    Vector y(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      y[j] = g[j]->relevance;
      for (const auto& [idx, val] : g[j]->features) x(j, idx - 1) = val;
    }
    queries.emplace_back(std::move(x), std::move(y));
  }
  return {Dataset(std::move(queries)), std::move(ids)};
}

LetorData parse_letor_string(const std::string& text) {
  std::istringstream in(text);
  return parse_letor(in);
}

void serialize_letor(std::ostream& out, const Dataset& data, const std::vector<std::string>& query_ids) {
  if (!query_ids.empty() && query_ids.size() != data.size()) {
    throw ShapeError("serialize_letor: query_ids has " + std::to_string(query_ids.size()) +
                     " entries for " + std::to_string(data.size()) + " queries");
  }
  char buf[64];
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& q = data[i];
    const std::string qid = query_ids.empty() ? std::to_string(i + 1) : query_ids[i];
    for (std::size_t j = 0; j < q.num_docs(); ++j) {
      const double rel = q.labels()[j];
      if (rel < 0.0 || rel != std::floor(rel)) {
        throw std::invalid_argument("serialize_letor: relevance must be a nonnegative integer");
      }
      out << static_cast<long long>(rel) << " qid:" << qid;
      for (std::size_t k = 0; k < q.dim(); ++k) {
        std::snprintf(buf, sizeof buf, "%.9g", q.features()(j, k));
        out << ' ' << (k + 1) << ':' << buf;
      }
      out << '\n';
    }
  }
}

std::string serialize_letor_string(const Dataset& data, const std::vector<std::string>& query_ids) {
  std::ostringstream out;
  serialize_letor(out, data, query_ids);
  return out.str();
}

}  // namespace ltrgen
