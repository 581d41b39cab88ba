#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "clfmetrics/confusion.hpp"
#include "clfmetrics/error.hpp"
#include "clfmetrics/metrics.hpp"
#include "clfmetrics/proba.hpp"

namespace clfmetrics {

struct CsvOptions {
  char delimiter = ',';
  bool has_header = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(delim, start);
    fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

/// Line reader yielding (1-based line number, fields); skips blank lines,
/// strips CR and a leading UTF-8 BOM.
class CsvReader {
 public:
  CsvReader(const std::string& path, char delimiter) : in_(path), delim_(delimiter) {
    if (!in_) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  }

  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      std::string_view view = line_;
      if (line_no_ == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
      if (trim(view).empty()) continue;
      fields = split(view, delim_);
      return true;
    }
    if (in_.bad()) throw Error(ErrorCode::IoError, "read failure", line_no_);
    return false;
  }

  std::size_t line() const { return line_no_; }

 private:
  std::ifstream in_;
  char delim_;
  std::string line_;
  std::size_t line_no_ = 0;
};

inline double parse_real(std::string_view s, std::size_t line, std::size_t column) {
  double v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorCode::ParseError, "expected a number, got '" + std::string(s) + "'", line, column);
  return v;
}

inline Count parse_count(std::string_view s, std::size_t line, std::size_t column) {
  if (!s.empty() && s.front() == '-' && s.size() > 1 &&
      s.find_first_not_of("0123456789", 1) == std::string_view::npos)
    throw Error(ErrorCode::NegativeEntry, "negative count " + std::string(s), line, column);
  Count v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorCode::ParseError, "expected a non-negative integer, got '" + std::string(s) + "'",
                line, column);
  return v;
}

}  // namespace detail

/// Calls `sink(actual, predicted)` for every data row, in file order.
/// Returns the number of rows delivered.
inline std::size_t for_each_label_pair(
    const std::string& path, const CsvOptions& options,
    const std::function<void(const std::string&, const std::string&, std::size_t line)>& sink) {
  detail::CsvReader reader(path, options.delimiter);
  std::vector<std::string_view> fields;
  bool skip_header = options.has_header;
  std::size_t rows = 0;
  while (reader.next(fields)) {
    if (skip_header) {
      skip_header = false;
      continue;
    }
    if (fields.size() != 2)
      throw Error(ErrorCode::ParseError,
                  "expected 2 fields (actual, predicted), got " + std::to_string(fields.size()),
                  reader.line(), fields.size() < 2 ? fields.size() + 1 : 3);
    for (std::size_t c = 0; c < 2; ++c)
      if (fields[c].empty()) throw Error(ErrorCode::EmptyLabel, "empty label", reader.line(), c + 1);
    sink(std::string(fields[0]), std::string(fields[1]), reader.line());
    ++rows;
  }
  return rows;
}

inline std::vector<LabelPair> read_labels(const std::string& path, const CsvOptions& options = {}) {
  std::vector<LabelPair> pairs;
  for_each_label_pair(path, options, [&](const std::string& a, const std::string& p, std::size_t) {
    pairs.push_back({a, p});
  });
  return pairs;
}

/// Streams a label file straight into a confusion matrix; memory is
/// bounded by the number of distinct label combinations.
inline ConfusionMatrix tally_labels(const std::string& path, const CsvOptions& options = {},
                                    std::optional<ClassRegistry> registry = std::nullopt) {
  LabelTally tally = registry ? LabelTally(std::move(*registry)) : LabelTally();
  for_each_label_pair(path, options, [&](const std::string& a, const std::string& p, std::size_t line) {
    try {
      tally.add(a, p);
    } catch (const Error& e) {
      throw Error(e.code(), "unknown label in '" + a + "," + p + "'", line);
    }
  });
  if (tally.pairs() == 0 && !registry)
    throw Error(ErrorCode::EmptyInput, "'" + path + "' contains no label pairs");
  return tally.finish();
}

/// Reads the header of a probability file and streams validated records.
/// Returns the registry taken from the header.
inline ClassRegistry for_each_prob_record(const std::string& path, const CsvOptions& options,
                                          const std::function<void(ProbRecord&&)>& sink) {
  detail::CsvReader reader(path, options.delimiter);
  std::vector<std::string_view> fields;
  if (!reader.next(fields)) throw Error(ErrorCode::EmptyInput, "'" + path + "' has no header row");

  const std::size_t header_line = reader.line();
  std::vector<std::string> names;
  std::unordered_set<std::string> seen;
  for (std::size_t c = 1; c < fields.size(); ++c) {
    std::string name(fields[c]);
    if (name.empty()) throw Error(ErrorCode::EmptyLabel, "empty class name in header", header_line, c + 1);
    if (!seen.insert(name).second)
      throw Error(ErrorCode::DuplicateClass, "class '" + name + "' appears twice in header", header_line, c + 1);
    names.push_back(std::move(name));
  }
  if (names.size() < 2)
    throw Error(ErrorCode::ParseError, "header must name at least 2 classes", header_line);
  ClassRegistry registry(names);
  const std::size_t k = names.size();

  while (reader.next(fields)) {
    const std::size_t line = reader.line();
    if (fields.size() != k + 1)
      throw Error(ErrorCode::ParseError,
                  "expected " + std::to_string(k + 1) + " fields, got " + std::to_string(fields.size()), line,
                  std::min(fields.size(), k + 1) + 1);
    if (fields[0].empty()) throw Error(ErrorCode::EmptyLabel, "empty actual label", line, 1);
    auto actual = registry.find(std::string(fields[0]));
    if (!actual)
      throw Error(ErrorCode::UnknownActualLabel, "'" + std::string(fields[0]) + "' is not a header class", line, 1);

    ProbRecord r;
    r.true_class = *actual;
    r.probs.reserve(k);
    long double sum = 0;
    for (std::size_t c = 1; c <= k; ++c) {
      double p = detail::parse_real(fields[c], line, c + 1);
      if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::InvalidRecord, "probability " + std::string(fields[c]) + " outside [0,1]", line, c + 1);
      sum += p;
      r.probs.push_back(p);
    }
    if (std::abs(sum - 1.0L) > kProbSumTolerance)
      throw Error(ErrorCode::ProbSumOutOfTolerance,
                  "probabilities sum to " + std::to_string(static_cast<double>(sum)), line);
    sink(std::move(r));
  }
  return registry;
}

struct ProbData {
  ClassRegistry registry;
  std::vector<ProbRecord> records;
};

inline ProbData read_probs(const std::string& path, const CsvOptions& options = {}) {
  std::vector<ProbRecord> records;
  auto registry = for_each_prob_record(path, options, [&](ProbRecord&& r) { records.push_back(std::move(r)); });
  return {std::move(registry), std::move(records)};
}

/// Matrix file: header ",c1,...,cK", then rows "ci,n_i1,...,n_iK" with
/// actual classes down the side. Row names must repeat the header order.
inline ConfusionMatrix read_matrix(const std::string& path, char delimiter = ',') {
  detail::CsvReader reader(path, delimiter);
  std::vector<std::string_view> fields;
  if (!reader.next(fields)) throw Error(ErrorCode::EmptyInput, "'" + path + "' is empty");

  const std::size_t header_line = reader.line();
  std::vector<std::string> names;
  for (std::size_t c = 1; c < fields.size(); ++c) {
    if (fields[c].empty()) throw Error(ErrorCode::EmptyLabel, "empty class name in header", header_line, c + 1);
    names.emplace_back(fields[c]);
  }
  const std::size_t k = names.size();
  if (k < 2) throw Error(ErrorCode::NonSquare, "header must name at least 2 classes", header_line);

  std::vector<Count> counts;
  counts.reserve(k * k);
  std::size_t rows = 0;
  while (reader.next(fields)) {
    const std::size_t line = reader.line();
    if (rows == k) throw Error(ErrorCode::NonSquare, "more rows than header classes", line);
    if (fields.size() != k + 1)
      throw Error(ErrorCode::NonSquare,
                  "row has " + std::to_string(fields.size() - 1) + " cells, header has " + std::to_string(k), line);
    if (fields[0] != names[rows])
      throw Error(ErrorCode::NameMismatch,
                  "row class '" + std::string(fields[0]) + "' but header column " + std::to_string(rows + 1) +
                      " is '" + names[rows] + "'",
                  line, 1);
    for (std::size_t c = 1; c <= k; ++c) counts.push_back(detail::parse_count(fields[c], line, c + 1));
    ++rows;
  }
  if (rows != k)
    throw Error(ErrorCode::NonSquare, std::to_string(rows) + " rows for " + std::to_string(k) + " classes",
                reader.line());
  return {ClassRegistry(std::move(names)), std::move(counts)};
}

/// Two-column "class,weight" overrides applied on top of the actual-class
/// frequencies of `m`. A first row whose weight is not numeric is a header.
inline ClassWeights read_weights(const std::string& path, const ConfusionMatrix& m, char delimiter = ',') {
  ClassWeights weights = ClassWeights::frequencies(m);
  bool exact = true;
  detail::CsvReader reader(path, delimiter);
  std::vector<std::string_view> fields;
  bool first = true;
  while (reader.next(fields)) {
    const std::size_t line = reader.line();
    if (fields.size() != 2)
      throw Error(ErrorCode::ParseError, "expected 2 fields (class, weight)", line,
                  fields.size() < 2 ? fields.size() + 1 : 3);
    double w = 0;
    try {
      w = detail::parse_real(fields[1], line, 2);
    } catch (const Error&) {
      if (first) {
        first = false;
        continue;
      }
      throw;
    }
    first = false;
    auto k = m.registry().find(std::string(fields[0]));
    if (!k) throw Error(ErrorCode::UnknownLabel, "'" + std::string(fields[0]) + "' is not a class", line, 1);
    if (!std::isfinite(w) || w < 0) throw Error(ErrorCode::InvalidWeights, "negative or non-finite weight", line, 2);
    weights.values[*k] = w;
    exact = false;
  }
  if (!exact) weights.exact.reset();
  weights.validate(m.size());
  return weights;
}

}  // namespace clfmetrics
