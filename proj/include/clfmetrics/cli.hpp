#pragma once

#include <optional>
#include <string>

#include "clfmetrics/format.hpp"
#include "clfmetrics/ingest.hpp"
#include "clfmetrics/report.hpp"

namespace clfmetrics::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kUsageError = 3,
};

enum class InputKind { Labels, Probs, Matrix };

struct Input {
  std::string path;
  InputKind kind = InputKind::Matrix;
};

struct Flags {
  Format format = Format::Text;
  std::optional<std::string> weights_path;
  bool lenient = false;
  Reduce reduce = Reduce::Mean;
  double epsilon = 1e-15;
  char delimiter = ',';
  bool has_header = false;
  bool color = false;
};

struct Result {
  int exit_code = kSuccess;
  std::string out;
  std::string err;
};

/// Loads one input and evaluates it. Probability inputs report the
/// cross-entropy next to the metrics of their argmax-hardened matrix.
inline EvaluationReport build_report(const Input& input, const Flags& flags) {
  XentOptions xent{flags.epsilon, flags.reduce};
  xent.validate();
  CsvOptions csv{flags.delimiter, flags.has_header};

  std::optional<ConfusionMatrix> matrix;
  std::optional<double> cross_entropy;
  switch (input.kind) {
    case InputKind::Labels:
      matrix = tally_labels(input.path, csv);
      break;
    case InputKind::Matrix:
      matrix = read_matrix(input.path, flags.delimiter);
      break;
    case InputKind::Probs: {
      auto data = read_probs(input.path, csv);
      if (data.records.empty()) throw Error(ErrorCode::EmptyDataset, "'" + input.path + "' has no records");
      matrix = harden(data.records, data.registry);
      cross_entropy = xent_dataset(data.records, xent);
      break;
    }
  }

  ReportOptions options;
  options.averaging = flags.lenient ? Averaging::Lenient : Averaging::Strict;
  options.epsilon = flags.epsilon;
  options.reduce = flags.reduce;
  std::optional<ClassWeights> weights;
  if (flags.weights_path) {
    weights = read_weights(*flags.weights_path, *matrix, flags.delimiter);
    options.weights_source = *flags.weights_path;
  }

  auto report = evaluate(*matrix, weights, options);
  report.dataset = input.path;
  if (cross_entropy) report.metrics.push_back({"cross_entropy", MetricValue::defined(*cross_entropy)});
  return report;
}

namespace detail {

// Runs `body`, turning library errors into exit codes. `context` names the
// input being processed when the error escaped.
template <typename F>
Result guarded(std::string& context, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    const int code = e.code() == ErrorCode::InvalidOptions ? kUsageError : kInputError;
    return {code, "", "error: " + (context.empty() ? "" : context + ": ") + e.what() + "\n"};
  }
}

}  // namespace detail

inline Result cmd_evaluate(const Input& input, const Flags& flags) {
  std::string context = input.path;
  return detail::guarded(context, [&] {
    auto report = build_report(input, flags);
    Result r;
    r.out = flags.format == Format::Json ? to_json(report) : to_text(report, flags.color);
    return r;
  });
}

inline Result cmd_compare(const Input& a, const Input& b, const Flags& flags) {
  std::string context;
  return detail::guarded(context, [&] {
    context = "side A (" + a.path + ")";
    auto ra = build_report(a, flags);
    context = "side B (" + b.path + ")";
    auto rb = build_report(b, flags);
    context.clear();
    auto report = compare(std::move(ra), std::move(rb));
    Result r;
    r.out = flags.format == Format::Json ? to_json(report) : to_text(report, flags.color);
    return r;
  });
}

}  // namespace clfmetrics::cli
