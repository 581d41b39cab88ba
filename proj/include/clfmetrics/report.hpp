#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clfmetrics/confusion.hpp"
#include "clfmetrics/metrics.hpp"
#include "clfmetrics/proba.hpp"

namespace clfmetrics {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

struct NamedMetric {
  std::string name;
  MetricValue value;
  friend bool operator==(const NamedMetric&, const NamedMetric&) = default;
};

struct ReportOptions {
  Averaging averaging = Averaging::Strict;
  std::string weights_source = "frequency";
  double epsilon = XentOptions{}.epsilon;
  Reduce reduce = Reduce::Mean;
  friend bool operator==(const ReportOptions&, const ReportOptions&) = default;
};

struct EvaluationReport {
  std::string dataset;
  std::vector<std::string> classes;
  Count units = 0;
  std::vector<Count> support;
  std::vector<NamedMetric> metrics;
  PerClassBreakdown per_class;
  /// Classes left out of the lenient macro precision / recall averages.
  std::size_t skipped_precision = 0;
  std::size_t skipped_recall = 0;
  ReportOptions options;
  std::string tool_version{kToolVersion};

  const MetricValue* find(std::string_view name) const {
    for (const auto& m : metrics)
      if (m.name == name) return &m.value;
    return nullptr;
  }

  const MetricValue& get(std::string_view name) const {
    if (const auto* v = find(name)) return *v;
    throw std::out_of_range("no metric named " + std::string(name));
  }

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// Every confusion-matrix metric, in a fixed order. `weights` defaults to
/// the actual-class frequencies.
inline EvaluationReport evaluate(const ConfusionMatrix& m, const std::optional<ClassWeights>& weights = std::nullopt,
                                 ReportOptions options = {}) {
  EvaluationReport r;
  r.classes = m.registry().labels();
  r.units = m.total();
  r.support.assign(m.row_totals().begin(), m.row_totals().end());
  r.per_class = per_class(m);
  r.options = std::move(options);
  const Averaging mode = r.options.averaging;

  auto weighted = [&]() -> MetricValue {
    if (weights) return balanced_accuracy_weighted(m, *weights);
    if (m.total() == 0) return MetricValue::undefined(UndefinedReason::EmptyDenominator);
    return balanced_accuracy_weighted(m, ClassWeights::frequencies(m));
  };

  r.metrics = {
      {"accuracy", accuracy(m)},
      {"misclassification_rate", misclassification_rate(m)},
      {"balanced_accuracy", balanced_accuracy(m, mode)},
      {"balanced_accuracy_weighted", weighted()},
      {"macro_precision", macro_precision(m, mode)},
      {"macro_recall", macro_recall(m, mode)},
      {"macro_f1", macro_f1(m, mode)},
      {"micro_precision", micro_precision(m)},
      {"micro_recall", micro_recall(m)},
      {"micro_f1", micro_f1(m)},
      {"mcc", mcc_multiclass(m)},
      {"kappa", kappa_multiclass(m)},
  };

  if (mode == Averaging::Lenient) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      r.skipped_precision += !r.per_class.precision[k].is_defined();
      r.skipped_recall += !r.per_class.recall[k].is_defined();
    }
  }
  return r;
}

/// Agreement band for a Kappa value. Advisory wording only.
inline std::string_view kappa_agreement(double kappa) {
  if (kappa < 0) return "worse than chance";
  if (kappa < 0.10) return "chance-level";
  if (kappa <= 0.20) return "slight";
  if (kappa <= 0.40) return "fair";
  if (kappa <= 0.60) return "moderate";
  if (kappa <= 0.80) return "substantial";
  if (kappa < 1.0) return "near perfect";
  return "perfect";
}

struct MetricDelta {
  std::string name;
  /// b - a; absent unless both sides are defined.
  std::optional<double> delta;
  std::optional<Rational> exact;
};

struct ComparisonReport {
  EvaluationReport a;
  EvaluationReport b;
  std::vector<MetricDelta> deltas;
  bool same_registry = false;
  /// Per-class deltas (precision, recall, f1), only when registries match.
  std::vector<std::vector<MetricDelta>> per_class_deltas;
  /// Both sides have the same accuracy but their Kappa differs.
  bool equal_accuracy_differing_kappa = false;
  std::string note;
};

namespace detail {

inline MetricDelta delta_of(const std::string& name, const MetricValue& a, const MetricValue& b) {
  MetricDelta d{name, std::nullopt, std::nullopt};
  if (!a || !b) return d;
  if (a.exact() && b.exact()) {
    d.exact = try_exact([&] { return *b.exact() - *a.exact(); });
    if (d.exact) {
      d.delta = d.exact->to_double();
      return d;
    }
  }
  d.delta = b.value() - a.value();
  return d;
}

inline bool same_value(const MetricValue& a, const MetricValue& b) {
  if (!a || !b) return false;
  if (a.exact() && b.exact()) return *a.exact() == *b.exact();
  return a.value() == b.value();
}

}  // namespace detail

inline ComparisonReport compare(EvaluationReport a, EvaluationReport b) {
  ComparisonReport c;
  c.same_registry = a.classes == b.classes;

  for (const auto& ma : a.metrics) {
    if (const auto* mb = b.find(ma.name)) c.deltas.push_back(detail::delta_of(ma.name, ma.value, *mb));
  }

  if (c.same_registry) {
    for (std::size_t k = 0; k < a.classes.size(); ++k) {
      c.per_class_deltas.push_back({
          detail::delta_of("precision", a.per_class.precision[k], b.per_class.precision[k]),
          detail::delta_of("recall", a.per_class.recall[k], b.per_class.recall[k]),
          detail::delta_of("f1", a.per_class.f1[k], b.per_class.f1[k]),
      });
    }
  }

  const auto& acc_a = a.get("accuracy");
  const auto& acc_b = b.get("accuracy");
  const auto& kappa_a = a.get("kappa");
  const auto& kappa_b = b.get("kappa");
  c.equal_accuracy_differing_kappa = c.same_registry && detail::same_value(acc_a, acc_b) && kappa_a &&
                                     kappa_b && !detail::same_value(kappa_a, kappa_b);

  std::string note;
  if (kappa_a && kappa_b) {
    note = "kappa A " + std::string(kappa_agreement(kappa_a.value())) + ", kappa B " +
           std::string(kappa_agreement(kappa_b.value())) + "; ";
    if (detail::same_value(kappa_a, kappa_b))
      note += "equal chance-corrected agreement";
    else
      note += std::string(kappa_b.value() > kappa_a.value() ? "B" : "A") + " has the higher chance-corrected agreement";
    if (c.equal_accuracy_differing_kappa) note += " despite equal accuracy";
    if (!c.same_registry) note += " (different class sets: compare by kappa, per-class deltas suppressed)";
  } else {
    note = "kappa undefined on at least one side; no chance-corrected comparison";
  }
  c.note = std::move(note);
  c.a = std::move(a);
  c.b = std::move(b);
  return c;
}

}  // namespace clfmetrics
