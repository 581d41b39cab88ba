#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clfmetrics/confusion.hpp"
#include "clfmetrics/error.hpp"
#include "clfmetrics/metric_value.hpp"
#include "clfmetrics/rational.hpp"

namespace clfmetrics {

/// How macro averages treat classes whose per-class value is undefined.
/// Strict makes the average undefined; Lenient averages the defined ones.
enum class Averaging { Strict, Lenient };

/// Largest grand total accepted by MCC and Kappa. Keeps every p_k * t_k
/// and s^2 intermediate inside 64 bits, and radicand products inside 128.
inline constexpr Count kMaxCorrelationUnits = 3'000'000'000;

struct ClassWeights {
  std::vector<double> values;
  /// Present when the weights are known exactly (e.g. class frequencies).
  std::optional<std::vector<Rational>> exact;

  static ClassWeights from_values(std::vector<double> values) { return {std::move(values), std::nullopt}; }

  static ClassWeights uniform(std::size_t k) {
    return {std::vector<double>(k, 1.0), std::vector<Rational>(k, Rational(1))};
  }

  /// Actual-class frequencies row_total(k) / s.
  static ClassWeights frequencies(const ConfusionMatrix& m) {
    if (m.total() == 0) throw Error(ErrorCode::InvalidWeights, "class frequencies of an empty matrix");
    ClassWeights w;
    w.exact.emplace();
    for (std::size_t k = 0; k < m.size(); ++k) {
      Rational f(m.row_total(k), m.total());
      w.values.push_back(f.to_double());
      w.exact->push_back(f);
    }
    return w;
  }

  double sum() const {
    long double acc = 0;
    for (double v : values) acc += v;
    return static_cast<double>(acc);
  }

  void validate(std::size_t k) const {
    if (values.size() != k)
      throw Error(ErrorCode::InvalidWeights,
                  "expected " + std::to_string(k) + " weights, got " + std::to_string(values.size()));
    for (double v : values)
      if (!std::isfinite(v) || v < 0) throw Error(ErrorCode::InvalidWeights, "weights must be finite and non-negative");
    if (!(sum() > 0)) throw Error(ErrorCode::InvalidWeights, "weights sum to zero");
    if (exact && exact->size() != k) throw Error(ErrorCode::InvalidWeights, "exact weight count mismatch");
  }
};

struct PerClassBreakdown {
  std::vector<MetricValue> precision;
  std::vector<MetricValue> recall;
  std::vector<MetricValue> f1;
  friend bool operator==(const PerClassBreakdown&, const PerClassBreakdown&) = default;
};

/// Integer intermediates shared by MCC and Kappa: c (trace), s (total),
/// and the sums of p_k*t_k, p_k^2, t_k^2 over column totals p and row
/// totals t.
struct AgreementTerms {
  int128 correct = 0;
  int128 total = 0;
  int128 sum_pred_true = 0;
  int128 sum_pred_sq = 0;
  int128 sum_true_sq = 0;

  /// c*s - sum p_k t_k, the numerator of both MCC and Kappa.
  int128 numerator() const { return correct * total - sum_pred_true; }
};

/// Po, the chance products of both classes, and Pe for a binary table.
struct KappaTerms {
  Rational observed;
  Rational chance_positive;
  Rational chance_negative;
  Rational expected;
};

namespace detail {

template <typename F>
std::optional<Rational> try_exact(F&& f) {
  try {
    return f();
  } catch (const RationalOverflow&) {
    return std::nullopt;
  }
}

inline MetricValue ratio(Count num, Count den) {
  if (den == 0) return MetricValue::undefined(UndefinedReason::EmptyDenominator);
  return MetricValue::defined(Rational(num, den));
}

inline MetricValue mean(std::span<const MetricValue> values, Averaging mode) {
  std::vector<const MetricValue*> used;
  for (const auto& v : values) {
    if (v.is_defined())
      used.push_back(&v);
    else if (mode == Averaging::Strict)
      return v;
  }
  if (used.empty()) return MetricValue::undefined(UndefinedReason::EmptyDenominator);

  auto exact = try_exact([&]() -> std::optional<Rational> {
    Rational acc;
    for (const auto* v : used) {
      if (!v->exact()) return std::nullopt;
      acc = acc + *v->exact();
    }
    return acc / Rational(static_cast<Count>(used.size()));
  });
  if (exact) return MetricValue::defined(*exact);

  long double acc = 0;
  for (const auto* v : used) acc += v->value();
  return MetricValue::defined(static_cast<double>(acc / used.size()));
}

// floor(sqrt(x)) for x >= 0.
inline int128 isqrt(int128 x) {
  auto r = static_cast<int128>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// num / sqrt(radicand); exact when the radicand is a perfect square.
inline MetricValue correlation(int128 num, int128 radicand) {
  if (radicand == 0) return MetricValue::defined(Rational(0));
  int128 root = isqrt(radicand);
  if (root * root == radicand) return MetricValue::defined(Rational(num, root));
  return MetricValue::defined(static_cast<double>(
      static_cast<long double>(num) / std::sqrt(static_cast<long double>(radicand))));
}

inline void check_correlation_bound(Count total) {
  if (total > kMaxCorrelationUnits)
    throw Error(ErrorCode::Overflow, "grand total " + std::to_string(total) +
                                         " exceeds the supported bound for MCC/Kappa");
}

}  // namespace detail

/// Harmonic mean of a precision and a recall. Undefined when either is,
/// or when both are zero.
inline MetricValue f1_score(const MetricValue& precision, const MetricValue& recall) {
  if (!precision) return precision;
  if (!recall) return recall;
  if (precision.value() + recall.value() == 0)
    return MetricValue::undefined(UndefinedReason::DegenerateZeroOverZero);
  if (precision.exact() && recall.exact()) {
    auto exact = detail::try_exact([&] {
      const Rational& p = *precision.exact();
      const Rational& r = *recall.exact();
      return Rational(2) * p * r / (p + r);
    });
    if (exact) return MetricValue::defined(*exact);
  }
  const double p = precision.value();
  const double r = recall.value();
  return MetricValue::defined(2 * p * r / (p + r));
}

inline MetricValue accuracy(const ConfusionMatrix& m) { return detail::ratio(m.trace(), m.total()); }

inline MetricValue misclassification_rate(const ConfusionMatrix& m) {
  auto acc = accuracy(m);
  if (!acc) return acc;
  return MetricValue::defined(Rational(1) - *acc.exact());
}

inline PerClassBreakdown per_class(const ConfusionMatrix& m) {
  PerClassBreakdown out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    auto o = one_vs_rest(m, k);
    out.precision.push_back(detail::ratio(o.tp, o.tp + o.fp));
    out.recall.push_back(detail::ratio(o.tp, o.tp + o.fn));
    out.f1.push_back(f1_score(out.precision.back(), out.recall.back()));
  }
  return out;
}

inline MetricValue macro_precision(const ConfusionMatrix& m, Averaging mode = Averaging::Strict) {
  return detail::mean(per_class(m).precision, mode);
}

inline MetricValue macro_recall(const ConfusionMatrix& m, Averaging mode = Averaging::Strict) {
  return detail::mean(per_class(m).recall, mode);
}

/// Mean of per-class recalls.
inline MetricValue balanced_accuracy(const ConfusionMatrix& m, Averaging mode = Averaging::Strict) {
  std::vector<MetricValue> recalls;
  for (std::size_t k = 0; k < m.size(); ++k)
    recalls.push_back(detail::ratio(m.at(k, k), m.row_total(k)));
  return detail::mean(recalls, mode);
}

/// Weighted mean of per-class recalls, sum(w_k * recall_k) / W. A class
/// with zero weight may have an undefined recall.
inline MetricValue balanced_accuracy_weighted(const ConfusionMatrix& m, const ClassWeights& weights) {
  weights.validate(m.size());
  for (std::size_t k = 0; k < m.size(); ++k)
    if (weights.values[k] > 0 && m.row_total(k) == 0)
      return MetricValue::undefined(UndefinedReason::EmptyDenominator);

  if (weights.exact) {
    auto exact = detail::try_exact([&] {
      Rational num, den;
      for (std::size_t k = 0; k < m.size(); ++k) {
        const Rational& w = (*weights.exact)[k];
        den = den + w;
        if (!w.is_zero()) num = num + w * Rational(m.at(k, k), m.row_total(k));
      }
      return num / den;
    });
    if (exact) return MetricValue::defined(*exact);
  }

  long double num = 0, den = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const long double w = weights.values[k];
    den += w;
    if (w > 0) num += w * static_cast<long double>(m.at(k, k)) / m.row_total(k);
  }
  return MetricValue::defined(static_cast<double>(num / den));
}

/// Harmonic mean of macro precision and macro recall.
inline MetricValue macro_f1(const ConfusionMatrix& m, Averaging mode = Averaging::Strict) {
  auto pc = per_class(m);
  return f1_score(detail::mean(pc.precision, mode), detail::mean(pc.recall, mode));
}

inline MetricValue micro_precision(const ConfusionMatrix& m) {
  Count tp = 0, fp = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    auto o = one_vs_rest(m, k);
    tp += o.tp;
    fp += o.fp;
  }
  return detail::ratio(tp, tp + fp);
}

inline MetricValue micro_recall(const ConfusionMatrix& m) {
  Count tp = 0, fn = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    auto o = one_vs_rest(m, k);
    tp += o.tp;
    fn += o.fn;
  }
  return detail::ratio(tp, tp + fn);
}

/// F1 over counts pooled across all one-vs-rest tables,
/// 2*sum(TP) / (2*sum(TP) + sum(FP) + sum(FN)).
inline MetricValue micro_f1(const ConfusionMatrix& m) {
  Count tp = 0, fp = 0, fn = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    auto o = one_vs_rest(m, k);
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
  }
  return detail::ratio(2 * tp, 2 * tp + fp + fn);
}

inline AgreementTerms agreement_terms(const ConfusionMatrix& m) {
  detail::check_correlation_bound(m.total());
  AgreementTerms t;
  t.correct = m.trace();
  t.total = m.total();
  for (std::size_t k = 0; k < m.size(); ++k) {
    const int128 p = m.col_total(k);
    const int128 a = m.row_total(k);
    t.sum_pred_true += p * a;
    t.sum_pred_sq += p * p;
    t.sum_true_sq += a * a;
  }
  return t;
}

/// Binary MCC. Zero when any marginal is empty.
inline MetricValue mcc_binary(const OneVsRest& o) {
  detail::check_correlation_bound(o.total());
  if (o.total() == 0) return MetricValue::undefined(UndefinedReason::EmptyDenominator);
  const int128 num = int128{o.tp} * o.tn - int128{o.fp} * o.fn;
  const int128 radicand = int128{o.tp + o.fn} * (o.tp + o.fp) * (o.tn + o.fn) * (o.tn + o.fp);
  return detail::correlation(num, radicand);
}

/// (c*s - sum p_k t_k) / sqrt((s^2 - sum p_k^2)(s^2 - sum t_k^2)); zero
/// when either factor vanishes.
inline MetricValue mcc_multiclass(const ConfusionMatrix& m) {
  auto t = agreement_terms(m);
  if (t.total == 0) return MetricValue::undefined(UndefinedReason::EmptyDenominator);
  const int128 s2 = t.total * t.total;
  return detail::correlation(t.numerator(), (s2 - t.sum_pred_sq) * (s2 - t.sum_true_sq));
}

inline std::optional<KappaTerms> kappa_terms(const OneVsRest& o) {
  detail::check_correlation_bound(o.total());
  const Count s = o.total();
  if (s == 0) return std::nullopt;
  KappaTerms k;
  k.observed = Rational(o.tp + o.tn, s);
  k.chance_positive = Rational(o.tp + o.fn, s) * Rational(o.tp + o.fp, s);
  k.chance_negative = Rational(o.tn + o.fp, s) * Rational(o.tn + o.fn, s);
  k.expected = k.chance_positive + k.chance_negative;
  return k;
}

/// (Po - Pe) / (1 - Pe). With Pe = 1 the marginals are the same point
/// mass: 1 if every unit agrees, 0 otherwise.
inline MetricValue kappa_binary(const OneVsRest& o) {
  auto terms = kappa_terms(o);
  if (!terms) return MetricValue::undefined(UndefinedReason::EmptyDenominator);
  const Rational one(1);
  if (terms->expected == one) return MetricValue::defined(Rational(terms->observed == one ? 1 : 0));
  return MetricValue::defined((terms->observed - terms->expected) / (one - terms->expected));
}

/// (c*s - sum p_k t_k) / (s^2 - sum p_k t_k).
inline MetricValue kappa_multiclass(const ConfusionMatrix& m) {
  auto t = agreement_terms(m);
  if (t.total == 0) return MetricValue::undefined(UndefinedReason::EmptyDenominator);
  const int128 den = t.total * t.total - t.sum_pred_true;
  if (den == 0) return MetricValue::defined(Rational(t.correct == t.total ? 1 : 0));
  return MetricValue::defined(Rational(t.numerator(), den));
}

}  // namespace clfmetrics
