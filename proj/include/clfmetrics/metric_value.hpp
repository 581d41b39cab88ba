#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <variant>

#include "clfmetrics/rational.hpp"

namespace clfmetrics {

enum class UndefinedReason {
  EmptyDenominator,
  DegenerateZeroOverZero,
};

constexpr std::string_view to_string(UndefinedReason reason) {
  switch (reason) {
    case UndefinedReason::EmptyDenominator: return "empty_denominator";
    case UndefinedReason::DegenerateZeroOverZero: return "degenerate_zero_over_zero";
  }
  return "unknown";
}

inline std::optional<UndefinedReason> undefined_reason_from_string(std::string_view s) {
  if (s == "empty_denominator") return UndefinedReason::EmptyDenominator;
  if (s == "degenerate_zero_over_zero") return UndefinedReason::DegenerateZeroOverZero;
  return std::nullopt;
}

/// A metric result: either a number (with its exact fraction when the
/// metric is rational in the counts) or an explicit reason it has none.
class MetricValue {
 public:
  struct Defined {
    double value;
    std::optional<Rational> exact;
    friend bool operator==(const Defined&, const Defined&) = default;
  };
  struct Undefined {
    UndefinedReason reason;
    friend bool operator==(const Undefined&, const Undefined&) = default;
  };

  static MetricValue defined(double value) { return MetricValue(Defined{value, std::nullopt}); }
  static MetricValue defined(const Rational& exact) {
    return MetricValue(Defined{exact.to_double(), exact});
  }
  static MetricValue undefined(UndefinedReason reason) { return MetricValue(Undefined{reason}); }

  bool is_defined() const { return std::holds_alternative<Defined>(state_); }
  explicit operator bool() const { return is_defined(); }

  double value() const {
    if (!is_defined()) throw std::logic_error("value() on an undefined metric");
    return std::get<Defined>(state_).value;
  }

  const std::optional<Rational>& exact() const {
    static const std::optional<Rational> none;
    return is_defined() ? std::get<Defined>(state_).exact : none;
  }

  UndefinedReason reason() const {
    if (is_defined()) throw std::logic_error("reason() on a defined metric");
    return std::get<Undefined>(state_).reason;
  }

  friend bool operator==(const MetricValue&, const MetricValue&) = default;

 private:
  explicit MetricValue(std::variant<Defined, Undefined> state) : state_(std::move(state)) {}
  std::variant<Defined, Undefined> state_;
};

}  // namespace clfmetrics
