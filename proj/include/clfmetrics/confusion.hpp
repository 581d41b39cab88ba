#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clfmetrics/error.hpp"

namespace clfmetrics {

using Count = std::int64_t;

/// Ordered, duplicate-free list of class names. Index order is fixed for
/// the lifetime of the registry.
class ClassRegistry {
 public:
  explicit ClassRegistry(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2)
      throw Error(ErrorCode::InvalidRegistry,
                  "need at least 2 classes, got " + std::to_string(labels_.size()));
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty()) throw Error(ErrorCode::EmptyLabel, "empty class name in registry");
      if (!index_.emplace(labels_[i], i).second)
        throw Error(ErrorCode::DuplicateClass, "duplicate class '" + labels_[i] + "'");
    }
  }

  /// Registry of the distinct labels, sorted lexicographically.
  template <typename Range>
  static ClassRegistry sorted_from(const Range& labels) {
    std::vector<std::string> v(std::begin(labels), std::end(labels));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return ClassRegistry(std::move(v));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::optional<std::size_t> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index(const std::string& label) const {
    if (auto i = find(label)) return *i;
    throw Error(ErrorCode::UnknownLabel, "label '" + label + "' is not in the class registry");
  }

  friend bool operator==(const ClassRegistry& a, const ClassRegistry& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// The four tiles of the matrix with one class taken as positive.
struct OneVsRest {
  Count tp = 0;
  Count fp = 0;
  Count fn = 0;
  Count tn = 0;

  Count total() const { return tp + fp + fn + tn; }
  friend bool operator==(const OneVsRest&, const OneVsRest&) = default;
};

/// K x K tally. Rows are actual classes, columns are predicted classes.
/// Immutable once built; marginals are cached at construction.
class ConfusionMatrix {
 public:
  ConfusionMatrix(ClassRegistry registry, std::vector<Count> counts)
      : registry_(std::make_shared<const ClassRegistry>(std::move(registry))),
        counts_(std::move(counts)) {
    init();
  }

  ConfusionMatrix(std::shared_ptr<const ClassRegistry> registry, std::vector<Count> counts)
      : registry_(std::move(registry)), counts_(std::move(counts)) {
    init();
  }

  static ConfusionMatrix zero(ClassRegistry registry) {
    auto k = registry.size();
    return {std::move(registry), std::vector<Count>(k * k, 0)};
  }

  /// Row-major nested form, convenient for literals in tests and fixtures.
  static ConfusionMatrix from_rows(ClassRegistry registry,
                                   const std::vector<std::vector<Count>>& rows) {
    const auto k = registry.size();
    if (rows.size() != k) throw Error(ErrorCode::NonSquare, "row count differs from class count");
    std::vector<Count> flat;
    flat.reserve(k * k);
    for (const auto& row : rows) {
      if (row.size() != k) throw Error(ErrorCode::NonSquare, "row length differs from class count");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return {std::move(registry), std::move(flat)};
  }

  const ClassRegistry& registry() const { return *registry_; }
  const std::shared_ptr<const ClassRegistry>& shared_registry() const { return registry_; }
  std::size_t size() const { return k_; }

  Count at(std::size_t actual, std::size_t predicted) const {
    check(actual);
    check(predicted);
    return counts_[actual * k_ + predicted];
  }

  std::span<const Count> row(std::size_t actual) const {
    check(actual);
    return {counts_.data() + actual * k_, k_};
  }

  std::span<const Count> cells() const { return counts_; }

  Count row_total(std::size_t k) const { return row_totals_.at(k); }
  Count col_total(std::size_t k) const { return col_totals_.at(k); }
  std::span<const Count> row_totals() const { return row_totals_; }
  std::span<const Count> col_totals() const { return col_totals_; }
  Count total() const { return total_; }
  Count trace() const { return trace_; }

  friend bool operator==(const ConfusionMatrix& a, const ConfusionMatrix& b) {
    return a.registry() == b.registry() && a.counts_ == b.counts_;
  }

 private:
  void check(std::size_t i) const {
    if (i >= k_)
      throw Error(ErrorCode::ClassOutOfRange,
                  "class index " + std::to_string(i) + " outside 0.." + std::to_string(k_ - 1));
  }

  void init() {
    k_ = registry_->size();
    if (counts_.size() != k_ * k_)
      throw Error(ErrorCode::NonSquare, "expected " + std::to_string(k_ * k_) + " cells, got " +
                                            std::to_string(counts_.size()));
    row_totals_.assign(k_, 0);
    col_totals_.assign(k_, 0);
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = 0; j < k_; ++j) {
        Count c = counts_[i * k_ + j];
        if (c < 0) throw Error(ErrorCode::NegativeEntry, "negative count in confusion matrix");
        if (__builtin_add_overflow(row_totals_[i], c, &row_totals_[i]) ||
            __builtin_add_overflow(col_totals_[j], c, &col_totals_[j]) ||
            __builtin_add_overflow(total_, c, &total_))
          throw Error(ErrorCode::Overflow, "confusion matrix total exceeds 64 bits");
        if (i == j) trace_ += c;
      }
    }
  }

  std::shared_ptr<const ClassRegistry> registry_;
  std::vector<Count> counts_;
  std::size_t k_ = 0;
  std::vector<Count> row_totals_;
  std::vector<Count> col_totals_;
  Count total_ = 0;
  Count trace_ = 0;
};

/// Accumulates (actual, predicted) index pairs against a known registry.
class Tally {
 public:
  explicit Tally(ClassRegistry registry)
      : registry_(std::make_shared<const ClassRegistry>(std::move(registry))),
        counts_(registry_->size() * registry_->size(), 0) {}

  void add(std::size_t actual, std::size_t predicted, Count n = 1) {
    const auto k = registry_->size();
    if (actual >= k || predicted >= k)
      throw Error(ErrorCode::ClassOutOfRange, "class index outside registry");
    counts_[actual * k + predicted] += n;
  }

  void add(const std::string& actual, const std::string& predicted) {
    add(registry_->index(actual), registry_->index(predicted));
  }

  ConfusionMatrix finish() const { return {registry_, counts_}; }

 private:
  std::shared_ptr<const ClassRegistry> registry_;
  std::vector<Count> counts_;
};

/// Tallies string label pairs when the class set is not known upfront.
/// Memory is proportional to the number of distinct (actual, predicted)
/// combinations, never to the number of pairs.
class LabelTally {
 public:
  LabelTally() = default;
  explicit LabelTally(ClassRegistry registry) : fixed_(std::move(registry)) {}

  void add(const std::string& actual, const std::string& predicted) {
    if (fixed_) {
      // Validate both before counting so a failure leaves the tally untouched.
      fixed_->index(actual);
      fixed_->index(predicted);
    }
    ++cells_[{actual, predicted}];
    ++pairs_;
  }

  Count pairs() const { return pairs_; }

  ConfusionMatrix finish() const {
    if (!fixed_ && pairs_ == 0)
      throw Error(ErrorCode::EmptyInput, "no label pairs and no class registry");
    ClassRegistry registry = fixed_ ? *fixed_ : infer();
    Tally tally(registry);
    for (const auto& [key, n] : cells_)
      tally.add(registry.index(key.first), registry.index(key.second), n);
    return tally.finish();
  }

 private:
  ClassRegistry infer() const {
    std::vector<std::string> seen;
    for (const auto& [key, n] : cells_) {
      seen.push_back(key.first);
      seen.push_back(key.second);
    }
    return ClassRegistry::sorted_from(seen);
  }

  std::optional<ClassRegistry> fixed_;
  std::map<std::pair<std::string, std::string>, Count> cells_;
  Count pairs_ = 0;
};

struct LabelPair {
  std::string actual;
  std::string predicted;
  friend bool operator==(const LabelPair&, const LabelPair&) = default;
};

/// Tallies label pairs. Without a registry the classes are the sorted
/// union of every label seen.
inline ConfusionMatrix from_pairs(std::span<const LabelPair> pairs,
                                  std::optional<ClassRegistry> registry = std::nullopt) {
  LabelTally tally = registry ? LabelTally(std::move(*registry)) : LabelTally();
  for (const auto& p : pairs) tally.add(p.actual, p.predicted);
  return tally.finish();
}

inline OneVsRest one_vs_rest(const ConfusionMatrix& m, std::size_t k) {
  if (k >= m.size())
    throw Error(ErrorCode::ClassOutOfRange, "class index " + std::to_string(k) + " out of range");
  OneVsRest o;
  o.tp = m.at(k, k);
  o.fp = m.col_total(k) - o.tp;
  o.fn = m.row_total(k) - o.tp;
  o.tn = m.total() - o.tp - o.fp - o.fn;
  return o;
}

/// Two-class matrix whose class 0 is the positive class of `o`.
inline ConfusionMatrix binary_matrix(const OneVsRest& o,
                                     ClassRegistry registry = ClassRegistry({"positive", "negative"})) {
  if (registry.size() != 2) throw Error(ErrorCode::InvalidRegistry, "binary matrix needs 2 classes");
  return ConfusionMatrix::from_rows(std::move(registry), {{o.tp, o.fn}, {o.fp, o.tn}});
}

inline ConfusionMatrix merge(const ConfusionMatrix& a, const ConfusionMatrix& b) {
  if (!(a.registry() == b.registry()))
    throw Error(ErrorCode::RegistryMismatch, "cannot merge matrices over different class registries");
  std::vector<Count> sum(a.cells().begin(), a.cells().end());
  auto rhs = b.cells();
  for (std::size_t i = 0; i < sum.size(); ++i) {
    if (__builtin_add_overflow(sum[i], rhs[i], &sum[i]))
      throw Error(ErrorCode::Overflow, "merged count exceeds 64 bits");
  }
  return {a.shared_registry(), std::move(sum)};
}

}  // namespace clfmetrics
