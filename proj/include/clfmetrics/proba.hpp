#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "clfmetrics/confusion.hpp"
#include "clfmetrics/error.hpp"

namespace clfmetrics {

inline constexpr double kProbSumTolerance = 1e-6;

struct ProbRecord {
  std::size_t true_class = 0;
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }

  /// Throws InvalidRecord unless every probability is in [0,1], the sum is
  /// within 1e-6 of 1, and true_class indexes the vector.
  void validate() const {
    if (probs.size() < 2) throw Error(ErrorCode::InvalidRecord, "probability vector needs at least 2 classes");
    if (true_class >= probs.size())
      throw Error(ErrorCode::InvalidRecord, "true class " + std::to_string(true_class) + " out of range");
    long double sum = 0;
    for (double p : probs) {
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidRecord, "probability outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0L) > kProbSumTolerance)
      throw Error(ErrorCode::InvalidRecord, "probabilities sum to " + std::to_string(static_cast<double>(sum)));
  }
};

enum class Reduce { Mean, Sum };

struct XentOptions {
  double epsilon = 1e-15;
  Reduce reduce = Reduce::Mean;

  void validate() const {
    if (!(epsilon > 0 && epsilon <= 1e-6))
      throw Error(ErrorCode::InvalidOptions, "epsilon must lie in (0, 1e-6]");
  }
};

/// Cascade (pairwise) summation with O(log n) state, so values can be
/// streamed in while keeping the error growth of a balanced tree.
class PairwiseSum {
 public:
  void add(double v) {
    double carry = v;
    std::size_t level = 0;
    // Partial sums at level i cover 2^i values; merge equal levels.
    for (std::size_t n = count_; n & 1; n >>= 1, ++level) {
      carry = partial_[level] + carry;
      partial_[level] = 0;
    }
    if (level == partial_.size()) partial_.push_back(0);
    partial_[level] = carry;
    ++count_;
  }

  double sum() const {
    double total = 0;
    for (double p : partial_) total += p;
    return total;
  }

  std::size_t count() const { return count_; }

 private:
  std::vector<double> partial_;
  std::size_t count_ = 0;
};

/// -ln(max(p_true, epsilon)).
inline double xent_unit(const ProbRecord& r, const XentOptions& opts = {}) {
  r.validate();
  opts.validate();
  const double p = std::max(r.probs[r.true_class], opts.epsilon);
  // -log(1) would be -0.0.
  return p >= 1.0 ? 0.0 : -std::log(p);
}

/// Streaming dataset cross-entropy.
class XentAccumulator {
 public:
  explicit XentAccumulator(XentOptions opts = {}) : opts_(opts) { opts_.validate(); }

  void add(const ProbRecord& r) {
    if (dim_ == 0)
      dim_ = r.size();
    else if (r.size() != dim_)
      throw Error(ErrorCode::MixedDimensions, "record has " + std::to_string(r.size()) +
                                                  " classes, expected " + std::to_string(dim_));
    sum_.add(xent_unit(r, opts_));
  }

  std::size_t count() const { return sum_.count(); }

  double result() const {
    if (sum_.count() == 0) throw Error(ErrorCode::EmptyDataset, "cross-entropy of an empty dataset");
    const double total = sum_.sum();
    return opts_.reduce == Reduce::Mean ? total / static_cast<double>(sum_.count()) : total;
  }

 private:
  XentOptions opts_;
  std::size_t dim_ = 0;
  PairwiseSum sum_;
};

inline double xent_dataset(std::span<const ProbRecord> records, const XentOptions& opts = {}) {
  XentAccumulator acc(opts);
  for (const auto& r : records) acc.add(r);
  return acc.result();
}

/// Index of the largest probability; ties go to the lowest index.
inline std::size_t argmax_rule(std::span<const double> probs) {
  if (probs.size() < 2) throw Error(ErrorCode::InvalidRecord, "argmax needs at least 2 classes");
  return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

/// Tally of (true class, argmax) over the records.
inline ConfusionMatrix harden(std::span<const ProbRecord> records, const ClassRegistry& registry) {
  Tally tally(registry);
  for (const auto& r : records) {
    if (r.size() != registry.size())
      throw Error(ErrorCode::MixedDimensions, "record has " + std::to_string(r.size()) +
                                                  " classes, registry has " + std::to_string(registry.size()));
    r.validate();
    tally.add(r.true_class, argmax_rule(r.probs));
  }
  return tally.finish();
}

}  // namespace clfmetrics
