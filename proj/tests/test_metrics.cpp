#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "clfmetrics/metrics.hpp"
#include "test_support.hpp"

using namespace clfmetrics;

namespace {

ConfusionMatrix four_class() {
  return ConfusionMatrix::from_rows(ClassRegistry({"a", "b", "c", "d"}),
                                    {{6, 1, 1, 1}, {2, 9, 2, 1}, {1, 1, 10, 1}, {1, 2, 1, 12}});
}

ConfusionMatrix binary(Count tp, Count fn, Count fp, Count tn) {
  return ConfusionMatrix::from_rows(support::classes(2), {{tp, fn}, {fp, tn}});
}

ConfusionMatrix identity(std::size_t k, Count n = 3) {
  std::vector<Count> cells(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) cells[i * k + i] = n + static_cast<Count>(i);
  return {support::classes(k), cells};
}

Rational q(std::int64_t n, std::int64_t d) { return {n, d}; }

void expect_undefined(const MetricValue& v, UndefinedReason reason) {
  ASSERT_FALSE(v.is_defined());
  EXPECT_EQ(v.reason(), reason);
}

}  // namespace

TEST(Accuracy, FourClassMarginals) {
  auto acc = accuracy(four_class());
  ASSERT_TRUE(acc);
  EXPECT_EQ(*acc.exact(), q(37, 52));
  EXPECT_NEAR(acc.value(), 0.711538, 1e-6);
  EXPECT_EQ(accuracy(identity(3)).value(), 1.0);
  expect_undefined(accuracy(ConfusionMatrix::zero(support::classes(3))), UndefinedReason::EmptyDenominator);
}

TEST(MisclassificationRate, ComplementOfAccuracy) {
  auto mr = misclassification_rate(four_class());
  EXPECT_EQ(*mr.exact(), q(15, 52));
  EXPECT_NEAR(mr.value(), 0.288462, 1e-6);
  EXPECT_EQ(misclassification_rate(identity(2)).value(), 0.0);
  expect_undefined(misclassification_rate(ConfusionMatrix::zero(support::classes(2))),
                   UndefinedReason::EmptyDenominator);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    auto m = support::random_matrix(rng, 2 + i % 5, 8);
    if (m.total() == 0) continue;
    EXPECT_EQ(*accuracy(m).exact() + *misclassification_rate(m).exact(), Rational(1));
  }
}

TEST(PerClass, BinaryPrecisionRecall) {
  auto pc = per_class(binary(20, 5, 10, 17));
  EXPECT_EQ(*pc.precision[0].exact(), q(2, 3));
  EXPECT_EQ(*pc.recall[0].exact(), q(4, 5));
  EXPECT_NEAR(pc.precision[0].value(), 0.6667, 1e-4);
  EXPECT_DOUBLE_EQ(pc.recall[0].value(), 0.80);
  EXPECT_EQ(*pc.f1[0].exact(), q(8, 11));
}

TEST(PerClass, NeverPredictedClassHasUndefinedPrecision) {
  auto m = ConfusionMatrix::from_rows(support::classes(3), {{3, 1, 0}, {2, 4, 0}, {1, 1, 0}});
  auto pc = per_class(m);
  expect_undefined(pc.precision[2], UndefinedReason::EmptyDenominator);
  EXPECT_EQ(pc.recall[2].value(), 0.0);
  expect_undefined(pc.f1[2], UndefinedReason::EmptyDenominator);
}

TEST(PerClass, BothZeroF1IsDegenerate) {
  // Class 0 is predicted and present, but never correctly.
  auto m = ConfusionMatrix::from_rows(support::classes(2), {{0, 3}, {2, 1}});
  auto pc = per_class(m);
  EXPECT_EQ(pc.precision[0].value(), 0.0);
  EXPECT_EQ(pc.recall[0].value(), 0.0);
  expect_undefined(pc.f1[0], UndefinedReason::DegenerateZeroOverZero);
}

TEST(PerClass, ImbalancedSmallClassRecall) {
  // Small class with 5 correct out of a row of 62.
  auto m = ConfusionMatrix::from_rows(ClassRegistry({"a", "b", "c"}), {{5, 30, 27}, {4, 200, 10}, {2, 15, 300}});
  auto r = per_class(m).recall[0];
  EXPECT_EQ(*r.exact(), q(5, 62));
  EXPECT_NEAR(r.value(), 0.0806, 5e-5);
}

TEST(BalancedAccuracy, FourClassMarginals) {
  auto m = four_class();
  auto ba = balanced_accuracy(m);
  EXPECT_EQ(support::big(*ba.exact()), support::oracle_balanced_accuracy(m));
  EXPECT_NEAR(ba.value(), (6.0 / 9 + 9.0 / 14 + 10.0 / 13 + 12.0 / 16) / 4, 1e-15);
  EXPECT_NEAR(ba.value(), 0.707189, 1e-6);
  EXPECT_EQ(balanced_accuracy(identity(4)).value(), 1.0);
}

TEST(BalancedAccuracy, EqualsAccuracyWhenRowsAreEqual) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + trial % 5;
    const Count row = 1 + trial % 12;
    std::vector<Count> cells(k * k, 0);
    std::uniform_int_distribution<std::size_t> col(0, k - 1);
    for (std::size_t i = 0; i < k; ++i)
      for (Count n = 0; n < row; ++n) ++cells[i * k + col(rng)];
    ConfusionMatrix m(support::classes(k), cells);
    EXPECT_EQ(*balanced_accuracy(m).exact(), *accuracy(m).exact());
  }
}

TEST(BalancedAccuracy, StrictAndLenientOnEmptyRow) {
  auto m = ConfusionMatrix::from_rows(support::classes(3), {{2, 1, 0}, {0, 0, 0}, {1, 0, 3}});
  expect_undefined(balanced_accuracy(m), UndefinedReason::EmptyDenominator);
  auto lenient = balanced_accuracy(m, Averaging::Lenient);
  EXPECT_EQ(*lenient.exact(), (q(2, 3) + q(3, 4)) / Rational(2));
}

TEST(BalancedAccuracyWeighted, FrequencyWeightsGiveAccuracy) {
  auto m = four_class();
  auto w = ClassWeights::frequencies(m);
  auto v = balanced_accuracy_weighted(m, w);
  EXPECT_EQ(*v.exact(), q(37, 52));

  // Same identity through the floating-point route.
  auto approx = ClassWeights::from_values(w.values);
  EXPECT_NEAR(balanced_accuracy_weighted(m, approx).value(), 37.0 / 52.0, 1e-12);
}

TEST(BalancedAccuracyWeighted, UniformAndOneHot) {
  auto m = four_class();
  EXPECT_EQ(*balanced_accuracy_weighted(m, ClassWeights::uniform(4)).exact(), *balanced_accuracy(m).exact());
  EXPECT_NEAR(balanced_accuracy_weighted(m, ClassWeights::from_values({0.25, 0.25, 0.25, 0.25})).value(),
              balanced_accuracy(m).value(), 1e-15);
  auto one_hot = balanced_accuracy_weighted(m, ClassWeights::from_values({0, 0, 3.5, 0}));
  EXPECT_NEAR(one_hot.value(), 10.0 / 13.0, 1e-15);
}

TEST(BalancedAccuracyWeighted, InvalidWeights) {
  auto m = four_class();
  for (auto bad : {std::vector<double>{0, 0, 0, 0}, std::vector<double>{1, -1, 1, 1}, std::vector<double>{1, 1, 1}}) {
    try {
      balanced_accuracy_weighted(m, ClassWeights::from_values(bad));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidWeights);
    }
  }
}

TEST(BalancedAccuracyWeighted, ZeroWeightMasksEmptyRow) {
  auto m = ConfusionMatrix::from_rows(support::classes(3), {{2, 1, 0}, {0, 0, 0}, {1, 0, 3}});
  expect_undefined(balanced_accuracy_weighted(m, ClassWeights::from_values({1, 1, 1})),
                   UndefinedReason::EmptyDenominator);
  EXPECT_NEAR(balanced_accuracy_weighted(m, ClassWeights::from_values({1, 0, 1})).value(), (2.0 / 3 + 0.75) / 2,
              1e-15);
}

TEST(MacroAverages, RecallEqualsBalancedAccuracy) {
  auto m = four_class();
  EXPECT_EQ(macro_recall(m), balanced_accuracy(m));
  EXPECT_EQ(macro_precision(identity(3)).value(), 1.0);
  EXPECT_EQ(macro_recall(identity(3)).value(), 1.0);
}

TEST(MacroAverages, BinaryMacroPrecision) {
  auto mp = macro_precision(binary(20, 5, 10, 17));
  EXPECT_EQ(*mp.exact(), (q(20, 30) + q(17, 22)) / Rational(2));
}

TEST(MacroAverages, LenientSkipsUndefinedClasses) {
  auto m = ConfusionMatrix::from_rows(support::classes(3), {{3, 1, 0}, {2, 4, 0}, {1, 1, 0}});
  expect_undefined(macro_precision(m), UndefinedReason::EmptyDenominator);
  EXPECT_EQ(*macro_precision(m, Averaging::Lenient).exact(), (q(3, 6) + q(4, 6)) / Rational(2));
  expect_undefined(macro_precision(ConfusionMatrix::zero(support::classes(2)), Averaging::Lenient),
                   UndefinedReason::EmptyDenominator);
}

TEST(F1Score, HarmonicMeanExamples) {
  auto p = MetricValue::defined(Rational(q(4, 5)));
  EXPECT_EQ(*f1_score(p, p).exact(), q(4, 5));
  EXPECT_EQ(*f1_score(MetricValue::defined(q(3, 5)), MetricValue::defined(Rational(1))).exact(), q(3, 4));
  EXPECT_DOUBLE_EQ(f1_score(MetricValue::defined(0.6), MetricValue::defined(1.0)).value(), 0.75);
  expect_undefined(f1_score(MetricValue::defined(0.0), MetricValue::defined(0.0)),
                   UndefinedReason::DegenerateZeroOverZero);
}

TEST(MacroF1, HarmonicMeanOfMacros) {
  // Symmetric errors: macro precision = macro recall = 0.8.
  auto m = ConfusionMatrix::from_rows(support::classes(2), {{4, 1}, {1, 4}});
  EXPECT_EQ(*macro_f1(m).exact(), q(4, 5));

  auto b = binary(20, 5, 10, 17);
  auto mp = *macro_precision(b).exact();
  auto mr = *macro_recall(b).exact();
  EXPECT_EQ(*macro_f1(b).exact(), Rational(2) * mp * mr / (mp + mr));
  expect_undefined(macro_f1(ConfusionMatrix::zero(support::classes(2))), UndefinedReason::EmptyDenominator);
}

TEST(MicroF1, EqualsAccuracy) {
  auto m = four_class();
  EXPECT_EQ(*micro_f1(m).exact(), q(37, 52));
  EXPECT_EQ(micro_precision(m), accuracy(m));
  EXPECT_EQ(micro_recall(m), accuracy(m));
  expect_undefined(micro_f1(ConfusionMatrix::zero(support::classes(2))), UndefinedReason::EmptyDenominator);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    auto r = support::random_sparse_matrix(rng, 2 + trial % 6, 7);
    if (r.total() == 0) continue;
    EXPECT_EQ(*micro_f1(r).exact(), *accuracy(r).exact());
  }
}

TEST(Mcc, BinaryExamples) {
  // Every unit predicted as the majority class, 80/20 split.
  auto all_one = binary(80, 0, 20, 0);
  EXPECT_EQ(mcc_binary(one_vs_rest(all_one, 0)).value(), 0.0);
  EXPECT_EQ(accuracy(all_one).value(), 0.8);
  EXPECT_EQ(per_class(all_one).recall[0].value(), 1.0);
  EXPECT_EQ(mcc_binary(one_vs_rest(binary(7, 0, 0, 5), 0)).value(), 1.0);
  EXPECT_EQ(mcc_binary(one_vs_rest(binary(0, 7, 5, 0), 0)).value(), -1.0);
  expect_undefined(mcc_binary(OneVsRest{}), UndefinedReason::EmptyDenominator);
}

TEST(Mcc, MulticlassMatchesOracle) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 500; ++trial) {
    auto m = support::random_sparse_matrix(rng, 2 + trial % 6, 9);
    auto v = mcc_multiclass(m);
    if (m.total() == 0) {
      expect_undefined(v, UndefinedReason::EmptyDenominator);
      continue;
    }
    EXPECT_NEAR(v.value(), static_cast<double>(support::oracle_mcc(m)), 1e-12);
  }
  EXPECT_EQ(mcc_multiclass(identity(5)).value(), 1.0);
}

TEST(Mcc, SinglePredictedColumnIsZero) {
  auto m = ConfusionMatrix::from_rows(support::classes(3), {{0, 4, 0}, {0, 9, 0}, {0, 2, 0}});
  EXPECT_EQ(mcc_multiclass(m).value(), 0.0);
}

TEST(Mcc, MulticlassEqualsBinaryOnTwoByTwo) {
  for (const auto& m : support::all_2x2()) {
    auto multi = mcc_multiclass(m);
    auto bin = mcc_binary(one_vs_rest(m, 0));
    ASSERT_EQ(multi.is_defined(), bin.is_defined());
    if (multi) {
      EXPECT_EQ(multi.value(), bin.value());
    }
  }
}

TEST(Mcc, RejectsTotalsBeyondBound) {
  auto m = ConfusionMatrix::from_rows(support::classes(2), {{2'000'000'000, 0}, {0, 2'000'000'000}});
  try {
    mcc_multiclass(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
  }
  EXPECT_THROW(kappa_multiclass(m), Error);
  auto near_bound = ConfusionMatrix::from_rows(support::classes(2), {{1'500'000'000, 0}, {0, 1'500'000'000}});
  EXPECT_EQ(mcc_multiclass(near_bound).value(), 1.0);
  EXPECT_EQ(kappa_multiclass(near_bound).value(), 1.0);
}

TEST(Kappa, BinaryExample) {
  OneVsRest o{45, 15, 25, 15};
  auto terms = kappa_terms(o);
  ASSERT_TRUE(terms);
  EXPECT_EQ(terms->chance_positive, q(42, 100));
  EXPECT_EQ(terms->chance_negative, q(12, 100));
  EXPECT_EQ(terms->expected, q(54, 100));
  EXPECT_EQ(terms->observed, q(60, 100));
  auto k = kappa_binary(o);
  EXPECT_EQ(*k.exact(), q(6, 46));
  EXPECT_NEAR(k.value(), 0.130435, 1e-6);
}

TEST(Kappa, PerfectAndDegenerate) {
  EXPECT_EQ(kappa_binary(one_vs_rest(binary(7, 0, 0, 5), 0)).value(), 1.0);
  EXPECT_EQ(kappa_multiclass(identity(4)).value(), 1.0);
  // Pe = 1: every unit is actual and predicted class 0.
  EXPECT_EQ(kappa_binary(OneVsRest{9, 0, 0, 0}).value(), 1.0);
  EXPECT_EQ(kappa_multiclass(binary(9, 0, 0, 0)).value(), 1.0);
  expect_undefined(kappa_binary(OneVsRest{}), UndefinedReason::EmptyDenominator);
  expect_undefined(kappa_multiclass(ConfusionMatrix::zero(support::classes(3))), UndefinedReason::EmptyDenominator);
}

TEST(Kappa, MatchesPoPeOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    auto m = support::random_sparse_matrix(rng, 2 + trial % 6, 9);
    auto terms = agreement_terms(m);
    if (terms.total == 0 || terms.total * terms.total == terms.sum_pred_true) continue;
    EXPECT_EQ(support::big(*kappa_multiclass(m).exact()), support::oracle_kappa(m));
  }
}

TEST(Kappa, MulticlassEqualsBinaryOnTwoByTwo) {
  for (const auto& m : support::all_2x2()) {
    auto multi = kappa_multiclass(m);
    auto bin = kappa_binary(one_vs_rest(m, 0));
    ASSERT_EQ(multi.is_defined(), bin.is_defined());
    if (multi) {
      EXPECT_EQ(*multi.exact(), *bin.exact());
    }
  }
}

TEST(Kappa, ShuffledPredictionsAverageToZero) {
  std::mt19937_64 rng(29);
  const std::size_t n = 2000, k = 4;
  std::vector<std::size_t> actual(n), predicted(n);
  std::discrete_distribution<std::size_t> skewed({5, 3, 1, 1});
  for (std::size_t i = 0; i < n; ++i) {
    actual[i] = skewed(rng);
    predicted[i] = i % 3 == 0 ? skewed(rng) : actual[i];
  }
  double sum = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    std::shuffle(predicted.begin(), predicted.end(), rng);
    Tally tally(support::classes(k));
    for (std::size_t i = 0; i < n; ++i) tally.add(actual[i], predicted[i]);
    sum += kappa_multiclass(tally.finish()).value();
  }
  EXPECT_LT(std::abs(sum / trials), 0.02);
}

TEST(Properties, RangesOnRandomMatrices) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    auto m = support::random_sparse_matrix(rng, 2 + trial % 7, 12);
    for (auto v : {accuracy(m), misclassification_rate(m), balanced_accuracy(m, Averaging::Lenient),
                   macro_precision(m, Averaging::Lenient), macro_recall(m, Averaging::Lenient),
                   macro_f1(m, Averaging::Lenient), micro_f1(m)}) {
      if (!v) continue;
      EXPECT_GE(v.value(), 0.0);
      EXPECT_LE(v.value(), 1.0);
    }
    for (auto v : {mcc_multiclass(m), kappa_multiclass(m)}) {
      if (!v) continue;
      EXPECT_GE(v.value(), -1.0);
      EXPECT_LE(v.value(), 1.0);
    }
  }
}

TEST(Properties, KappaNeverExceedsMccInMagnitude) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 1000; ++trial) {
    auto m = support::random_sparse_matrix(rng, 2 + trial % 6, 10);
    auto t = agreement_terms(m);
    if (t.total == 0 || t.numerator() == 0) continue;
    const auto s2 = t.total * t.total;
    const auto mcc_den_a = s2 - t.sum_pred_sq;
    const auto mcc_den_b = s2 - t.sum_true_sq;
    const auto kappa_den = s2 - t.sum_pred_true;
    if (mcc_den_a == 0 || mcc_den_b == 0 || kappa_den == 0) continue;
    // |K| <= |MCC|  <=>  (s^2 - sum p^2)(s^2 - sum t^2) <= (s^2 - sum p t)^2
    EXPECT_LE(support::big(mcc_den_a) * support::big(mcc_den_b), support::big(kappa_den) * support::big(kappa_den));
    auto mcc = mcc_multiclass(m).value();
    auto kappa = kappa_multiclass(m).value();
    EXPECT_EQ(mcc > 0, kappa > 0);
    EXPECT_LE(std::abs(kappa), std::abs(mcc) * (1 + 1e-15));
  }
}

TEST(Properties, RelabelingInvariance) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + trial % 6;
    auto m = support::random_sparse_matrix(rng, k, 9);
    auto perm = support::random_permutation(rng, k);
    auto p = support::permuted(m, perm);
    EXPECT_EQ(accuracy(p), accuracy(m));
    EXPECT_EQ(balanced_accuracy(p, Averaging::Lenient), balanced_accuracy(m, Averaging::Lenient));
    EXPECT_EQ(macro_f1(p), macro_f1(m));
    EXPECT_EQ(micro_f1(p), micro_f1(m));
    EXPECT_EQ(kappa_multiclass(p), kappa_multiclass(m));
    EXPECT_EQ(mcc_multiclass(p), mcc_multiclass(m));
    auto pm = per_class(m), pp = per_class(p);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_EQ(pp.precision[i], pm.precision[perm[i]]);
      EXPECT_EQ(pp.recall[i], pm.recall[perm[i]]);
      EXPECT_EQ(pp.f1[i], pm.f1[perm[i]]);
    }
  }
}

TEST(Properties, ScaleInvariance) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    auto m = support::random_sparse_matrix(rng, 2 + trial % 5, 9);
    auto s = support::scaled(m, 1 + trial % 17);
    EXPECT_EQ(accuracy(s), accuracy(m));
    EXPECT_EQ(balanced_accuracy(s), balanced_accuracy(m));
    EXPECT_EQ(macro_f1(s), macro_f1(m));
    EXPECT_EQ(micro_f1(s), micro_f1(m));
    EXPECT_EQ(kappa_multiclass(s), kappa_multiclass(m));
    auto a = mcc_multiclass(m), b = mcc_multiclass(s);
    ASSERT_EQ(a.is_defined(), b.is_defined());
    if (a) {
      EXPECT_NEAR(a.value(), b.value(), 1e-12);
    }
  }
}
