#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "splr/bounds.hpp"
#include "support/oracles.hpp"

using namespace splr;

TEST(OracleBound, ZeroTargetOrZeroWeights) {
  EXPECT_EQ(oracle_bound(Mat::Zero(3, 3), 1.0, 1.0), 0.0);
  EXPECT_EQ(oracle_bound(Mat::Identity(3, 3), 0.0, 0.0), 0.0);
}

TEST(OracleBound, IdentityTwoByTwo) {
  // min{2*2 + 2*2, (sqrt2 (sqrt2+1)/2 + sqrt2)^2 ~ 9.7426}
  EXPECT_DOUBLE_EQ(oracle_bound(Mat::Identity(2, 2), 1.0, 1.0), 8.0);
  const double second = std::pow(std::numbers::sqrt2 * (std::numbers::sqrt2 + 1) / 2 + std::numbers::sqrt2, 2);
  EXPECT_NEAR(second, 9.7426, 1e-4);
}

TEST(OracleBound, SecondTermCanBeSmaller) {
  // Large diagonal entries: the convex term grows with magnitude, the
  // combinatorial one does not.
  const Mat s0 = 100.0 * Mat::Identity(2, 2);
  const double expected = std::pow(0.1 * std::numbers::sqrt2 * (std::numbers::sqrt2 + 1) / 2 + 0.1 * std::numbers::sqrt2, 2);
  EXPECT_NEAR(oracle_bound(s0, 0.1, 0.1), expected, 1e-12);
}

TEST(OracleBound, RejectsNegativeWeights) { EXPECT_THROW(oracle_bound(Mat::Identity(2, 2), -1, 0), InvalidArgument); }

TEST(LogDelta, SmallCase) {
  // 8 ln(32 e), evaluated independently.
  EXPECT_NEAR(log_delta(4, 1), 8.0L * std::log(32.0L * std::numbers::e_v<long double>), 1e-12);
  EXPECT_NEAR(log_delta(4, 1), 35.72589, 1e-5);
}

TEST(GenBoundLowrank, SlackVanishesWithConfidenceAndData) {
  BoundInputs in;
  in.n = 10;
  in.r = 2;
  in.e_count = 1e300;
  in.delta = 1 - 1e-12;
  in.empirical_loss = 0.2;
  EXPECT_NEAR(gen_bound_lowrank(in), 0.2, 1e-100);
}

TEST(GenBoundLowrank, IncreasingInRank) {
  BoundInputs in;
  in.n = 200;
  in.e_count = 5000;
  double prev = -1;
  for (double r = 1; r <= 200; r += 1) {
    in.r = r;
    const double b = gen_bound_lowrank(in);
    EXPECT_GT(b, prev) << r;
    prev = b;
  }
}

TEST(GenBoundSparse, CoincidesAtFullBudget) {
  BoundInputs in;
  in.n = 50;
  in.r = 3;
  in.s = 2 * 50 * 3;
  in.e_count = 1000;
  EXPECT_NEAR(log_gamma_count(50, 3, 300), log_delta(50, 3), 1e-12 * log_delta(50, 3));
  EXPECT_NEAR(gen_bound_sparse_lowrank(in), gen_bound_lowrank(in), 1e-12 * gen_bound_lowrank(in));
}

TEST(GenBoundSparse, SingleEntryBudget) {
  EXPECT_NEAR(log_gamma_count(10, 2, 1), std::log(16.0 * std::numbers::e * 100) + std::log(40.0), 1e-12);
}

TEST(GenBoundSparse, MatchesExactIntegerCount) {
  // n=10, r=2, s=8: C(40,8) (1600e/8)^8.
  const std::uint64_t c = oracle::binomial(40, 8);
  EXPECT_EQ(c, 76904685u);
  const long double expected = std::log(static_cast<long double>(c)) +
                               8.0L * std::log(1600.0L * std::numbers::e_v<long double> / 8.0L);
  EXPECT_NEAR(log_gamma_count(10, 2, 8), static_cast<double>(expected), 1e-10);
}

// For r <= 2 the sparse count never exceeds the low-rank count. For r >= 3 it
// does for budgets just below 2nr (the binomial collapses faster than the
// per-entry factor grows), so the inequality is only checked up to nr there.
TEST(GenBoundSparse, NoLooserThanLowrankInSafeRegion) {
  BoundInputs in;
  in.e_count = 10000;
  for (double n : {5.0, 20.0, 100.0})
    for (double r : {1.0, 2.0, 3.0, 5.0}) {
      if (r > n) continue;
      in.n = n;
      in.r = r;
      const double s_max = r <= 2 ? 2 * n * r : n * r;
      for (double s = 1; s <= s_max; s = std::max(s + 1, std::floor(s * 1.3))) {
        in.s = s;
        EXPECT_LE(gen_bound_sparse_lowrank(in), gen_bound_lowrank(in) * (1 + 1e-12)) << n << ' ' << r << ' ' << s;
      }
      in.s = 2 * n * r;
      EXPECT_LE(gen_bound_sparse_lowrank(in), gen_bound_lowrank(in) * (1 + 1e-12));
    }
}

TEST(GenBoundSparse, ExceedsLowrankJustBelowFullBudgetForRankThree) {
  // n=5, r=3, s=29: ln C(30,29) + 29 ln(400e/29) against 30 ln(8e*5/3).
  const long double n = 5, r = 3, s = 29, full = 2 * n * r;
  const long double e = std::numbers::e_v<long double>;
  const long double gamma = std::lgamma(full + 1) - std::lgamma(s + 1) - std::lgamma(full - s + 1) +
                            s * std::log(16.0L * e * n * n / s);
  const long double delta = full * std::log(8.0L * e * n / r);
  EXPECT_GT(gamma, delta);
  EXPECT_NEAR(log_gamma_count(5, 3, 29), static_cast<double>(gamma), 1e-10);
  EXPECT_GT(log_gamma_count(5, 3, 29), log_delta(5, 3));
}

TEST(GenBoundSparse, RejectsBudgetAboveFull) {
  BoundInputs in;
  in.n = 4;
  in.r = 1;
  in.s = 9;
  EXPECT_THROW(gen_bound_sparse_lowrank(in), InvalidArgument);
}

TEST(BoundInputs, Validation) {
  BoundInputs in;
  in.n = 4;
  in.r = 5;
  EXPECT_THROW(gen_bound_lowrank(in), InvalidArgument);
  in.r = 1;
  in.delta = 1.0;
  EXPECT_THROW(gen_bound_lowrank(in), InvalidArgument);
  in.delta = 0.1;
  in.e_count = 0;
  EXPECT_THROW(gen_bound_lowrank(in), InvalidArgument);
}

TEST(Bounds, FiniteAtMillionDimension) {
  BoundInputs in;
  in.n = 1e6;
  in.r = 10;
  in.s = 1e5;
  in.e_count = 1e9;
  EXPECT_TRUE(std::isfinite(gen_bound_lowrank(in)));
  EXPECT_TRUE(std::isfinite(gen_bound_sparse_lowrank(in)));
}

TEST(DivergenceCheck, StrictlyIncreasing) {
  const auto d = prop2_divergence_check(0.5, 0.5, {20, 40, 80, 160});
  ASSERT_EQ(d.size(), 4u);
  for (std::size_t i = 1; i < d.size(); ++i) EXPECT_GT(d[i], d[i - 1]);
  for (double v : d) EXPECT_GE(v, 0.0);
}

TEST(DivergenceCheck, ZeroAtFullBudget) {
  // n = 10: r_n = 1, s_n = 20 = 2 n r_n.
  const auto d = prop2_divergence_check(0.1, 2.0, {10});
  EXPECT_NEAR(d[0], 0.0, 1e-12 * log_delta(10, 1));
}

TEST(DivergenceCheck, NonnegativeInAdmissibleRange) {
  for (double beta : {0.1, 0.3, 1.0})
    for (double alpha : {0.1, 0.5, 1.0})
      for (double v : prop2_divergence_check(beta, alpha, {20, 40, 80, 160, 320})) EXPECT_GE(v, -1e-9);
}

TEST(DivergenceCheck, Errors) {
  EXPECT_THROW(prop2_divergence_check(0.5, 0.5, {40, 20}), InvalidArgument);
  EXPECT_THROW(prop2_divergence_check(0.5, 50.0, {4}), InvalidArgument);
  EXPECT_THROW(prop2_divergence_check(0.0, 0.5, {20}), InvalidArgument);
}
