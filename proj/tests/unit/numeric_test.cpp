// Copyright 2026 The rdpacct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rdpacct/numeric.hpp"

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "frozen_constants.hpp"

namespace rdpacct {
namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

TEST(LogBinomialTest, MatchesExactInteger) {
  EXPECT_LE(rel_err(log_binomial(1000, 500), frozen::kLogBinomial1000_500), 1e-12);
  EXPECT_LE(rel_err(log_binomial(4096, 2048), frozen::kLogBinomial4096_2048), 1e-12);
}

TEST(LogBinomialTest, SmallValuesAreExact) {
  EXPECT_EQ(log_binomial(7, 0), 0.0);
  EXPECT_EQ(log_binomial(7, 7), 0.0);
  EXPECT_DOUBLE_EQ(log_binomial(10, 3), std::log(120.0));
  EXPECT_DOUBLE_EQ(log_binomial(60, 30), std::log(118264581564861424.0));
  EXPECT_THROW(log_binomial(5, 6), std::domain_error);
  EXPECT_THROW(log_binomial(5, -1), std::domain_error);
}

TEST(LogBinomialTest, PascalRuleAcrossTheExactCutoff) {
  for (std::int64_t n : {65, 66, 67, 100, 1000}) {
    for (std::int64_t k : {std::int64_t{1}, std::int64_t{7}, n / 3, n / 2}) {
      const double lhs = log_binomial(n + 1, k);
      const double rhs = log_add_exp(log_binomial(n, k), log_binomial(n, k - 1));
      EXPECT_LE(rel_err(lhs, rhs), 1e-12) << "n=" << n << " k=" << k;
    }
  }
}

TEST(LogGammaTest, AgainstReference) {
  EXPECT_LE(rel_err(log_gamma(7.5), frozen::kLogGamma7_5), 1e-13);
  EXPECT_LE(rel_err(log_gamma(123.25), frozen::kLogGamma123_25), 1e-13);
  EXPECT_LE(std::abs(log_gamma(0.5) - 0.5 * std::log(M_PI)), 1e-14);
  double log_fact = 0.0;
  for (int n = 1; n <= 40; ++n) {
    EXPECT_LE(std::abs(log_gamma(n) - log_fact), 1e-12 * std::max(1.0, log_fact)) << n;
    log_fact += std::log(static_cast<double>(n));
  }
}

TEST(LogSumExpTest, EdgeCases) {
  EXPECT_EQ(log_add_exp(kNegInf, kNegInf), kNegInf);
  EXPECT_EQ(log_add_exp(kNegInf, 3.0), 3.0);
  EXPECT_DOUBLE_EQ(log_add_exp(0.0, 0.0), std::log(2.0));
  EXPECT_DOUBLE_EQ(log_add_exp(1000.0, 1000.0), 1000.0 + std::log(2.0));
  std::vector<double> empty;
  EXPECT_EQ(log_sum_exp(empty), kNegInf);
  std::vector<double> xs = {-1000.0, -1000.0, -1000.0};
  EXPECT_DOUBLE_EQ(log_sum_exp(xs), -1000.0 + std::log(3.0));
  EXPECT_DOUBLE_EQ(log1p_exp(-800.0), std::exp(-800.0));
  EXPECT_DOUBLE_EQ(log1p_exp(800.0), 800.0);
}

TEST(SignedLogTest, RoundTrip) {
  for (double x : {-3.5, -1e-300, 0.0, 2.0, 1e300}) {
    EXPECT_NEAR(SignedLog::from_real(x).to_real(), x, 1e-13 * std::abs(x));
  }
  EXPECT_TRUE(SignedLog::from_log(kNegInf, -1).is_zero());
  const SignedLog a = SignedLog::from_real(-2.0);
  const SignedLog b = SignedLog::from_real(3.0);
  EXPECT_DOUBLE_EQ((a * b).to_real(), -6.0);
}

TEST(SignedLogTest, SumOfTenThousandTermsAgainstWideFloat) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> mag(-30.0, 5.0);
  std::bernoulli_distribution neg(0.3);
  const int n = 10000;
  std::vector<SignedLog> terms;
  Wide want = 0;
  Wide abs_total = 0;
  for (int i = 0; i < n; ++i) {
    const double lm = mag(rng);
    const int s = neg(rng) ? -1 : 1;
    terms.push_back(SignedLog::from_log(lm, s));
    const Wide v = boost::multiprecision::exp(Wide(lm));
    want += s * v;
    abs_total += v;
  }
  const double got = signed_log_sum(terms).to_real();
  const double err = static_cast<double>(boost::multiprecision::abs(Wide(got) - want));
  EXPECT_LE(err, kAccumulationTolerance * n * static_cast<double>(abs_total));
  EXPECT_LE(err, 1e-10 * static_cast<double>(boost::multiprecision::abs(want)));

  SignedLogAccumulator acc;
  for (const auto& t : terms) acc.add(t);
  const double acc_err = static_cast<double>(boost::multiprecision::abs(Wide(acc.sum().to_real()) - want));
  EXPECT_LE(acc_err, kAccumulationTolerance * n * static_cast<double>(abs_total));
}

TEST(SignedLogTest, ExactCancellationIsZero) {
  std::vector<SignedLog> terms = {SignedLog::from_real(5.0), SignedLog::from_real(-5.0)};
  EXPECT_EQ(signed_log_sum(terms).to_real(), 0.0);
}

TEST(BinomialMomentTest, LowOrdersInClosedForm) {
  for (std::int64_t k : {1, 5, 100, 1000}) {
    for (double p : {0.1, 0.2689414213699951, 0.5}) {
      const double q = 1.0 - p;
      const double v = k * p * q;
      EXPECT_NEAR(binom_central_moment(k, p, 0), 1.0, 1e-12);
      EXPECT_NEAR(binom_central_moment(k, p, 1), 0.0, 1e-9 * std::sqrt(v));
      EXPECT_LE(rel_err(binom_central_moment(k, p, 2), v), 1e-10);
      const double m3 = v * (q - p);
      if (m3 != 0.0) EXPECT_LE(rel_err(binom_central_moment(k, p, 3), m3), 1e-8);
      const double m4 = 3.0 * v * v + v * (1.0 - 6.0 * p * q);
      EXPECT_LE(rel_err(binom_central_moment(k, p, 4), m4), 1e-10);
    }
  }
}

TEST(BinomialMomentTest, TableAgreesWithDirectMoment) {
  const BinomialMomentTable table(200, 0.3, 12);
  ASSERT_EQ(table.max_order(), 12);
  for (int j = 2; j <= 12; ++j) {
    EXPECT_LE(rel_err(table.moment(j).to_real(), binom_central_moment(200, 0.3, j)), 1e-9) << j;
  }
}

TEST(BinomialLogPmfTest, NormalizedAndCached) {
  const auto a = binomial_log_pmf(500, 0.25);
  const auto b = binomial_log_pmf(500, 0.25);
  EXPECT_EQ(a.get(), b.get());
  ASSERT_EQ(a->size(), 501u);
  EXPECT_NEAR(log_sum_exp(*a), 0.0, 1e-12);
}

}  // namespace
}  // namespace rdpacct
