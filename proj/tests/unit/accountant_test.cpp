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

#include "rdpacct/accountant.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "frozen_constants.hpp"

namespace rdpacct {
namespace {

const SubsampledShuffleParams kHeadline(1000000, 1000, 2.0);

TEST(PenaltyTest, ClosedForm) {
  const double l = 10.0;
  const double d = 1e-6;
  const double want = (std::log(1.0 / d) + (l - 1.0) * std::log(1.0 - 1.0 / l) - std::log(l)) / (l - 1.0);
  EXPECT_NEAR(conversion_penalty(10, d), want, 1e-14);
  EXPECT_THROW(conversion_penalty(1, d), std::domain_error);
  EXPECT_THROW(conversion_penalty(2, 0.0), std::domain_error);
  EXPECT_THROW(conversion_penalty(2, 1.0), std::domain_error);
}

TEST(ComposeTest, ScalesLinearly) {
  const RdpCurve c = upper_curve({10000, 100, 1.0}, 2, 10);
  const RdpCurve c5 = compose(c, 5);
  ASSERT_EQ(c5.entries.size(), c.entries.size());
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    EXPECT_EQ(c5.entries[i].lambda, c.entries[i].lambda);
    EXPECT_DOUBLE_EQ(c5.entries[i].eps, 5.0 * c.entries[i].eps);
  }
  EXPECT_THROW(compose(c, 0), std::domain_error);
}

TEST(TotalPrivacyTest, HeadlineAgainstReference) {
  const DpGuarantee g = total_privacy(kHeadline, {100000, 1e-8});
  EXPECT_LE(std::abs(g.eps - frozen::kTotalPrivacyHeadline) / frozen::kTotalPrivacyHeadline, 1e-9);
  ASSERT_TRUE(g.argmin_lambda.has_value());
  EXPECT_EQ(*g.argmin_lambda, frozen::kTotalPrivacyHeadlineArgmin);
  EXPECT_EQ(g.delta, 1e-8);
  EXPECT_EQ(g.provenance, Provenance::kOursRdpUpper);
  EXPECT_FALSE(g.degenerate);
}

TEST(TotalPrivacyTest, EarlyExitMatchesExhaustiveSearch) {
  for (double eps0 : {0.5, 2.0, 4.0}) {
    for (std::int64_t rounds : {1, 100, 100000}) {
      const SubsampledShuffleParams params(1000000, 1000, eps0);
      AccountantConfig cfg{rounds, 1e-6};
      const DpGuarantee fast = total_privacy(params, cfg);
      cfg.exact_search = true;
      const DpGuarantee full = total_privacy(params, cfg);
      EXPECT_DOUBLE_EQ(fast.eps, full.eps) << eps0 << " " << rounds;
      EXPECT_EQ(fast.argmin_lambda, full.argmin_lambda);
    }
  }
}

TEST(TotalPrivacyTest, AgreesWithTabulatedConversion) {
  const SubsampledShuffleParams params(100000, 500, 1.0);
  AccountantConfig cfg{1000, 1e-7, 256, true};
  const DpGuarantee direct = total_privacy(params, cfg);
  const DpGuarantee via_curve = rdp_to_dp(compose(upper_curve(params, 2, 256), 1000), 1e-7);
  EXPECT_DOUBLE_EQ(direct.eps, via_curve.eps);
  EXPECT_EQ(direct.argmin_lambda, via_curve.argmin_lambda);
}

TEST(TotalPrivacyTest, MonotoneInInputs) {
  const SubsampledShuffleParams params(100000, 1000, 1.0);
  double prev = 0.0;
  for (std::int64_t t : {1, 10, 100, 1000, 10000}) {
    const double e = total_privacy(params, {t, 1e-6}).eps;
    EXPECT_GE(e, prev);
    prev = e;
  }
  prev = kInf;
  for (double d : {1e-12, 1e-9, 1e-6, 1e-3}) {
    const double e = total_privacy(params, {100, d}).eps;
    EXPECT_LE(e, prev);
    prev = e;
  }
  prev = 0.0;
  for (double eps0 : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const double e = total_privacy({100000, 1000, eps0}, {100, 1e-6}).eps;
    EXPECT_GE(e, prev);
    prev = e;
  }
}

TEST(TotalPrivacyTest, LowerReferenceBelowUpper) {
  const DpGuarantee up = total_privacy(kHeadline, {100000, 1e-8});
  const DpGuarantee lo = total_privacy_lower(kHeadline, {100000, 1e-8});
  EXPECT_EQ(lo.provenance, Provenance::kOursRdpLower);
  EXPECT_LT(lo.eps, up.eps);
  EXPECT_GT(lo.eps, 0.0);
}

TEST(TotalPrivacyTest, ZeroEpsilonLeavesOnlyThePenalty) {
  const AccountantConfig cfg{1000, 1e-5, 64, true};
  const DpGuarantee g = total_privacy({1000, 100, 0.0}, cfg);
  double best = kInf;
  for (int l = 2; l <= 64; ++l) best = std::min(best, conversion_penalty(l, 1e-5));
  EXPECT_DOUBLE_EQ(g.eps, best);
}

TEST(ConvertTest, ClampsAtZero) {
  RdpCurve c = upper_curve({1000, 100, 0.0}, 2, 4);
  const DpGuarantee g = rdp_to_dp(c, 0.9);
  EXPECT_LT(g.eps_unclamped, 0.0);
  EXPECT_EQ(g.eps, 0.0);
}

TEST(ConfigTest, Validation) {
  EXPECT_THROW(validate_config({0, 1e-6}), std::domain_error);
  EXPECT_THROW(validate_config({10, 0.0}), std::domain_error);
  EXPECT_THROW(validate_config({10, 1e-6, 1}), std::domain_error);
  RdpCurve empty{kHeadline, {}, BoundKind::kUpperBound};
  EXPECT_THROW(rdp_to_dp(empty, 1e-6), std::domain_error);
  EXPECT_STREQ(provenance_name(Provenance::kBaselineClonesPipeline), "baseline_clones_pipeline");
}

}  // namespace
}  // namespace rdpacct
