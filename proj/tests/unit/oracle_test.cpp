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

#include "rdpacct/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "frozen_constants.hpp"
#include "rdpacct/checks.hpp"

namespace rdpacct {
namespace {

FiniteDist dist(std::initializer_list<double> v) {
  FiniteDist d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d;
}

TEST(HistogramTest, CountsAndOrder) {
  for (int k = 0; k <= 8; ++k) {
    for (int b = 1; b <= 4; ++b) {
      const auto hs = enumerate_histograms(k, b);
      EXPECT_DOUBLE_EQ(static_cast<double>(hs.size()), std::round(std::exp(log_binomial(k + b - 1, b - 1))));
      for (std::size_t i = 1; i < hs.size(); ++i) EXPECT_LT(hs[i - 1], hs[i]);
    }
  }
  EXPECT_THROW(enumerate_histograms(-1, 2), std::domain_error);
}

TEST(HistogramTest, IidClientsGiveMultinomial) {
  const FiniteDist p = dist({0.2, 0.5, 0.3});
  const HistogramDist h = exact_shuffle_dist({p, p, p, p}, 3);
  EXPECT_NEAR(h.probs.sum(), 1.0, 1e-14);
  for (std::size_t i = 0; i < h.support.size(); ++i) {
    const auto& c = h.support[i];
    const double want = 24.0 / (std::tgamma(c[0] + 1) * std::tgamma(c[1] + 1) * std::tgamma(c[2] + 1)) *
                        std::pow(0.2, c[0]) * std::pow(0.5, c[1]) * std::pow(0.3, c[2]);
    EXPECT_NEAR(h.probs(static_cast<Eigen::Index>(i)), want, 1e-15);
  }
}

TEST(HistogramTest, RefusesOversizedInstances) {
  const FiniteDist p = dist({0.5, 0.5});
  std::vector<FiniteDist> many(kMaxHistogramClients + 1, p);
  EXPECT_THROW(exact_shuffle_dist(many, 2), std::domain_error);
  EXPECT_THROW(exact_shuffle_dist({dist({0.2, 0.2, 0.2, 0.2, 0.2})}, 5), std::domain_error);
  EXPECT_THROW(exact_shuffle_dist({dist({0.5, 0.6})}, 2), std::domain_error);
}

TEST(RenyiTest, BasicProperties) {
  const FiniteDist p = dist({0.1, 0.6, 0.3});
  const FiniteDist q = dist({0.3, 0.3, 0.4});
  EXPECT_NEAR(exact_renyi(p, p, 3.0), 0.0, 1e-15);
  double prev = 0.0;
  for (double l : {1.5, 2.0, 4.0, 16.0}) {
    const double v = exact_renyi(p, q, l);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_EQ(exact_renyi(dist({0.5, 0.5}), dist({1.0, 0.0}), 2.0), kInf);
  EXPECT_THROW(exact_renyi(p, q, 1.0), std::domain_error);
  // chi^2 at alpha = 2 and lambda = 2 agree through ln(1 + chi^2).
  const double chi2 = exact_ternary(p, q, q, 2.0);
  EXPECT_NEAR(exact_renyi(p, q, 2.0), std::log1p(chi2), 1e-14);
}

TEST(RenyiTest, HistogramRouteMatchesCountSummation) {
  for (double eps0 : {0.5, 2.0}) {
    const double p = 1.0 / (std::exp(eps0) + 1.0);
    const FiniteDist zero = dist({1.0 - p, p});
    const FiniteDist one = dist({p, 1.0 - p});
    for (int k : {1, 4, 9}) {
      std::vector<FiniteDist> base(k, zero);
      std::vector<FiniteDist> flipped = base;
      flipped.back() = one;
      const HistogramDist f0 = exact_shuffle_dist(base, 2);
      const HistogramDist f1 = exact_shuffle_dist(flipped, 2);
      for (std::int64_t n : {k, 3 * k}) {
        const double gamma = static_cast<double>(k) / n;
        const Eigen::VectorXd mix = gamma * f1.probs + (1.0 - gamma) * f0.probs;
        for (int lambda : {2, 5, 12}) {
          const double want = static_cast<double>(exact_rdp_2rr_subshuffle(lambda, {n, k, eps0}));
          EXPECT_NEAR(exact_renyi(mix, f0.probs, lambda), want, 1e-12 * std::max(1.0, want))
              << eps0 << " " << k << " " << n << " " << lambda;
        }
      }
    }
  }
}

TEST(Exact2rrTest, AgainstReference) {
  EXPECT_NEAR(static_cast<double>(exact_rdp_2rr_subshuffle(4, {500, 50, 1.0})), frozen::kRdpLowerL4,
              1e-12 * frozen::kRdpLowerL4);
  EXPECT_NEAR(static_cast<double>(exact_rdp_2rr_subshuffle(16, {30, 30, 2.0})), frozen::kRdpLowerL16Gamma1,
              1e-12 * frozen::kRdpLowerL16Gamma1);
  EXPECT_THROW(exact_rdp_2rr_subshuffle(2, {100000, kMaxExact2rrClients + 1, 1.0}), std::domain_error);
}

TEST(Rr2DistsTest, Shape) {
  const Rr2Dists d = rr2_dists(20, 1.0);
  EXPECT_EQ(d.mu0.size(), 21);
  EXPECT_EQ(d.mu1.size(), 21);
  EXPECT_NEAR(d.mu0.sum(), 1.0, 1e-14);
  EXPECT_NEAR(d.mu1.sum(), 1.0, 1e-14);
  const double p = 1.0 / (std::exp(1.0) + 1.0);
  const Eigen::VectorXd m = Eigen::VectorXd::LinSpaced(21, 0, 20);
  EXPECT_NEAR(d.mu0.dot(m), 20 * p, 1e-12);
  EXPECT_NEAR(d.mu1.dot(m), 19 * p + (1.0 - p), 1e-12);
}

TEST(LdpFamilyTest, RespectsTheRatioBound) {
  std::mt19937_64 rng(7);
  for (double eps0 : {0.1, 1.0, 3.0}) {
    for (int bins : {2, 3, 4}) {
      const auto fam = random_ldp_family(bins, 5, eps0, rng);
      ASSERT_EQ(fam.size(), 5u);
      for (const auto& d : fam) EXPECT_NO_THROW(validate_dist(d));
      EXPECT_TRUE(is_ldp_family(fam, eps0));
    }
  }
  EXPECT_FALSE(is_ldp_family({dist({0.9, 0.1}), dist({0.1, 0.9})}, 1.0));
}

TEST(TernaryTest, SpecialTripleAgainstBound) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto fam = random_ldp_family(3, 3, 1.0, rng);
    for (int m : {1, 4, 8}) {
      const TernaryTriple t = special_triple(fam[0], fam[1], fam[2], m);
      for (int alpha : {2, 3}) {
        const double v = exact_ternary(t.p, t.q, t.r, alpha);
        EXPECT_LE(v, zeta_special(alpha, m, 1.0));
      }
    }
  }
}

TEST(TernaryTest, EmIsNonIncreasing) {
  std::mt19937_64 rng(13);
  const auto fam = random_ldp_family(3, 3, 2.0, rng);
  double prev = kInf;
  for (int m = 0; m <= 8; ++m) {
    const double e = ternary_e_m(fam[0], fam[1], fam[2], m, 3.0);
    EXPECT_LE(e, prev * (1 + 1e-12) + 1e-15);
    prev = e;
  }
}

TEST(ChecksTest, DefaultSuitesPass) {
  for (const std::string& name : check_names()) {
    const CheckReport r = run_check(name);
    EXPECT_TRUE(r.passed) << name << " " << r.worst_case;
    EXPECT_GT(r.cases, 0) << name;
  }
  EXPECT_THROW(run_check("nope"), std::invalid_argument);
}

TEST(ChecksTest, Exact2rrGapIsTiny) {
  const CheckReport r = check_exact2rr();
  EXPECT_TRUE(r.passed);
  EXPECT_GE(r.worst_margin, 0.0);
  EXPECT_LE(r.worst_margin, 1e-9);
}

}  // namespace
}  // namespace rdpacct
