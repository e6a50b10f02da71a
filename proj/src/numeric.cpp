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

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace rdpacct {
namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178032973640562;

// Below this threshold log_gamma shifts its argument upward before applying
// the asymptotic series.
constexpr double kStirlingThreshold = 10.0;

// Largest n for which C(n, n/2) fits in an unsigned 64-bit integer.
constexpr std::int64_t kExactBinomialLimit = 66;

// Tail of the Stirling series: ln Gamma(y+1) - [(y+1/2) ln y - y + ln sqrt(2 pi)]
// for y >= kStirlingThreshold. Truncation error is below 1e-17 there.
double stirling_series(double y) {
  const double inv = 1.0 / y;
  const double inv2 = inv * inv;
  return inv *
         (1.0 / 12.0 -
          inv2 * (1.0 / 360.0 -
                  inv2 * (1.0 / 1260.0 -
                          inv2 * (1.0 / 1680.0 -
                                  inv2 * (1.0 / 1188.0 -
                                          inv2 * (691.0 / 360360.0 - inv2 / 156.0))))));
}

// (x-1)! for integral x in [1, 23]; every such product is exact in binary64.
double small_factorial(int x) {
  double f = 1.0;
  for (int i = 2; i < x; ++i) f *= i;
  return f;
}

double stirling_remainder(double y) {
  if (y >= kStirlingThreshold) return stirling_series(y);
  return log_gamma(y + 1.0) - ((y + 0.5) * std::log(y) - y + kHalfLogTwoPi);
}

double exact_log_binomial(std::int64_t n, std::int64_t k) {
  unsigned __int128 c = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
  }
  return std::log(static_cast<double>(c));
}

}  // namespace

SignedLog SignedLog::from_real(double x) {
  if (x == 0.0) return {};
  return {x > 0 ? 1 : -1, std::log(std::abs(x))};
}

SignedLog SignedLog::from_log(double log_mag, int sign) {
  if (sign == 0 || log_mag == kNegInf) return {};
  return {sign > 0 ? 1 : -1, log_mag};
}

double SignedLog::to_real() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_mag);
}

SignedLog operator*(SignedLog a, SignedLog b) {
  if (a.is_zero() || b.is_zero()) return {};
  return {a.sign * b.sign, a.log_mag + b.log_mag};
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sum_exp(std::span<const double> xs) {
  double pivot = kNegInf;
  for (double x : xs) pivot = std::max(pivot, x);
  if (pivot == kNegInf) return kNegInf;
  if (pivot == kInf) return kInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - pivot);
  return pivot + std::log(s);
}

double log1p_exp(double x) {
  if (x > 35.0) return x + std::exp(-x);
  return std::log1p(std::exp(x));
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("log_binomial: requires 0 <= k <= n, got n=" +
                            std::to_string(n) + " k=" + std::to_string(k));
  }
  k = std::min(k, n - k);
  if (k == 0) return 0.0;
  if (n <= kExactBinomialLimit) return exact_log_binomial(n, k);
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const double rest = nn - kk;
  // n ln n - k ln k - (n-k) ln(n-k), written as a sum of nonnegative terms.
  const double entropy = kk * std::log(nn / kk) - rest * std::log1p(-kk / nn);
  return stirling_remainder(nn) - stirling_remainder(kk) - stirling_remainder(rest) +
         0.5 * std::log(nn / (kk * rest)) - kHalfLogTwoPi + entropy;
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("log_gamma: requires finite x > 0");
  }
  if (x <= 23.0 && x == std::floor(x)) {
    return std::log(small_factorial(static_cast<int>(x)));
  }
  double shift_log = 0.0;
  if (x < kStirlingThreshold) {
    double prod = 1.0;
    while (x < kStirlingThreshold) {
      prod *= x;
      x += 1.0;
    }
    shift_log = std::log(prod);
  }
  // ln Gamma(x) = ln Gamma((x-1)+1)
  const double y = x - 1.0;
  return stirling_series(y) + (y + 0.5) * std::log(y) - y + kHalfLogTwoPi - shift_log;
}

void SignedLogAccumulator::Side::add(double x) {
  if (x == kNegInf) return;
  if (x <= pivot) {
    scaled += std::exp(x - pivot);
  } else {
    scaled = scaled * std::exp(pivot - x) + 1.0;
    pivot = x;
  }
}

double SignedLogAccumulator::Side::log_value() const {
  if (pivot == kNegInf) return kNegInf;
  return pivot + std::log(scaled);
}

void SignedLogAccumulator::add(SignedLog term) {
  if (term.sign > 0) {
    pos_.add(term.log_mag);
  } else if (term.sign < 0) {
    neg_.add(term.log_mag);
  }
}

SignedLog SignedLogAccumulator::sum() const {
  const double lp = pos_.log_value();
  const double ln = neg_.log_value();
  if (lp == ln) return {};  // covers exact cancellation and both empty
  if (lp > ln) return SignedLog::from_log(lp + std::log1p(-std::exp(ln - lp)), 1);
  return SignedLog::from_log(ln + std::log1p(-std::exp(lp - ln)), -1);
}

SignedLog signed_log_sum(std::span<const SignedLog> terms) {
  double pos_pivot = kNegInf;
  double neg_pivot = kNegInf;
  for (const SignedLog& t : terms) {
    if (t.sign > 0) pos_pivot = std::max(pos_pivot, t.log_mag);
    if (t.sign < 0) neg_pivot = std::max(neg_pivot, t.log_mag);
  }
  double pos = 0.0;
  double neg = 0.0;
  for (const SignedLog& t : terms) {
    if (t.sign > 0) pos += std::exp(t.log_mag - pos_pivot);
    if (t.sign < 0) neg += std::exp(t.log_mag - neg_pivot);
  }
  const double lp = pos_pivot == kNegInf ? kNegInf : pos_pivot + std::log(pos);
  const double ln = neg_pivot == kNegInf ? kNegInf : neg_pivot + std::log(neg);
  if (lp == ln) return {};
  if (lp > ln) return SignedLog::from_log(lp + std::log1p(-std::exp(ln - lp)), 1);
  return SignedLog::from_log(ln + std::log1p(-std::exp(lp - ln)), -1);
}

std::shared_ptr<const std::vector<double>> binomial_log_pmf(std::int64_t k, double p) {
  if (k < 0 || !(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("binomial_log_pmf: requires k >= 0 and p in [0, 1]");
  }
  using Key = std::pair<std::int64_t, std::uint64_t>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;
  constexpr std::size_t kMaxCached = 64;

  const Key key{k, std::bit_cast<std::uint64_t>(p)};
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  auto table = std::make_shared<std::vector<double>>(static_cast<std::size_t>(k) + 1, kNegInf);
  if (p == 0.0) {
    (*table)[0] = 0.0;
  } else if (p == 1.0) {
    (*table)[static_cast<std::size_t>(k)] = 0.0;
  } else {
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    for (std::int64_t m = 0; m <= k; ++m) {
      (*table)[static_cast<std::size_t>(m)] =
          log_binomial(k, m) + static_cast<double>(m) * log_p + static_cast<double>(k - m) * log_q;
    }
  }

  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() >= kMaxCached) cache.clear();
  auto [it, inserted] = cache.emplace(key, std::move(table));
  return it->second;
}

BinomialMomentTable::BinomialMomentTable(std::int64_t k, double p, int max_order) {
  if (k < 1 || !(p >= 0.0 && p <= 1.0) || max_order < 0) {
    throw std::domain_error("BinomialMomentTable: requires k >= 1, p in [0, 1], order >= 0");
  }
  moments_.assign(static_cast<std::size_t>(max_order) + 1, SignedLog::zero());
  moments_[0] = SignedLog::from_log(0.0);
  if (max_order == 0) return;

  const auto log_pmf = binomial_log_pmf(k, p);
  const double mean = static_cast<double>(k) * p;
  std::vector<SignedLogAccumulator> acc(static_cast<std::size_t>(max_order) + 1);
  for (std::int64_t m = 0; m <= k; ++m) {
    const double lw = (*log_pmf)[static_cast<std::size_t>(m)];
    const double dev = static_cast<double>(m) - mean;
    if (lw == kNegInf || dev == 0.0) continue;
    const double log_dev = std::log(std::abs(dev));
    const int dev_sign = dev > 0 ? 1 : -1;
    int sign = 1;
    for (int j = 1; j <= max_order; ++j) {
      sign *= dev_sign;
      acc[static_cast<std::size_t>(j)].add_log(lw + j * log_dev, sign);
    }
  }
  for (int j = 1; j <= max_order; ++j) {
    moments_[static_cast<std::size_t>(j)] = acc[static_cast<std::size_t>(j)].sum();
  }
}

SignedLog BinomialMomentTable::moment(int order) const {
  if (order < 0 || order > max_order()) {
    throw std::out_of_range("BinomialMomentTable: order out of range");
  }
  return moments_[static_cast<std::size_t>(order)];
}

double binom_central_moment(std::int64_t k, double p, int j) {
  if (j < 0) throw std::domain_error("binom_central_moment: j must be nonnegative");
  return BinomialMomentTable(k, p, j).moment(j).to_real();
}

}  // namespace rdpacct
