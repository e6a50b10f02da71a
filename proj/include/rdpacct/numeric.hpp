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

// Log-space arithmetic used by every bound in the library. Binomial
// coefficients up to C(4096, 2048) and Gamma terms are never formed in linear
// space; sums that may cancel are carried as separate positive and negative
// log-magnitude accumulators.

#ifndef RDPACCT_NUMERIC_HPP_
#define RDPACCT_NUMERIC_HPP_

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace rdpacct {

/// Module-wide relative tolerance for the special functions below.
inline constexpr double kRelativeTolerance = 1e-12;
/// Per-term relative accumulation error budget for signed_log_sum.
inline constexpr double kAccumulationTolerance = 1e-14;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A real number stored as sign * exp(log_mag). Zero is sign 0, log_mag -inf.
struct SignedLog {
  int sign = 0;
  double log_mag = kNegInf;

  static SignedLog zero() { return {}; }
  static SignedLog from_real(double x);
  /// exp(log_mag) with the given sign; log_mag = -inf collapses to zero.
  static SignedLog from_log(double log_mag, int sign = 1);

  double to_real() const;
  bool is_zero() const { return sign == 0; }

  SignedLog operator-() const { return {-sign, log_mag}; }
  friend SignedLog operator*(SignedLog a, SignedLog b);
};

/// log(exp(a) + exp(b)), exact for -inf arguments.
double log_add_exp(double a, double b);

/// log(sum exp(x_i)) using the max as pivot; empty input yields -inf.
double log_sum_exp(std::span<const double> xs);

/// log(1 + exp(x)) without overflow for large x.
double log1p_exp(double x);

/// ln C(n, k). Exact up to rounding for n <= 66; otherwise evaluated through
/// Stirling remainders so no large intermediate cancels. Throws
/// std::domain_error for negative arguments or k > n.
double log_binomial(std::int64_t n, std::int64_t k);

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

/// Sum of signed log-space terms. Positives and negatives are accumulated
/// separately and differenced at the larger magnitude.
SignedLog signed_log_sum(std::span<const SignedLog> terms);

/// Streaming form of signed_log_sum.
class SignedLogAccumulator {
 public:
  void add(SignedLog term);
  void add_log(double log_mag, int sign = 1) { add(SignedLog::from_log(log_mag, sign)); }
  SignedLog sum() const;

 private:
  struct Side {
    double pivot = kNegInf;
    double scaled = 0.0;  // sum of exp(x - pivot)
    void add(double x);
    double log_value() const;
  };
  Side pos_;
  Side neg_;
};

/// Log pmf of Bin(k, p) over m = 0..k. Tables are memoized per (k, p) behind a
/// mutex, so concurrent callers share them safely.
std::shared_ptr<const std::vector<double>> binomial_log_pmf(std::int64_t k, double p);

/// Central moments E[(m - kp)^j] of m ~ Bin(k, p) for j = 0..max_order,
/// computed by direct summation over m in log space.
class BinomialMomentTable {
 public:
  BinomialMomentTable(std::int64_t k, double p, int max_order);

  SignedLog moment(int order) const;
  int max_order() const { return static_cast<int>(moments_.size()) - 1; }

 private:
  std::vector<SignedLog> moments_;
};

/// E[(m - kp)^j] for m ~ Bin(k, p).
double binom_central_moment(std::int64_t k, double p, int j);

}  // namespace rdpacct

#endif  // RDPACCT_NUMERIC_HPP_
