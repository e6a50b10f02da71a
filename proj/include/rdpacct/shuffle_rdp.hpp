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

// Renyi-DP bounds for the subsampled shuffle mechanism: k of n clients are
// sampled, each applies an eps0-LDP randomizer, and the messages are shuffled.
//
// The upper bound is assembled from the ternary |chi|^alpha bound zeta(alpha)
// of the shuffle mechanism:
//
//   eps(lambda) <= 1/(lambda-1) ln(1 + sum_{j=2..lambda} C(lambda,j) gamma^j zeta(j)^j)
//
// The lower bound is the exact Renyi divergence of the 2RR instance, written
// through central moments of Bin(k, 1/(e^eps0+1)).

#ifndef RDPACCT_SHUFFLE_RDP_HPP_
#define RDPACCT_SHUFFLE_RDP_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "rdpacct/numeric.hpp"

namespace rdpacct {

class SubsampledShuffleParams {
 public:
  /// Throws std::domain_error unless 1 <= k <= n and eps0 is finite and >= 0.
  SubsampledShuffleParams(std::int64_t n, std::int64_t k, double eps0);

  std::int64_t n() const { return n_; }
  std::int64_t k() const { return k_; }
  double eps0() const { return eps0_; }
  /// Sampling rate k / n.
  double gamma() const { return static_cast<double>(k_) / static_cast<double>(n_); }

 private:
  std::int64_t n_;
  std::int64_t k_;
  double eps0_;
};

enum class BoundKind { kUpperBound, kLowerBound, kExact };

const char* bound_kind_name(BoundKind kind);

struct RdpEntry {
  int lambda;
  double eps;
};

/// eps(lambda) tabulated over strictly increasing integer orders >= 2.
struct RdpCurve {
  SubsampledShuffleParams params;
  std::vector<RdpEntry> entries;
  BoundKind kind;
};

/// Throws std::domain_error if the orders are not strictly increasing and
/// >= 2, or if some eps is negative or not finite.
void validate_curve(const RdpCurve& curve);

/// Bound on zeta(alpha)^alpha.
struct ZetaBound {
  int alpha;
  double value;
};

/// k_bar = floor((k-1)/(2 e^eps0)) + 1.
std::int64_t effective_cohort(std::int64_t k, double eps0);

/// Ternary bound for m clients that all hold the same dataset point.
double zeta_special(int alpha, std::int64_t m, double eps0);

/// Ternary bound of the shuffle mechanism with k >= 2 clients.
ZetaBound zeta_shuffle(int alpha, std::int64_t k, double eps0);

/// ln of zeta_shuffle(alpha, k, eps0).value; -inf at eps0 = 0.
double log_zeta_shuffle(int alpha, std::int64_t k, double eps0);

/// Upper bound on eps(lambda). Requires lambda >= 2 and k >= 2.
double rdp_upper(int lambda, const SubsampledShuffleParams& params);

/// Lower bound on eps(lambda). Requires lambda >= 2; k = 1 is accepted.
double rdp_lower(int lambda, const SubsampledShuffleParams& params);

/// Evaluates one bound at many orders, reusing per-parameter tables. Not
/// thread-safe; use one evaluator per thread.
class RdpEvaluator {
 public:
  virtual ~RdpEvaluator() = default;
  virtual double operator()(int lambda) = 0;
  virtual BoundKind kind() const = 0;
  virtual const SubsampledShuffleParams& params() const = 0;
};

std::unique_ptr<RdpEvaluator> make_upper_evaluator(const SubsampledShuffleParams& params);
std::unique_ptr<RdpEvaluator> make_lower_evaluator(const SubsampledShuffleParams& params);

/// Tabulates the evaluator over lambda_min..lambda_max inclusive.
RdpCurve tabulate(RdpEvaluator& eval, int lambda_min, int lambda_max);

RdpCurve upper_curve(const SubsampledShuffleParams& params, int lambda_min, int lambda_max);
RdpCurve lower_curve(const SubsampledShuffleParams& params, int lambda_min, int lambda_max);

}  // namespace rdpacct

#endif  // RDPACCT_SHUFFLE_RDP_HPP_
