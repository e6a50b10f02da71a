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

// Composition of T identical rounds in RDP and conversion to (eps, delta)-DP:
//
//   eps = min_lambda  T eps(lambda) + (ln(1/delta) + (lambda-1) ln(1-1/lambda) - ln lambda) / (lambda-1)

#ifndef RDPACCT_ACCOUNTANT_HPP_
#define RDPACCT_ACCOUNTANT_HPP_

#include <cstdint>
#include <optional>

#include "rdpacct/shuffle_rdp.hpp"

namespace rdpacct {

enum class Provenance { kOursRdpUpper, kOursRdpLower, kBaselineClonesPipeline, kExactOracle };

const char* provenance_name(Provenance p);

struct DpGuarantee {
  double eps = 0.0;
  /// In (0, 1), except that a degenerate baseline reports delta = 0.
  double delta = 0.0;
  Provenance provenance = Provenance::kOursRdpUpper;
  std::optional<int> argmin_lambda;
  /// eps before clamping at zero.
  double eps_unclamped = 0.0;
  /// The baseline fell back to (eps0, 0) in at least one step.
  bool degenerate = false;
};

inline constexpr int kDefaultLambdaMax = 2048;
/// The order search stops after this many consecutive increases unless
/// exact_search is set.
inline constexpr int kEarlyExitPatience = 32;

struct AccountantConfig {
  std::int64_t rounds = 1;
  double delta = 1e-5;
  int lambda_max = kDefaultLambdaMax;
  bool exact_search = false;
};

/// Throws std::domain_error on rounds < 1, delta outside (0,1) or lambda_max < 2.
void validate_config(const AccountantConfig& cfg);

/// Entry-wise (lambda, T eps(lambda)).
RdpCurve compose(const RdpCurve& curve, std::int64_t rounds);

/// (ln(1/delta) + (lambda-1) ln(1-1/lambda) - ln lambda) / (lambda-1)
double conversion_penalty(int lambda, double delta);

/// Minimizes over every tabulated order.
DpGuarantee rdp_to_dp(const RdpCurve& curve, double delta);

/// Tabulates the upper bound lazily over 2..lambda_max, composes over
/// cfg.rounds and converts.
DpGuarantee total_privacy(const SubsampledShuffleParams& params, const AccountantConfig& cfg);

/// Same pipeline on the lower bound.
DpGuarantee total_privacy_lower(const SubsampledShuffleParams& params, const AccountantConfig& cfg);

/// Pipeline on an arbitrary evaluator; provenance follows its kind.
DpGuarantee minimize_over_orders(RdpEvaluator& eval, const AccountantConfig& cfg);

}  // namespace rdpacct

#endif  // RDPACCT_ACCOUNTANT_HPP_
