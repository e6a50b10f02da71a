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

// Approximate-DP comparison pipeline: shuffle amplification through the
// clones closed form, then amplification by subsampling, then strong
// composition over T rounds.

#ifndef RDPACCT_BASELINES_HPP_
#define RDPACCT_BASELINES_HPP_

#include <cstdint>

#include "rdpacct/accountant.hpp"
#include "rdpacct/shuffle_rdp.hpp"

namespace rdpacct {

enum class BaselineVariant { kClonesClosedForm };

struct BaselineConfig {
  BaselineVariant variant = BaselineVariant::kClonesClosedForm;
  /// Summed over all rounds; each round's shuffle step receives delta_shuffle / T.
  double delta_shuffle = 0.0;
  /// Slack handed to strong composition.
  double delta_comp = 0.0;
};

/// The default split: delta/2 for the shuffle steps, delta/2 for composition.
BaselineConfig default_baseline_config(double delta);

/// eps0 <= ln(n_eff / (16 ln(2/delta)))
bool clones_condition_ok(double eps0, std::int64_t n_eff, double delta);

/// eps0 <= ln(n_eff / ln(1/delta)) / 2
bool blanket_condition_ok(double eps0, std::int64_t n_eff, double delta);

/// ln(1 + (e^eps0-1)/(e^eps0+1) (8 sqrt(e^eps0 ln(4/delta)) / sqrt(n) + 8 e^eps0 / n)),
/// evaluated whether or not the condition holds.
double clones_closed_form(double eps0, std::int64_t n_eff, double delta);

/// Shuffling k reports of an eps0-LDP randomizer. Returns the degenerate
/// (eps0, 0) guarantee when the clones condition fails or when the closed form
/// would not improve on eps0.
DpGuarantee shuffle_amplify(double eps0, std::int64_t k, double delta);

/// eps' = ln(1 + gamma (e^eps - 1)), delta' = gamma delta.
DpGuarantee amplify_by_subsampling(const DpGuarantee& g, double gamma);

/// Homogeneous T-fold strong composition:
///   min{ T eps,
///        T eps (e^eps-1)/(e^eps+1) + eps sqrt(2T ln(e + sqrt(T eps^2)/slack)),
///        T eps (e^eps-1)/(e^eps+1) + eps sqrt(2T ln(1/slack)) }
/// with delta_total = T delta + slack.
DpGuarantee strong_compose(const DpGuarantee& g, std::int64_t rounds, double delta_slack);

DpGuarantee baseline_total(const SubsampledShuffleParams& params, std::int64_t rounds, double delta);
DpGuarantee baseline_total(const SubsampledShuffleParams& params, std::int64_t rounds,
                           const BaselineConfig& cfg);

}  // namespace rdpacct

#endif  // RDPACCT_BASELINES_HPP_
