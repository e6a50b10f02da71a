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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rdpacct {
namespace {

void check_delta(double delta, const char* who) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error(std::string(who) + ": delta must lie in (0, 1)");
  }
}

Provenance provenance_of(BoundKind kind) {
  switch (kind) {
    case BoundKind::kUpperBound:
      return Provenance::kOursRdpUpper;
    case BoundKind::kLowerBound:
      return Provenance::kOursRdpLower;
    case BoundKind::kExact:
      return Provenance::kExactOracle;
  }
  return Provenance::kOursRdpUpper;
}

DpGuarantee finish(double best, int argmin, double delta, Provenance provenance) {
  DpGuarantee g;
  g.eps_unclamped = best;
  g.eps = std::max(best, 0.0);
  g.delta = delta;
  g.provenance = provenance;
  g.argmin_lambda = argmin;
  return g;
}

}  // namespace

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kOursRdpUpper:
      return "ours_rdp_upper";
    case Provenance::kOursRdpLower:
      return "ours_rdp_lower";
    case Provenance::kBaselineClonesPipeline:
      return "baseline_clones_pipeline";
    case Provenance::kExactOracle:
      return "exact_oracle";
  }
  return "unknown";
}

void validate_config(const AccountantConfig& cfg) {
  if (cfg.rounds < 1) throw std::domain_error("AccountantConfig: rounds T must be >= 1");
  check_delta(cfg.delta, "AccountantConfig");
  if (cfg.lambda_max < 2) throw std::domain_error("AccountantConfig: lambda_max must be >= 2");
}

RdpCurve compose(const RdpCurve& curve, std::int64_t rounds) {
  if (rounds < 1) throw std::domain_error("compose: rounds T must be >= 1");
  RdpCurve out = curve;
  for (RdpEntry& e : out.entries) e.eps *= static_cast<double>(rounds);
  return out;
}

double conversion_penalty(int lambda, double delta) {
  if (lambda < 2) throw std::domain_error("conversion_penalty: lambda must be >= 2");
  check_delta(delta, "conversion_penalty");
  const double l = static_cast<double>(lambda);
  return (-std::log(delta) + (l - 1.0) * std::log1p(-1.0 / l) - std::log(l)) / (l - 1.0);
}

DpGuarantee rdp_to_dp(const RdpCurve& curve, double delta) {
  check_delta(delta, "rdp_to_dp");
  if (curve.entries.empty()) throw std::domain_error("rdp_to_dp: empty RDP curve");
  validate_curve(curve);
  double best = kInf;
  int argmin = curve.entries.front().lambda;
  for (const RdpEntry& e : curve.entries) {
    const double v = e.eps + conversion_penalty(e.lambda, delta);
    if (v < best) {
      best = v;
      argmin = e.lambda;
    }
  }
  return finish(best, argmin, delta, provenance_of(curve.kind));
}

DpGuarantee minimize_over_orders(RdpEvaluator& eval, const AccountantConfig& cfg) {
  validate_config(cfg);
  const double rounds = static_cast<double>(cfg.rounds);
  double best = kInf;
  double prev = kInf;
  int argmin = 2;
  int rising = 0;
  for (int lambda = 2; lambda <= cfg.lambda_max; ++lambda) {
    const double v = rounds * eval(lambda) + conversion_penalty(lambda, cfg.delta);
    if (v < best) {
      best = v;
      argmin = lambda;
    }
    rising = v > prev ? rising + 1 : 0;
    prev = v;
    if (!cfg.exact_search && rising >= kEarlyExitPatience) break;
  }
  return finish(best, argmin, cfg.delta, provenance_of(eval.kind()));
}

DpGuarantee total_privacy(const SubsampledShuffleParams& params, const AccountantConfig& cfg) {
  validate_config(cfg);
  auto eval = make_upper_evaluator(params);
  return minimize_over_orders(*eval, cfg);
}

DpGuarantee total_privacy_lower(const SubsampledShuffleParams& params, const AccountantConfig& cfg) {
  validate_config(cfg);
  auto eval = make_lower_evaluator(params);
  return minimize_over_orders(*eval, cfg);
}

}  // namespace rdpacct
