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

#include "rdpacct/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rdpacct {
namespace {

void check_open_unit(double v, const char* who, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::domain_error(std::string(who) + ": " + what + " must lie in (0, 1)");
  }
}

DpGuarantee degenerate_guarantee(double eps0) {
  DpGuarantee g;
  g.eps = eps0;
  g.eps_unclamped = eps0;
  g.delta = 0.0;
  g.provenance = Provenance::kBaselineClonesPipeline;
  g.degenerate = true;
  return g;
}

}  // namespace

BaselineConfig default_baseline_config(double delta) {
  check_open_unit(delta, "baseline", "delta");
  BaselineConfig cfg;
  cfg.delta_shuffle = 0.5 * delta;
  cfg.delta_comp = 0.5 * delta;
  return cfg;
}

bool clones_condition_ok(double eps0, std::int64_t n_eff, double delta) {
  check_open_unit(delta, "clones_condition_ok", "delta");
  if (n_eff < 1) throw std::domain_error("clones_condition_ok: n_eff must be >= 1");
  return eps0 <= std::log(static_cast<double>(n_eff) / (16.0 * std::log(2.0 / delta)));
}

bool blanket_condition_ok(double eps0, std::int64_t n_eff, double delta) {
  check_open_unit(delta, "blanket_condition_ok", "delta");
  if (n_eff < 1) throw std::domain_error("blanket_condition_ok: n_eff must be >= 1");
  return eps0 <= 0.5 * std::log(static_cast<double>(n_eff) / -std::log(delta));
}

double clones_closed_form(double eps0, std::int64_t n_eff, double delta) {
  check_open_unit(delta, "clones_closed_form", "delta");
  if (n_eff < 1) throw std::domain_error("clones_closed_form: n_eff must be >= 1");
  const double n = static_cast<double>(n_eff);
  const double e0 = std::exp(eps0);
  const double shrink = std::expm1(eps0) / (e0 + 1.0);
  const double inner =
      8.0 * std::sqrt(e0 * std::log(4.0 / delta)) / std::sqrt(n) + 8.0 * e0 / n;
  return std::log1p(shrink * inner);
}

DpGuarantee shuffle_amplify(double eps0, std::int64_t k, double delta) {
  if (k < 2) throw std::domain_error("shuffle_amplify: requires k >= 2 clients");
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) {
    throw std::domain_error("shuffle_amplify: eps0 must be finite and >= 0");
  }
  check_open_unit(delta, "shuffle_amplify", "delta");
  if (eps0 == 0.0) {
    DpGuarantee g;
    g.delta = delta;
    g.provenance = Provenance::kBaselineClonesPipeline;
    return g;
  }
  if (!clones_condition_ok(eps0, k, delta)) return degenerate_guarantee(eps0);

  const double eps = clones_closed_form(eps0, k, delta);
  if (eps >= eps0) return degenerate_guarantee(eps0);

  DpGuarantee g;
  g.eps = eps;
  g.eps_unclamped = eps;
  g.delta = delta;
  g.provenance = Provenance::kBaselineClonesPipeline;
  return g;
}

DpGuarantee amplify_by_subsampling(const DpGuarantee& g, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::domain_error("amplify_by_subsampling: gamma must lie in (0, 1]");
  }
  DpGuarantee out = g;
  out.eps = std::log1p(gamma * std::expm1(g.eps));
  out.eps_unclamped = out.eps;
  out.delta = gamma * g.delta;
  return out;
}

DpGuarantee strong_compose(const DpGuarantee& g, std::int64_t rounds, double delta_slack) {
  if (rounds < 1) throw std::domain_error("strong_compose: rounds T must be >= 1");
  check_open_unit(delta_slack, "strong_compose", "delta_slack");
  const double t = static_cast<double>(rounds);
  const double eps = g.eps;
  const double basic = t * eps;
  const double drift = t * eps * std::tanh(0.5 * eps);  // T eps (e^eps-1)/(e^eps+1)
  const double second =
      drift + eps * std::sqrt(2.0 * t * std::log(std::numbers::e + std::sqrt(t * eps * eps) / delta_slack));
  const double third = drift + eps * std::sqrt(2.0 * t * std::log(1.0 / delta_slack));

  DpGuarantee out = g;
  out.eps = std::min({basic, second, third});
  out.eps_unclamped = out.eps;
  out.delta = t * g.delta + delta_slack;
  return out;
}

DpGuarantee baseline_total(const SubsampledShuffleParams& params, std::int64_t rounds, double delta) {
  return baseline_total(params, rounds, default_baseline_config(delta));
}

DpGuarantee baseline_total(const SubsampledShuffleParams& params, std::int64_t rounds,
                           const BaselineConfig& cfg) {
  if (rounds < 1) throw std::domain_error("baseline_total: rounds T must be >= 1");
  check_open_unit(cfg.delta_shuffle, "baseline_total", "delta_shuffle");
  check_open_unit(cfg.delta_comp, "baseline_total", "delta_comp");
  const double per_round = cfg.delta_shuffle / static_cast<double>(rounds);
  DpGuarantee g = shuffle_amplify(params.eps0(), params.k(), per_round);
  g = amplify_by_subsampling(g, params.gamma());
  g = strong_compose(g, rounds, cfg.delta_comp);
  g.provenance = Provenance::kBaselineClonesPipeline;
  return g;
}

}  // namespace rdpacct
