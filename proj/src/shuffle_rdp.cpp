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

#include "rdpacct/shuffle_rdp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rdpacct {
namespace {

// ln(e^x - 1) for x > 0.
double log_expm1(double x) {
  if (x > 30.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

void check_lambda(int lambda, const char* who) {
  if (lambda < 2) {
    throw std::domain_error(std::string(who) + ": order lambda must be an integer >= 2, got " +
                            std::to_string(lambda));
  }
}

void check_alpha(int alpha, const char* who) {
  if (alpha < 2) {
    throw std::domain_error(std::string(who) + ": alpha must be an integer >= 2, got " +
                            std::to_string(alpha));
  }
}

void check_eps0(double eps0, const char* who) {
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) {
    throw std::domain_error(std::string(who) + ": eps0 must be finite and >= 0");
  }
}

// ln of the first summand of the ternary bound with cohort size m:
//   alpha = 2: 4 (e^eps0 - 1)^2 / (m e^eps0)
//   alpha > 2: alpha Gamma(alpha/2) (2 (e^{2 eps0} - 1)^2 / (m e^{2 eps0}))^{alpha/2}
double log_first_term(int alpha, double m, double eps0) {
  if (eps0 == 0.0) return kNegInf;
  if (alpha == 2) return std::log(4.0) + 2.0 * log_expm1(eps0) - std::log(m) - eps0;
  const double base = std::numbers::ln2 + 2.0 * log_expm1(2.0 * eps0) - std::log(m) - 2.0 * eps0;
  return std::log(static_cast<double>(alpha)) + log_gamma(0.5 * alpha) + 0.5 * alpha * base;
}

// ln(e^eps0 - e^-eps0) = ln(2 sinh eps0)
double log_two_sinh(double eps0) { return eps0 + std::log(-std::expm1(-2.0 * eps0)); }

// ln of (e^eps0 - e^-eps0)^alpha e^{-(k-1)/(8 e^eps0)}
double log_tail_term(int alpha, std::int64_t k, double eps0) {
  if (eps0 == 0.0) return kNegInf;
  return alpha * log_two_sinh(eps0) - static_cast<double>(k - 1) / (8.0 * std::exp(eps0));
}

class UpperEvaluator final : public RdpEvaluator {
 public:
  explicit UpperEvaluator(const SubsampledShuffleParams& params) : params_(params) {
    if (params.k() < 2) {
      throw std::domain_error("rdp_upper: requires k >= 2 sampled clients");
    }
    log_gamma_ = std::log(params.gamma());
  }

  double operator()(int lambda) override {
    check_lambda(lambda, "rdp_upper");
    if (params_.eps0() == 0.0) return 0.0;
    while (static_cast<int>(log_zeta_.size()) <= lambda) {
      const int j = static_cast<int>(log_zeta_.size());
      log_zeta_.push_back(j < 2 ? kNegInf : log_zeta_shuffle(j, params_.k(), params_.eps0()));
    }
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(lambda) - 1);
    for (int j = 2; j <= lambda; ++j) {
      terms.push_back(log_binomial(lambda, j) + j * log_gamma_ + log_zeta_[static_cast<std::size_t>(j)]);
    }
    return log1p_exp(log_sum_exp(terms)) / (lambda - 1);
  }

  BoundKind kind() const override { return BoundKind::kUpperBound; }
  const SubsampledShuffleParams& params() const override { return params_; }

 private:
  SubsampledShuffleParams params_;
  double log_gamma_;
  std::vector<double> log_zeta_;
};

class LowerEvaluator final : public RdpEvaluator {
 public:
  explicit LowerEvaluator(const SubsampledShuffleParams& params) : params_(params) {
    const double eps0 = params.eps0();
    const double k = static_cast<double>(params.k());
    p_ = 1.0 / (std::exp(eps0) + 1.0);
    log_gamma_ = std::log(params.gamma());
    if (eps0 > 0.0) {
      // (e^{2 eps0} - 1) / (k e^eps0)
      log_slope_ = log_expm1(2.0 * eps0) - eps0 - std::log(k);
      log_second_ = 2.0 * log_expm1(eps0) - std::log(k) - eps0;
    }
  }

  double operator()(int lambda) override {
    check_lambda(lambda, "rdp_lower");
    if (params_.eps0() == 0.0) return 0.0;
    if (!moments_ || moments_->max_order() < lambda) {
      int order = moments_ ? moments_->max_order() : 32;
      while (order < lambda) order *= 2;
      moments_ = std::make_unique<BinomialMomentTable>(params_.k(), p_, order);
    }
    SignedLogAccumulator sum;
    sum.add_log(log_binomial(lambda, 2) + 2.0 * log_gamma_ + log_second_);
    for (int j = 3; j <= lambda; ++j) {
      const SignedLog m = moments_->moment(j);
      if (m.is_zero()) continue;
      sum.add_log(log_binomial(lambda, j) + j * (log_gamma_ + log_slope_) + m.log_mag, m.sign);
    }
    const SignedLog s = sum.sum();
    // The sum is E[(1 + gamma X)^lambda] - 1 >= 0; a negative value is rounding.
    if (s.sign <= 0) return 0.0;
    return log1p_exp(s.log_mag) / (lambda - 1);
  }

  BoundKind kind() const override { return BoundKind::kLowerBound; }
  const SubsampledShuffleParams& params() const override { return params_; }

 private:
  SubsampledShuffleParams params_;
  double p_ = 0.5;
  double log_gamma_ = 0.0;
  double log_slope_ = kNegInf;
  double log_second_ = kNegInf;
  std::unique_ptr<BinomialMomentTable> moments_;
};

}  // namespace

SubsampledShuffleParams::SubsampledShuffleParams(std::int64_t n, std::int64_t k, double eps0)
    : n_(n), k_(k), eps0_(eps0) {
  if (k < 1 || k > n) {
    throw std::domain_error("SubsampledShuffleParams: requires 1 <= k <= n, got n=" +
                            std::to_string(n) + " k=" + std::to_string(k));
  }
  check_eps0(eps0, "SubsampledShuffleParams");
}

const char* bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::kUpperBound:
      return "upper";
    case BoundKind::kLowerBound:
      return "lower";
    case BoundKind::kExact:
      return "exact";
  }
  return "unknown";
}

void validate_curve(const RdpCurve& curve) {
  int prev = 1;
  for (const RdpEntry& e : curve.entries) {
    if (e.lambda <= prev) {
      throw std::domain_error("RdpCurve: orders must be strictly increasing and >= 2");
    }
    if (!(e.eps >= 0.0) || !std::isfinite(e.eps)) {
      throw std::domain_error("RdpCurve: eps(lambda) must be finite and >= 0");
    }
    prev = e.lambda;
  }
}

std::int64_t effective_cohort(std::int64_t k, double eps0) {
  return static_cast<std::int64_t>(std::floor(static_cast<double>(k - 1) / (2.0 * std::exp(eps0)))) + 1;
}

double zeta_special(int alpha, std::int64_t m, double eps0) {
  check_alpha(alpha, "zeta_special");
  check_eps0(eps0, "zeta_special");
  if (m < 1) throw std::domain_error("zeta_special: requires m >= 1");
  return std::exp(log_first_term(alpha, static_cast<double>(m), eps0));
}

double log_zeta_shuffle(int alpha, std::int64_t k, double eps0) {
  check_alpha(alpha, "zeta_shuffle");
  check_eps0(eps0, "zeta_shuffle");
  if (k < 2) throw std::domain_error("zeta_shuffle: requires k >= 2 clients");
  const double k_bar = static_cast<double>(effective_cohort(k, eps0));
  return log_add_exp(log_first_term(alpha, k_bar, eps0), log_tail_term(alpha, k, eps0));
}

ZetaBound zeta_shuffle(int alpha, std::int64_t k, double eps0) {
  return {alpha, std::exp(log_zeta_shuffle(alpha, k, eps0))};
}

double rdp_upper(int lambda, const SubsampledShuffleParams& params) {
  check_lambda(lambda, "rdp_upper");
  UpperEvaluator eval(params);
  return eval(lambda);
}

double rdp_lower(int lambda, const SubsampledShuffleParams& params) {
  check_lambda(lambda, "rdp_lower");
  LowerEvaluator eval(params);
  return eval(lambda);
}

std::unique_ptr<RdpEvaluator> make_upper_evaluator(const SubsampledShuffleParams& params) {
  return std::make_unique<UpperEvaluator>(params);
}

std::unique_ptr<RdpEvaluator> make_lower_evaluator(const SubsampledShuffleParams& params) {
  return std::make_unique<LowerEvaluator>(params);
}

RdpCurve tabulate(RdpEvaluator& eval, int lambda_min, int lambda_max) {
  check_lambda(lambda_min, "tabulate");
  if (lambda_max < lambda_min) throw std::domain_error("tabulate: empty order range");
  RdpCurve curve{eval.params(), {}, eval.kind()};
  curve.entries.reserve(static_cast<std::size_t>(lambda_max - lambda_min) + 1);
  for (int lambda = lambda_min; lambda <= lambda_max; ++lambda) {
    curve.entries.push_back({lambda, eval(lambda)});
  }
  return curve;
}

RdpCurve upper_curve(const SubsampledShuffleParams& params, int lambda_min, int lambda_max) {
  UpperEvaluator eval(params);
  return tabulate(eval, lambda_min, lambda_max);
}

RdpCurve lower_curve(const SubsampledShuffleParams& params, int lambda_min, int lambda_max) {
  LowerEvaluator eval(params);
  return tabulate(eval, lambda_min, lambda_max);
}

}  // namespace rdpacct
