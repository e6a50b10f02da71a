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

// Clipped, locally randomized, shuffled, subsampled SGD on convex ERM over an
// l2 ball. Each round samples k of n clients without replacement; every
// sampled client clips its gradient in l_inf, randomizes it with VecMech, the
// messages are shuffled and averaged, and the server takes a projected step.

#ifndef RDPACCT_CLDP_SGD_HPP_
#define RDPACCT_CLDP_SGD_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdpacct/accountant.hpp"
#include "rdpacct/ldp.hpp"

namespace rdpacct {

enum class Loss { kLeastSquares, kLogistic };

const char* loss_name(Loss loss);

/// Euclidean projection onto {||theta||_2 <= radius}.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> project_l2_ball(
    const Eigen::MatrixBase<Derived>& theta, typename Derived::Scalar radius) {
  using Scalar = typename Derived::Scalar;
  const Scalar norm = theta.norm();
  if (norm <= radius) return theta;
  return theta * (radius / norm);
}

/// F(theta) = (1/n) sum_i f(theta, (a_i, y_i)) on the ball of the given radius.
/// Least squares: f = (a^T theta - y)^2 / 2. Logistic: f = ln(1 + exp(-y a^T theta)), y = +-1.
class ConvexProblem {
 public:
  ConvexProblem(Eigen::MatrixXd features, Eigen::VectorXd targets, Loss loss, double radius);

  /// Rows of features uniform in [-1, 1]^d; targets from a planted parameter
  /// of norm 0.8 * radius with Gaussian noise (signs of it for logistic).
  static ConvexProblem synthetic(Loss loss, int n, int dim, double radius, std::uint64_t seed);

  int n() const { return static_cast<int>(features_.rows()); }
  int dim() const { return static_cast<int>(features_.cols()); }
  Loss loss() const { return loss_; }
  double radius() const { return radius_; }
  double diameter() const { return 2.0 * radius_; }
  /// Bound on ||grad f(theta, d_i)||_inf over the ball.
  double lipschitz() const { return lipschitz_; }

  double objective(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd sample_gradient(int i, const Eigen::VectorXd& theta) const;
  Eigen::VectorXd full_gradient(const Eigen::VectorXd& theta) const;

  const Eigen::VectorXd& minimizer() const { return minimizer_; }
  double optimum() const { return optimum_; }

 private:
  void solve();

  Eigen::MatrixXd features_;
  Eigen::VectorXd targets_;
  Loss loss_;
  double radius_;
  double lipschitz_ = 0.0;
  Eigen::VectorXd minimizer_;
  double optimum_ = 0.0;
};

enum class Schedule { kPaper, kConstant };

struct SgdConfig {
  std::int64_t rounds = 1;
  int cohort = 1;
  double eps0 = 1.0;
  /// l_inf clipping radius; 0 selects the problem's Lipschitz constant.
  double clip = 0.0;
  Schedule schedule = Schedule::kPaper;
  /// Step size under Schedule::kConstant.
  double eta = 0.1;
  std::uint64_t seed = 0;
  double delta = 1e-5;
  /// false bypasses VecMech and sends clipped gradients in the clear.
  bool randomize = true;
  bool shuffle = true;
  int lambda_max = kDefaultLambdaMax;
};

struct TrajectoryPoint {
  std::int64_t round;
  double objective;
  double suboptimality;
};

struct SgdRunReport {
  std::vector<TrajectoryPoint> trajectory;
  Eigen::VectorXd theta;
  double final_objective = 0.0;
  double final_suboptimality = 0.0;
  /// Average of ||g_bar_t||^2 over the rounds.
  double grad_second_moment = 0.0;
  double step_d = 0.0;
  double step_g = 0.0;
  /// Present iff the run randomized.
  std::optional<DpGuarantee> privacy;
};

/// Throws std::domain_error when cfg is inconsistent with the problem.
void validate_sgd_config(const ConvexProblem& problem, const SgdConfig& cfg);

/// Clip radius in effect.
double effective_clip(const ConvexProblem& problem, const SgdConfig& cfg);

/// d min(C, L)^2 + G_inf^2(C) / k; the noise term is dropped when cfg.randomize is false.
double second_moment_bound(const ConvexProblem& problem, const SgdConfig& cfg);

/// 2 D G (2 + ln T) / sqrt(T)
double convergence_bound(double diameter, double g, std::int64_t rounds);

/// Mean of the decoded messages; the result does not depend on their order.
Eigen::VectorXd aggregate_messages(const std::vector<VecMessage>& messages, const VecMech& mech);

/// Record every max(1, T/500) rounds, plus the last round.
std::int64_t trajectory_stride(std::int64_t rounds);

SgdRunReport run(const ConvexProblem& problem, const SgdConfig& cfg);

/// Monte Carlo estimate of E||g_bar||^2 at a seeded random point of the ball.
double grad_second_moment_check(const ConvexProblem& problem, const SgdConfig& cfg, int samples);

/// Projected full-batch gradient descent with the same schedule and clipping;
/// reference for the bypassed k = n run.
std::vector<double> reference_gd(const ConvexProblem& problem, const SgdConfig& cfg);

}  // namespace rdpacct

#endif  // RDPACCT_CLDP_SGD_HPP_
