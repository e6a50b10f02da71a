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

#include "rdpacct/cldp_sgd.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rdpacct {
namespace {

// Stream index reserved for server-side randomness (sampling, shuffling).
constexpr std::uint64_t kServerStream = std::numeric_limits<std::uint64_t>::max();

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double step_size(const SgdConfig& cfg, double d, double g, std::int64_t t) {
  if (cfg.schedule == Schedule::kConstant) return cfg.eta;
  return d / (g * std::sqrt(static_cast<double>(t)));
}

// Moves the first k entries of idx to a uniform k-subset (partial Fisher-Yates).
void sample_cohort(std::vector<int>& idx, int k, Rng& rng) {
  const int n = static_cast<int>(idx.size());
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
}

// One aggregated update direction g_bar at theta.
Eigen::VectorXd round_gradient(const ConvexProblem& problem, const SgdConfig& cfg, const VecMech* mech,
                               double clip_radius, const Eigen::VectorXd& theta, std::int64_t round,
                               std::vector<int>& idx) {
  Rng server = make_stream(cfg.seed, static_cast<std::uint64_t>(round), kServerStream);
  sample_cohort(idx, cfg.cohort, server);
  if (mech == nullptr) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(problem.dim());
    for (int c = 0; c < cfg.cohort; ++c) {
      sum += clip(problem.sample_gradient(idx[static_cast<std::size_t>(c)], theta), clip_radius, Norm::kLinf);
    }
    return sum / cfg.cohort;
  }
  std::vector<VecMessage> messages;
  messages.reserve(static_cast<std::size_t>(cfg.cohort));
  for (int c = 0; c < cfg.cohort; ++c) {
    const int client = idx[static_cast<std::size_t>(c)];
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(client));
    const Eigen::VectorXd g = clip(problem.sample_gradient(client, theta), clip_radius, Norm::kLinf);
    messages.push_back(mech->encode(g, rng));
  }
  if (cfg.shuffle) std::shuffle(messages.begin(), messages.end(), server);
  return aggregate_messages(messages, *mech);
}

}  // namespace

const char* loss_name(Loss loss) {
  return loss == Loss::kLeastSquares ? "least_squares" : "logistic";
}

ConvexProblem::ConvexProblem(Eigen::MatrixXd features, Eigen::VectorXd targets, Loss loss, double radius)
    : features_(std::move(features)), targets_(std::move(targets)), loss_(loss), radius_(radius) {
  if (features_.rows() < 1 || features_.cols() < 1) throw std::domain_error("ConvexProblem: empty dataset");
  if (targets_.size() != features_.rows()) throw std::domain_error("ConvexProblem: target count mismatch");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::domain_error("ConvexProblem: radius must be positive");
  if (!features_.allFinite() || !targets_.allFinite()) throw std::domain_error("ConvexProblem: non-finite data");
  if (loss_ == Loss::kLogistic && (targets_.array().abs() != 1.0).any()) {
    throw std::domain_error("ConvexProblem: logistic targets must be +-1");
  }
  for (Eigen::Index i = 0; i < features_.rows(); ++i) {
    const double a_inf = features_.row(i).lpNorm<Eigen::Infinity>();
    const double bound = loss_ == Loss::kLeastSquares
                             ? (features_.row(i).norm() * radius_ + std::abs(targets_(i))) * a_inf
                             : a_inf;
    lipschitz_ = std::max(lipschitz_, bound);
  }
  solve();
}

ConvexProblem ConvexProblem::synthetic(Loss loss, int n, int dim, double radius, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw std::domain_error("ConvexProblem::synthetic: requires n, d >= 1");
  Rng rng = make_stream(seed, 0, 0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = unif(rng);
  }
  Eigen::VectorXd planted(dim);
  for (int j = 0; j < dim; ++j) planted(j) = normal(rng);
  planted *= 0.8 * radius / planted.norm();
  Eigen::VectorXd y = a * planted;
  for (int i = 0; i < n; ++i) {
    y(i) += 0.1 * normal(rng);
    if (loss == Loss::kLogistic) y(i) = y(i) >= 0 ? 1.0 : -1.0;
  }
  return ConvexProblem(std::move(a), std::move(y), loss, radius);
}

double ConvexProblem::objective(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd margin = features_ * theta;
  if (loss_ == Loss::kLeastSquares) return 0.5 * (margin - targets_).squaredNorm() / n();
  double total = 0.0;
  for (Eigen::Index i = 0; i < margin.size(); ++i) total += softplus(-targets_(i) * margin(i));
  return total / n();
}

Eigen::VectorXd ConvexProblem::sample_gradient(int i, const Eigen::VectorXd& theta) const {
  const double margin = features_.row(i).dot(theta);
  if (loss_ == Loss::kLeastSquares) return (margin - targets_(i)) * features_.row(i).transpose();
  return -targets_(i) * sigmoid(-targets_(i) * margin) * features_.row(i).transpose();
}

Eigen::VectorXd ConvexProblem::full_gradient(const Eigen::VectorXd& theta) const {
  if (loss_ == Loss::kLeastSquares) {
    return features_.transpose() * (features_ * theta - targets_) / n();
  }
  const Eigen::VectorXd margin = features_ * theta;
  Eigen::VectorXd w(margin.size());
  for (Eigen::Index i = 0; i < margin.size(); ++i) w(i) = -targets_(i) * sigmoid(-targets_(i) * margin(i));
  return features_.transpose() * w / n();
}

void ConvexProblem::solve() {
  const Eigen::MatrixXd h = features_.transpose() * features_ / n();
  if (loss_ == Loss::kLeastSquares) {
    // KKT: (H + mu I) theta = b with mu >= 0 and mu (||theta|| - R) = 0.
    const Eigen::VectorXd b = features_.transpose() * targets_ / n();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const Eigen::VectorXd c = eig.eigenvectors().transpose() * b;
    const Eigen::VectorXd lam = eig.eigenvalues();
    auto theta_at = [&](double mu) {
      Eigen::VectorXd z(c.size());
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double denom = lam(i) + mu;
        z(i) = denom > 1e-14 * std::max(1.0, lam.maxCoeff()) ? c(i) / denom : 0.0;
      }
      return Eigen::VectorXd(eig.eigenvectors() * z);
    };
    Eigen::VectorXd theta = theta_at(0.0);
    if (theta.norm() > radius_) {
      double lo = 0.0;
      double hi = c.norm() / radius_;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (theta_at(mid).norm() > radius_ ? lo : hi) = mid;
      }
      theta = project_l2_ball(theta_at(hi), radius_);
    }
    minimizer_ = theta;
  } else {
    // Projected gradient descent with step 1/smoothness.
    const double smooth = 0.25 * h.selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff();
    const double eta = 1.0 / std::max(smooth, 1e-12);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim());
    for (int it = 0; it < 20000; ++it) {
      const Eigen::VectorXd next = project_l2_ball(theta - eta * full_gradient(theta), radius_);
      const double moved = (next - theta).norm();
      theta = next;
      if (moved < 1e-15) break;
    }
    minimizer_ = theta;
  }
  optimum_ = objective(minimizer_);
}

void validate_sgd_config(const ConvexProblem& problem, const SgdConfig& cfg) {
  if (cfg.rounds < 1) throw std::domain_error("SgdConfig: rounds T must be >= 1");
  if (cfg.cohort < 1 || cfg.cohort > problem.n()) {
    throw std::domain_error("SgdConfig: cohort k must satisfy 1 <= k <= n");
  }
  if (cfg.clip < 0.0 || !std::isfinite(cfg.clip)) throw std::domain_error("SgdConfig: clip radius must be > 0");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw std::domain_error("SgdConfig: delta must lie in (0, 1)");
  if (cfg.schedule == Schedule::kConstant && !(cfg.eta > 0.0)) {
    throw std::domain_error("SgdConfig: constant step size must be > 0");
  }
  if (cfg.randomize) {
    if (!(cfg.eps0 > 0.0) || !std::isfinite(cfg.eps0)) {
      throw std::domain_error("SgdConfig: eps0 must be finite and > 0 when randomizing");
    }
    if (cfg.cohort < 2) {
      throw std::domain_error("SgdConfig: the privacy bound needs a cohort of k >= 2 clients");
    }
    if (cfg.lambda_max < 2) throw std::domain_error("SgdConfig: lambda_max must be >= 2");
  }
}

double effective_clip(const ConvexProblem& problem, const SgdConfig& cfg) {
  return cfg.clip > 0.0 ? cfg.clip : problem.lipschitz();
}

double second_moment_bound(const ConvexProblem& problem, const SgdConfig& cfg) {
  const double c = effective_clip(problem, cfg);
  const double g = std::min(c, problem.lipschitz());
  double bound = problem.dim() * g * g;
  if (cfg.randomize) bound += VecMech(cfg.eps0, problem.dim(), c).variance_bound() / cfg.cohort;
  return bound;
}

double convergence_bound(double diameter, double g, std::int64_t rounds) {
  const double t = static_cast<double>(rounds);
  return 2.0 * diameter * g * (2.0 + std::log(t)) / std::sqrt(t);
}

Eigen::VectorXd aggregate_messages(const std::vector<VecMessage>& messages, const VecMech& mech) {
  if (messages.empty()) throw std::domain_error("aggregate_messages: no messages");
  // Integer tallies make the sum exact, so any permutation gives the same bits.
  Eigen::VectorXi tally = Eigen::VectorXi::Zero(mech.dim());
  for (const VecMessage& m : messages) {
    if (m.coord < 0 || m.coord >= mech.dim()) throw std::domain_error("aggregate_messages: bad coordinate");
    tally(m.coord) += m.sign;
  }
  return tally.cast<double>() * (mech.scale() / static_cast<double>(messages.size()));
}

std::int64_t trajectory_stride(std::int64_t rounds) { return std::max<std::int64_t>(1, rounds / 500); }

SgdRunReport run(const ConvexProblem& problem, const SgdConfig& cfg) {
  validate_sgd_config(problem, cfg);
  const double clip_radius = effective_clip(problem, cfg);
  std::optional<VecMech> mech;
  if (cfg.randomize) mech.emplace(cfg.eps0, problem.dim(), clip_radius);

  SgdRunReport report;
  report.step_d = problem.diameter();
  report.step_g = std::sqrt(second_moment_bound(problem, cfg));

  std::vector<int> idx(static_cast<std::size_t>(problem.n()));
  std::iota(idx.begin(), idx.end(), 0);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(problem.dim());
  const std::int64_t stride = trajectory_stride(cfg.rounds);
  auto record = [&](std::int64_t t) {
    const double f = problem.objective(theta);
    report.trajectory.push_back({t, f, f - problem.optimum()});
  };
  record(0);

  double moment_sum = 0.0;
  for (std::int64_t t = 1; t <= cfg.rounds; ++t) {
    const Eigen::VectorXd g =
        round_gradient(problem, cfg, mech ? &*mech : nullptr, clip_radius, theta, t, idx);
    moment_sum += g.squaredNorm();
    theta = project_l2_ball(theta - step_size(cfg, report.step_d, report.step_g, t) * g, problem.radius());
    if (t % stride == 0 || t == cfg.rounds) record(t);
  }

  report.theta = theta;
  report.final_objective = problem.objective(theta);
  report.final_suboptimality = report.final_objective - problem.optimum();
  report.grad_second_moment = moment_sum / static_cast<double>(cfg.rounds);
  if (cfg.randomize) {
    const SubsampledShuffleParams params(problem.n(), cfg.cohort, cfg.eps0);
    report.privacy = total_privacy(params, {cfg.rounds, cfg.delta, cfg.lambda_max, false});
  }
  return report;
}

double grad_second_moment_check(const ConvexProblem& problem, const SgdConfig& cfg, int samples) {
  validate_sgd_config(problem, cfg);
  if (samples < 1000) throw std::domain_error("grad_second_moment_check: needs at least 1000 samples");
  const double clip_radius = effective_clip(problem, cfg);
  std::optional<VecMech> mech;
  if (cfg.randomize) mech.emplace(cfg.eps0, problem.dim(), clip_radius);

  Rng rng = make_stream(cfg.seed, 0, kServerStream - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd theta(problem.dim());
  for (int j = 0; j < problem.dim(); ++j) theta(j) = normal(rng);
  theta *= problem.radius() * std::pow(unif(rng), 1.0 / problem.dim()) / theta.norm();

  std::vector<int> idx(static_cast<std::size_t>(problem.n()));
  std::iota(idx.begin(), idx.end(), 0);
  double total = 0.0;
  for (int s = 1; s <= samples; ++s) {
    total += round_gradient(problem, cfg, mech ? &*mech : nullptr, clip_radius, theta, s, idx).squaredNorm();
  }
  return total / samples;
}

std::vector<double> reference_gd(const ConvexProblem& problem, const SgdConfig& cfg) {
  validate_sgd_config(problem, cfg);
  SgdConfig plain = cfg;
  plain.randomize = false;
  const double clip_radius = effective_clip(problem, plain);
  const double d = problem.diameter();
  const double g = std::sqrt(second_moment_bound(problem, plain));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(cfg.rounds));
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(problem.dim());
  for (std::int64_t t = 1; t <= cfg.rounds; ++t) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(problem.dim());
    for (int i = 0; i < problem.n(); ++i) grad += clip(problem.sample_gradient(i, theta), clip_radius, Norm::kLinf);
    grad /= problem.n();
    theta = project_l2_ball(theta - step_size(plain, d, g, t) * grad, problem.radius());
    values.push_back(problem.objective(theta));
  }
  return values;
}

}  // namespace rdpacct
