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

// Discrete eps0-LDP randomizers: binary randomized response and a one-coordinate
// vector mechanism for the l_inf ball, plus clipping.

#ifndef RDPACCT_LDP_HPP_
#define RDPACCT_LDP_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace rdpacct {

using Rng = std::mt19937_64;

/// Independent stream for (seed, round, client).
Rng make_stream(std::uint64_t seed, std::uint64_t round, std::uint64_t client);

class Rr2Mech {
 public:
  explicit Rr2Mech(double eps0);

  double eps0() const { return eps0_; }
  /// 1 / (e^eps0 + 1)
  double flip_prob() const { return flip_; }
  double keep_prob() const { return 1.0 - flip_; }

  int randomize(int bit, Rng& rng) const;
  /// Row = input bit, column = output bit.
  Eigen::Matrix2d kernel() const;

 private:
  double eps0_;
  double flip_;
};

enum class Norm { kLinf, kL2 };

/// x / max(1, ||x|| / c).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> clip(const Eigen::MatrixBase<Derived>& x,
                                                                 typename Derived::Scalar c,
                                                                 Norm norm) {
  using Scalar = typename Derived::Scalar;
  if (!(c > Scalar(0))) throw std::domain_error("clip: radius must be positive");
  const Scalar size = norm == Norm::kLinf ? x.template lpNorm<Eigen::Infinity>() : x.norm();
  if (size <= c) return x;
  return x * (c / size);
}

/// A message of VecMech: one coordinate and one sign.
struct VecMessage {
  int coord;
  int sign;  // -1 or +1
};

/// Samples a coordinate j uniformly, rounds x_j to +-C with P(+C) = 1/2 +
/// x_j/(2C), applies 2RR to the sign and rescales to d C (e^eps0+1)/(e^eps0-1).
/// The output is unbiased with E||z||^2 = d^2 C^2 ((e^eps0+1)/(e^eps0-1))^2.
class VecMech {
 public:
  VecMech(double eps0, int dim, double radius);

  double eps0() const { return rr_.eps0(); }
  int dim() const { return dim_; }
  double radius() const { return radius_; }
  /// Magnitude of the nonzero output coordinate.
  double scale() const { return scale_; }
  /// G_inf^2(C) = C^2 d^2 ((e^eps0+1)/(e^eps0-1))^2
  double variance_bound() const { return scale_ * scale_; }

  /// Requires ||x||_inf <= C.
  VecMessage encode(const Eigen::VectorXd& x, Rng& rng) const;
  Eigen::VectorXd decode(const VecMessage& msg) const;
  Eigen::VectorXd randomize(const Eigen::VectorXd& x, Rng& rng) const { return decode(encode(x, rng)); }

  /// Law of the message: entry 2j is (j, -1), entry 2j+1 is (j, +1).
  Eigen::VectorXd output_probabilities(const Eigen::VectorXd& x) const;

 private:
  void check_input(const Eigen::VectorXd& x) const;

  Rr2Mech rr_;
  int dim_;
  double radius_;
  double scale_;
};

}  // namespace rdpacct

#endif  // RDPACCT_LDP_HPP_
