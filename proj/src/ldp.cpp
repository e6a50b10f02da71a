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

#include "rdpacct/ldp.hpp"

#include <cmath>

namespace rdpacct {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t round, std::uint64_t client) {
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ round) ^ client);
  std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

Rr2Mech::Rr2Mech(double eps0) : eps0_(eps0) {
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) throw std::domain_error("Rr2Mech: eps0 must be finite and >= 0");
  flip_ = 1.0 / (std::exp(eps0) + 1.0);
}

int Rr2Mech::randomize(int bit, Rng& rng) const {
  if (bit != 0 && bit != 1) throw std::domain_error("Rr2Mech: input must be 0 or 1");
  std::bernoulli_distribution flip(flip_);
  return flip(rng) ? 1 - bit : bit;
}

Eigen::Matrix2d Rr2Mech::kernel() const {
  Eigen::Matrix2d k;
  k << keep_prob(), flip_, flip_, keep_prob();
  return k;
}

VecMech::VecMech(double eps0, int dim, double radius) : rr_(eps0), dim_(dim), radius_(radius) {
  if (!(eps0 > 0.0)) throw std::domain_error("VecMech: eps0 must be > 0");
  if (dim < 1) throw std::domain_error("VecMech: dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::domain_error("VecMech: radius must be positive");
  // (e^eps0+1)/(e^eps0-1) = 1/tanh(eps0/2)
  scale_ = dim * radius / std::tanh(0.5 * eps0);
}

void VecMech::check_input(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::domain_error("VecMech: input dimension mismatch");
  if (x.lpNorm<Eigen::Infinity>() > radius_) {
    throw std::domain_error("VecMech: input outside the l_inf ball, clip first");
  }
}

VecMessage VecMech::encode(const Eigen::VectorXd& x, Rng& rng) const {
  check_input(x);
  std::uniform_int_distribution<int> pick(0, dim_ - 1);
  const int j = pick(rng);
  std::bernoulli_distribution up(0.5 + x(j) / (2.0 * radius_));
  const int bit = up(rng) ? 1 : 0;
  return {j, rr_.randomize(bit, rng) == 1 ? 1 : -1};
}

Eigen::VectorXd VecMech::decode(const VecMessage& msg) const {
  if (msg.coord < 0 || msg.coord >= dim_ || (msg.sign != 1 && msg.sign != -1)) {
    throw std::domain_error("VecMech: malformed message");
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim_);
  z(msg.coord) = msg.sign * scale_;
  return z;
}

Eigen::VectorXd VecMech::output_probabilities(const Eigen::VectorXd& x) const {
  check_input(x);
  const double keep = rr_.keep_prob();
  const double flip = rr_.flip_prob();
  Eigen::VectorXd out(2 * dim_);
  for (int j = 0; j < dim_; ++j) {
    const double up = 0.5 + x(j) / (2.0 * radius_);
    out(2 * j + 1) = (up * keep + (1.0 - up) * flip) / dim_;
    out(2 * j) = (up * flip + (1.0 - up) * keep) / dim_;
  }
  return out;
}

}  // namespace rdpacct
