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

#include "rdpacct/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace rdpacct {
namespace {

void enumerate_into(int remaining, int bin, Histogram& h, std::vector<Histogram>& out) {
  const int bins = static_cast<int>(h.size());
  if (bin == bins - 1) {
    h[static_cast<std::size_t>(bin)] = remaining;
    out.push_back(h);
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    h[static_cast<std::size_t>(bin)] = c;
    enumerate_into(remaining - c, bin + 1, h, out);
  }
}

void check_same_shape(const HistogramDist& a, const HistogramDist& b, const char* who) {
  if (a.k != b.k || a.bins != b.bins) {
    throw std::domain_error(std::string(who) + ": histogram distributions over different A_B^k");
  }
}

// Smallest common weight t in [0, 1] at which mixing each member toward the
// base breaks the ratio constraint; every pairwise log-ratio is monotone in t,
// so bisection on the predicate is sound.
double max_mixing_weight(const FiniteDist& base, const std::vector<FiniteDist>& dirs, double eps0) {
  auto ok = [&](double t) {
    std::vector<FiniteDist> family;
    family.reserve(dirs.size());
    for (const FiniteDist& u : dirs) family.push_back((1.0 - t) * base + t * u);
    return is_ldp_family(family, eps0, 0.0);
  };
  if (ok(1.0)) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

FiniteDist uniform_simplex(int bins, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  FiniteDist p(bins);
  for (int b = 0; b < bins; ++b) p(b) = expo(rng);
  return p / p.sum();
}

}  // namespace

void validate_dist(const FiniteDist& p) {
  if (p.size() == 0) throw std::domain_error("FiniteDist: empty support");
  if ((p.array() < 0.0).any() || !p.allFinite()) {
    throw std::domain_error("FiniteDist: probabilities must be finite and >= 0");
  }
  if (std::abs(p.sum() - 1.0) > 1e-12) throw std::domain_error("FiniteDist: probabilities must sum to 1");
}

std::vector<Histogram> enumerate_histograms(int k, int bins) {
  if (k < 0 || bins < 1) throw std::domain_error("enumerate_histograms: requires k >= 0, B >= 1");
  std::vector<Histogram> out;
  Histogram h(static_cast<std::size_t>(bins), 0);
  enumerate_into(k, 0, h, out);
  return out;
}

HistogramDist exact_shuffle_dist(const std::vector<FiniteDist>& client_dists, int bins) {
  const int k = static_cast<int>(client_dists.size());
  if (k < 1) throw std::domain_error("exact_shuffle_dist: needs at least one client");
  if (k > kMaxHistogramClients || bins > kMaxHistogramBins || bins < 1) {
    throw std::domain_error("exact_shuffle_dist: instance exceeds enumeration caps (k <= " +
                            std::to_string(kMaxHistogramClients) +
                            ", B <= " + std::to_string(kMaxHistogramBins) + ")");
  }
  for (const FiniteDist& p : client_dists) {
    if (p.size() != bins) throw std::domain_error("exact_shuffle_dist: client support is not [B]");
    validate_dist(p);
  }

  std::map<Histogram, double> level{{Histogram(static_cast<std::size_t>(bins), 0), 1.0}};
  for (const FiniteDist& p : client_dists) {
    std::map<Histogram, double> next;
    for (const auto& [h, mass] : level) {
      for (int b = 0; b < bins; ++b) {
        if (p(b) == 0.0) continue;
        Histogram g = h;
        ++g[static_cast<std::size_t>(b)];
        next[g] += mass * p(b);
      }
    }
    level = std::move(next);
  }

  HistogramDist out;
  out.k = k;
  out.bins = bins;
  out.support = enumerate_histograms(k, bins);
  out.probs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out.support.size()));
  for (std::size_t i = 0; i < out.support.size(); ++i) {
    if (auto it = level.find(out.support[i]); it != level.end()) {
      out.probs(static_cast<Eigen::Index>(i)) = it->second;
    }
  }
  return out;
}

Rr2Dists rr2_dists(std::int64_t k, double eps0) {
  if (k < 1) throw std::domain_error("rr2_dists: requires k >= 1");
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) throw std::domain_error("rr2_dists: eps0 must be >= 0");
  const double p = 1.0 / (std::exp(eps0) + 1.0);
  const auto b_k = binomial_log_pmf(k, p);
  const auto b_k1 = binomial_log_pmf(k - 1, p);
  auto log_b1 = [&](std::int64_t j) {
    if (j < 0 || j > k - 1) return kNegInf;
    return (*b_k1)[static_cast<std::size_t>(j)];
  };
  Rr2Dists out{FiniteDist(k + 1), FiniteDist(k + 1)};
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  for (std::int64_t m = 0; m <= k; ++m) {
    out.mu0(m) = std::exp((*b_k)[static_cast<std::size_t>(m)]);
    out.mu1(m) = std::exp(log_add_exp(log_q + log_b1(m - 1), log_p + log_b1(m)));
  }
  return out;
}

double exact_renyi(const HistogramDist& p, const HistogramDist& q, double lambda) {
  check_same_shape(p, q, "exact_renyi");
  return exact_renyi(p.probs, q.probs, lambda);
}

double exact_ternary(const HistogramDist& p, const HistogramDist& q, const HistogramDist& r,
                     double alpha) {
  check_same_shape(p, q, "exact_ternary");
  check_same_shape(p, r, "exact_ternary");
  return exact_ternary(p.probs, q.probs, r.probs, alpha);
}

std::vector<FiniteDist> random_ldp_family(int bins, int count, double eps0, std::mt19937_64& rng) {
  if (bins < 1 || count < 1) throw std::domain_error("random_ldp_family: requires B >= 1, count >= 1");
  if (!(eps0 >= 0.0)) throw std::domain_error("random_ldp_family: eps0 must be >= 0");
  const FiniteDist base = uniform_simplex(bins, rng);
  std::vector<FiniteDist> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) dirs.push_back(uniform_simplex(bins, rng));
  const double t = max_mixing_weight(base, dirs, eps0);
  std::vector<FiniteDist> family;
  family.reserve(dirs.size());
  for (const FiniteDist& u : dirs) family.push_back((1.0 - t) * base + t * u);
  return family;
}

bool is_ldp_family(const std::vector<FiniteDist>& family, double eps0, double tol) {
  if (family.empty()) return true;
  const Eigen::Index bins = family.front().size();
  const double bound = std::exp(eps0) * (1.0 + tol);
  for (Eigen::Index b = 0; b < bins; ++b) {
    double lo = kInf;
    double hi = 0.0;
    for (const FiniteDist& p : family) {
      lo = std::min(lo, p(b));
      hi = std::max(hi, p(b));
    }
    if (hi == 0.0) continue;
    if (lo == 0.0 || hi > bound * lo) return false;
  }
  return true;
}

TernaryTriple special_triple(const FiniteDist& same, const FiniteDist& last_p,
                             const FiniteDist& last_q, int m) {
  if (m < 1) throw std::domain_error("special_triple: requires m >= 1");
  const int bins = static_cast<int>(same.size());
  std::vector<FiniteDist> clients(static_cast<std::size_t>(m), same);
  TernaryTriple out;
  out.r = exact_shuffle_dist(clients, bins);
  clients.back() = last_p;
  out.p = exact_shuffle_dist(clients, bins);
  clients.back() = last_q;
  out.q = exact_shuffle_dist(clients, bins);
  return out;
}

TernaryTriple adjacent_triple(const std::vector<FiniteDist>& shared, const FiniteDist& last,
                              const FiniteDist& last_prime, const FiniteDist& last_double_prime) {
  const int bins = static_cast<int>(last.size());
  std::vector<FiniteDist> clients = shared;
  clients.push_back(last);
  TernaryTriple out;
  out.p = exact_shuffle_dist(clients, bins);
  clients.back() = last_prime;
  out.q = exact_shuffle_dist(clients, bins);
  clients.back() = last_double_prime;
  out.r = exact_shuffle_dist(clients, bins);
  return out;
}

double ternary_e_m(const FiniteDist& d, const FiniteDist& d_prime, const FiniteDist& d_double_prime,
                   int m, double alpha) {
  if (m < 0) throw std::domain_error("ternary_e_m: requires m >= 0");
  const std::vector<FiniteDist> shared(static_cast<std::size_t>(m), d_double_prime);
  const TernaryTriple t = adjacent_triple(shared, d, d_prime, d_double_prime);
  return exact_ternary(t.p, t.q, t.r, alpha);
}

}  // namespace rdpacct
