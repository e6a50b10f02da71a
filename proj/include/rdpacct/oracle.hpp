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

// Brute-force ground truth at desk scale.
//
// A shuffled output is a histogram h in A_B^k = {h in N^B : sum h = k}. With
// independent clients i = 1..k drawing from p_i over [B],
//
//   F(P)(h) = sum over assignments of clients to bins with counts h of prod p_i(bin).
//
// exact_shuffle_dist evaluates this by convolving one client at a time.
// Divergences are templated on Eigen expressions so mixtures such as
// a * P0 + (1 - a) * P1 can be passed without materializing them.

#ifndef RDPACCT_ORACLE_HPP_
#define RDPACCT_ORACLE_HPP_

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "rdpacct/numeric.hpp"
#include "rdpacct/shuffle_rdp.hpp"

namespace rdpacct {

/// Probabilities over an indexed finite support.
using FiniteDist = Eigen::VectorXd;

inline constexpr int kMaxHistogramClients = 12;
inline constexpr int kMaxHistogramBins = 4;
inline constexpr std::int64_t kMaxExact2rrClients = 10000;

/// Throws std::domain_error unless entries are >= 0 and sum to 1 within 1e-12.
void validate_dist(const FiniteDist& p);

using Histogram = std::vector<int>;

/// A_B^k in lexicographic order.
std::vector<Histogram> enumerate_histograms(int k, int bins);

struct HistogramDist {
  int k = 0;
  int bins = 0;
  std::vector<Histogram> support;  // enumerate_histograms(k, bins)
  Eigen::VectorXd probs;
};

/// Shuffled-output law of independent clients over [bins]. Refuses k above
/// kMaxHistogramClients or bins above kMaxHistogramBins.
HistogramDist exact_shuffle_dist(const std::vector<FiniteDist>& client_dists, int bins);

/// mu0 = Bin(k, p), mu1 = law of the count when one client's bit is flipped,
/// p = 1/(e^eps0 + 1).
struct Rr2Dists {
  FiniteDist mu0;
  FiniteDist mu1;
};
Rr2Dists rr2_dists(std::int64_t k, double eps0);

/// Sum_h Q(h) (P(h)/Q(h))^lambda in log space, divided by lambda - 1.
/// Returns +inf when P is not absolutely continuous w.r.t. Q.
template <typename DerivedP, typename DerivedQ>
double exact_renyi(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q,
                   double lambda) {
  if (!(lambda > 1.0)) throw std::domain_error("exact_renyi: order must exceed 1");
  if (p.size() != q.size()) throw std::domain_error("exact_renyi: support mismatch");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p(i);
    const double qi = q(i);
    if (pi <= 0.0) continue;
    if (qi <= 0.0) return kInf;
    terms.push_back(lambda * std::log(pi) + (1.0 - lambda) * std::log(qi));
  }
  return std::max(0.0, log_sum_exp(terms) / (lambda - 1.0));
}

/// Sum_h R(h) |(P(h) - Q(h)) / R(h)|^alpha. Returns +inf when R vanishes
/// where P and Q differ.
template <typename DerivedP, typename DerivedQ, typename DerivedR>
double exact_ternary(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q,
                     const Eigen::MatrixBase<DerivedR>& r, double alpha) {
  if (!(alpha >= 1.0)) throw std::domain_error("exact_ternary: alpha must be >= 1");
  if (p.size() != q.size() || p.size() != r.size()) {
    throw std::domain_error("exact_ternary: support mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double diff = std::abs(p(i) - q(i));
    if (diff == 0.0) continue;
    if (r(i) <= 0.0) return kInf;
    total += r(i) * std::pow(diff / r(i), alpha);
  }
  return total;
}

double exact_renyi(const HistogramDist& p, const HistogramDist& q, double lambda);
double exact_ternary(const HistogramDist& p, const HistogramDist& q, const HistogramDist& r,
                     double alpha);

/// Exact D_lambda(gamma mu1 + (1-gamma) mu0 || mu0) by direct summation over
/// the count m. Refuses k above kMaxExact2rrClients.
template <typename Scalar = long double>
Scalar exact_rdp_2rr_subshuffle(int lambda, const SubsampledShuffleParams& params) {
  using std::exp;
  using std::expm1;
  using std::log;
  using std::log1p;
  if (lambda < 2) throw std::domain_error("exact_rdp_2rr_subshuffle: order must be >= 2");
  const std::int64_t k = params.k();
  if (k > kMaxExact2rrClients) {
    throw std::domain_error("exact_rdp_2rr_subshuffle: k exceeds the enumeration cap");
  }
  if (params.eps0() == 0.0) return Scalar(0);

  const Scalar eps0 = params.eps0();
  const Scalar gamma = Scalar(params.k()) / Scalar(params.n());
  const Scalar p = Scalar(1) / (exp(eps0) + Scalar(1));
  const Scalar log_p = log(p);
  const Scalar log_q = log1p(-p);
  const Scalar neg_inf = -std::numeric_limits<Scalar>::infinity();

  // ln C(n, m) for m = 0..n by the multiplicative recurrence.
  auto log_binomials = [](std::int64_t n) {
    std::vector<Scalar> out(static_cast<std::size_t>(n) + 1);
    out[0] = Scalar(0);
    for (std::int64_t m = 1; m <= n; ++m) {
      out[static_cast<std::size_t>(m)] =
          out[static_cast<std::size_t>(m - 1)] + log(Scalar(n - m + 1)) - log(Scalar(m));
    }
    return out;
  };
  const std::vector<Scalar> lc_k = log_binomials(k);
  const std::vector<Scalar> lc_k1 = log_binomials(k - 1);
  // ln b_{k-1}(j), -inf outside 0..k-1
  auto log_b1 = [&](std::int64_t j) {
    if (j < 0 || j > k - 1) return neg_inf;
    return lc_k1[static_cast<std::size_t>(j)] + Scalar(j) * log_p + Scalar(k - 1 - j) * log_q;
  };
  auto log_add = [&](Scalar a, Scalar b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    return a > b ? a + log1p(exp(b - a)) : b + log1p(exp(a - b));
  };

  Scalar pos = 0;
  Scalar neg = 0;
  for (std::int64_t m = 0; m <= k; ++m) {
    const Scalar log_mu0 = lc_k[static_cast<std::size_t>(m)] + Scalar(m) * log_p + Scalar(k - m) * log_q;
    // mu1(m) = (1-p) b_{k-1}(m-1) + p b_{k-1}(m)
    const Scalar log_mu1 = log_add(log_q + log_b1(m - 1), log_p + log_b1(m));
    const Scalar x = gamma * expm1(log_mu1 - log_mu0);  // P/mu0 - 1
    const Scalar inner = expm1(Scalar(lambda) * log1p(x));
    const Scalar term = exp(log_mu0) * inner;
    if (term >= 0) {
      pos += term;
    } else {
      neg -= term;
    }
  }
  const Scalar s = pos - neg;
  if (s <= 0) return Scalar(0);
  return log1p(s) / Scalar(lambda - 1);
}

/// `count` distributions over [bins] whose pairwise likelihood ratios stay in
/// [e^-eps0, e^eps0]: a base drawn uniformly from the simplex mixed with
/// per-member uniform draws, using the largest common mixing weight that
/// satisfies the constraint.
std::vector<FiniteDist> random_ldp_family(int bins, int count, double eps0, std::mt19937_64& rng);

/// True iff every pair of members satisfies p_i(b) <= e^eps0 p_j(b) (1 + tol).
bool is_ldp_family(const std::vector<FiniteDist>& family, double eps0, double tol = 1e-12);

/// The datasets with m clients all holding d, versus the last client holding
/// d' or d''. Returns {P, Q, R} = {F(d,..,d,d'), F(d,..,d,d''), F(d,..,d)}.
struct TernaryTriple {
  HistogramDist p;
  HistogramDist q;
  HistogramDist r;
};
TernaryTriple special_triple(const FiniteDist& same, const FiniteDist& last_p,
                             const FiniteDist& last_q, int m);

/// Arbitrary adjacent datasets: clients 1..k-1 hold `shared`, the last client
/// holds d, d' or d''. Returns {F(D), F(D'), F(D'')}.
TernaryTriple adjacent_triple(const std::vector<FiniteDist>& shared, const FiniteDist& last,
                              const FiniteDist& last_prime, const FiniteDist& last_double_prime);

/// E_m for l = m+1 clients: l-1 clients hold d'' and the last holds d, d' or
/// d''; the ternary divergence is taken with reference F(d'',..,d'').
double ternary_e_m(const FiniteDist& d, const FiniteDist& d_prime, const FiniteDist& d_double_prime,
                   int m, double alpha);

}  // namespace rdpacct

#endif  // RDPACCT_ORACLE_HPP_
