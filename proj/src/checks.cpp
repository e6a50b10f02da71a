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

#include "rdpacct/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "rdpacct/accountant.hpp"
#include "rdpacct/oracle.hpp"
#include "rdpacct/shuffle_rdp.hpp"

namespace rdpacct {
namespace {

std::string format(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

class Tracker {
 public:
  explicit Tracker(std::string name) { report_.name = std::move(name); }

  void record(double margin, const std::string& where) {
    if (report_.cases == 0 || margin < report_.worst_margin || std::isnan(margin)) {
      report_.worst_margin = margin;
      report_.worst_case = where;
    }
    if (!(margin >= 0.0)) report_.passed = false;
    ++report_.cases;
  }

  CheckReport done() { return report_; }

 private:
  CheckReport report_;
};

// Allowed excess for a computed quantity of the given size.
double scaled_tol(double tol, double magnitude) { return tol * std::max(1.0, std::abs(magnitude)); }

FiniteDist rr2_row(double eps0, int bit) {
  const double keep = 1.0 / (1.0 + std::exp(-eps0));
  FiniteDist out(2);
  out << (bit == 0 ? keep : 1.0 - keep), (bit == 0 ? 1.0 - keep : keep);
  return out;
}

FiniteDist simplex_point(int atoms, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  FiniteDist p(atoms);
  for (int i = 0; i < atoms; ++i) p(i) = expo(rng);
  return p / p.sum();
}

}  // namespace

CheckReport check_sandwich(const SandwichGrid& grid) {
  Tracker t("sandwich");
  for (double eps0 : grid.eps0) {
    for (std::int64_t k : grid.k) {
      const SubsampledShuffleParams params(grid.n_over_k * k, k, eps0);
      auto upper = make_upper_evaluator(params);
      auto lower = make_lower_evaluator(params);
      for (int lambda = 2; lambda <= grid.lambda_max; ++lambda) {
        const double u = (*upper)(lambda);
        const double l = (*lower)(lambda);
        t.record(u - l, format("eps0=%g k=%lld lambda=%d upper=%.6e lower=%.6e", eps0,
                               static_cast<long long>(k), lambda, u, l));
      }
    }
  }
  return t.done();
}

CheckReport check_exact2rr(const Exact2rrGrid& grid) {
  Tracker t("exact2rr");
  for (double eps0 : grid.eps0) {
    for (std::int64_t k : grid.k) {
      for (std::int64_t ratio : grid.n_over_k) {
        const SubsampledShuffleParams params(ratio * k, k, eps0);
        auto lower = make_lower_evaluator(params);
        for (int lambda = 2; lambda <= grid.lambda_max; ++lambda) {
          const double bound = (*lower)(lambda);
          const double exact = static_cast<double>(exact_rdp_2rr_subshuffle<long double>(lambda, params));
          const double gap = std::abs(bound - exact) / std::max(std::abs(exact), 1e-300);
          const double margin = exact == 0.0 && bound == 0.0 ? grid.rel_tol : grid.rel_tol - gap;
          t.record(margin, format("eps0=%g k=%lld n=%lld lambda=%d lower=%.15e exact=%.15e", eps0,
                                  static_cast<long long>(k), static_cast<long long>(params.n()),
                                  lambda, bound, exact));
        }
      }
    }
  }
  return t.done();
}

CheckReport check_ternary(const TernaryGrid& grid) {
  Tracker t("ternary");
  std::mt19937_64 rng(grid.seed);
  const int eps_count = static_cast<int>(grid.eps0.size());
  for (int i = 0; i < grid.instances; ++i) {
    const double eps0 = grid.eps0[static_cast<std::size_t>(i % eps_count)];
    const int k = 2 + i % (grid.k_max - 1);
    const int m = 1 + i % grid.k_max;
    const bool binary = i % 10 == 0;
    const int bins = binary ? 2 : 2 + (i / 2) % (grid.bins_max - 1);

    // Arbitrary adjacent datasets with k clients.
    std::vector<FiniteDist> shared;
    FiniteDist d, d_prime, d_double_prime;
    if (binary) {
      std::bernoulli_distribution coin(0.5);
      for (int c = 0; c < k - 1; ++c) shared.push_back(rr2_row(eps0, coin(rng) ? 1 : 0));
      d = rr2_row(eps0, 0);
      d_prime = rr2_row(eps0, 1);
      d_double_prime = rr2_row(eps0, coin(rng) ? 1 : 0);
    } else {
      std::vector<FiniteDist> family = random_ldp_family(bins, k + 2, eps0, rng);
      shared.assign(family.begin(), family.begin() + (k - 1));
      d = family[static_cast<std::size_t>(k - 1)];
      d_prime = family[static_cast<std::size_t>(k)];
      d_double_prime = family[static_cast<std::size_t>(k + 1)];
    }
    const TernaryTriple adj = adjacent_triple(shared, d, d_prime, d_double_prime);

    // Special datasets with m clients.
    std::vector<FiniteDist> trio = binary
        ? std::vector<FiniteDist>{rr2_row(eps0, 0), rr2_row(eps0, 0), rr2_row(eps0, 1)}
        : random_ldp_family(bins, 3, eps0, rng);
    const TernaryTriple special = special_triple(trio[0], trio[1], trio[2], m);

    for (int alpha : grid.alpha) {
      const double exact_adj = exact_ternary(adj.p, adj.q, adj.r, alpha);
      const double bound_adj = zeta_shuffle(alpha, k, eps0).value;
      t.record(bound_adj - exact_adj,
               format("shuffle i=%d eps0=%g k=%d B=%d alpha=%d exact=%.6e bound=%.6e", i, eps0, k,
                      bins, alpha, exact_adj, bound_adj));
      const double exact_sp = exact_ternary(special.p, special.q, special.r, alpha);
      const double bound_sp = zeta_special(alpha, m, eps0);
      t.record(bound_sp - exact_sp,
               format("special i=%d eps0=%g m=%d B=%d alpha=%d exact=%.6e bound=%.6e", i, eps0, m,
                      bins, alpha, exact_sp, bound_sp));
    }
  }
  return t.done();
}

CheckReport check_convexity(const ConvexityGrid& grid) {
  Tracker t("convexity");
  std::mt19937_64 rng(grid.seed);
  std::uniform_int_distribution<int> atoms_dist(2, grid.atoms_max);
  for (int i = 0; i < grid.instances; ++i) {
    const int atoms = atoms_dist(rng);
    const FiniteDist p0 = simplex_point(atoms, rng), q0 = simplex_point(atoms, rng),
                     r0 = simplex_point(atoms, rng);
    const FiniteDist p1 = simplex_point(atoms, rng), q1 = simplex_point(atoms, rng),
                     r1 = simplex_point(atoms, rng);
    for (double alpha : grid.alpha) {
      const double t0 = exact_ternary(p0, q0, r0, alpha);
      const double t1 = exact_ternary(p1, q1, r1, alpha);
      for (double a : grid.weights) {
        const double mixed =
            exact_ternary(a * p0 + (1 - a) * p1, a * q0 + (1 - a) * q1, a * r0 + (1 - a) * r1, alpha);
        const double chord = a * t0 + (1 - a) * t1;
        t.record(chord - mixed + scaled_tol(grid.tol, chord),
                 format("i=%d atoms=%d alpha=%g a=%g mixture=%.6e chord=%.6e", i, atoms, alpha, a,
                        mixed, chord));
      }
    }
  }
  return t.done();
}

CheckReport check_e_m_monotone(const EmGrid& grid) {
  Tracker t("e_m_monotone");
  std::mt19937_64 rng(grid.seed);
  const int eps_count = static_cast<int>(grid.eps0.size());
  for (int i = 0; i < grid.instances; ++i) {
    const double eps0 = grid.eps0[static_cast<std::size_t>(i % eps_count)];
    const int bins = 2 + i % (grid.bins_max - 1);
    const std::vector<FiniteDist> trio = random_ldp_family(bins, 3, eps0, rng);
    for (int alpha : grid.alpha) {
      double prev = ternary_e_m(trio[0], trio[1], trio[2], 1, alpha);
      for (int m = 1; m <= grid.m_max; ++m) {
        const double next = ternary_e_m(trio[0], trio[1], trio[2], m + 1, alpha);
        t.record(prev - next + scaled_tol(grid.tol, prev),
                 format("i=%d eps0=%g B=%d alpha=%d m=%d E_m=%.15e E_m+1=%.15e", i, eps0, bins,
                        alpha, m, prev, next));
        prev = next;
      }
    }
  }
  return t.done();
}

CheckReport check_monotone() {
  Tracker t("monotone");
  constexpr double kTol = 1e-12;

  // Renyi divergence is nondecreasing in its order.
  std::mt19937_64 rng(20260104);
  for (int i = 0; i < 20; ++i) {
    const double eps0 = 0.5 + 0.25 * (i % 8);
    const std::vector<FiniteDist> family = random_ldp_family(3, 5, eps0, rng);
    const TernaryTriple adj = adjacent_triple({family[0], family[1], family[2]}, family[3], family[4],
                                              family[4]);
    double prev = exact_renyi(adj.p, adj.q, 1.5);
    for (double lambda = 2.0; lambda <= 16.0; lambda += 1.0) {
      const double next = exact_renyi(adj.p, adj.q, lambda);
      t.record(next - prev + scaled_tol(kTol, prev),
               format("renyi i=%d lambda=%g prev=%.15e next=%.15e", i, lambda, prev, next));
      prev = next;
    }
  }

  // zeta_shuffle is nonincreasing in k.
  for (int alpha : {2, 3, 4, 8}) {
    for (double eps0 : {0.5, 1.0, 2.0, 3.0}) {
      double prev = zeta_shuffle(alpha, 2, eps0).value;
      for (std::int64_t k = 3; k <= 10000; ++k) {
        const double next = zeta_shuffle(alpha, k, eps0).value;
        t.record(prev - next + scaled_tol(kTol, prev),
                 format("zeta alpha=%d eps0=%g k=%lld", alpha, eps0, static_cast<long long>(k)));
        prev = next;
      }
    }
  }

  // Both RDP bounds are nondecreasing in eps0.
  for (std::int64_t k : {10, 100}) {
    for (int lambda : {2, 4, 8, 16, 32}) {
      double prev_u = 0.0;
      double prev_l = 0.0;
      for (int s = 1; s <= 16; ++s) {
        const SubsampledShuffleParams params(10 * k, k, 0.25 * s);
        const double u = rdp_upper(lambda, params);
        const double l = rdp_lower(lambda, params);
        t.record(u - prev_u + scaled_tol(kTol, prev_u),
                 format("upper-in-eps0 k=%lld lambda=%d eps0=%g", static_cast<long long>(k), lambda,
                        params.eps0()));
        t.record(l - prev_l + scaled_tol(kTol, prev_l),
                 format("lower-in-eps0 k=%lld lambda=%d eps0=%g", static_cast<long long>(k), lambda,
                        params.eps0()));
        prev_u = u;
        prev_l = l;
      }
    }
  }

  // total_privacy is nondecreasing in T and nonincreasing in lambda_max.
  for (double eps0 : {0.5, 2.0}) {
    const SubsampledShuffleParams params(100000, 100, eps0);
    double prev = 0.0;
    for (std::int64_t rounds : {1, 10, 100, 1000, 10000}) {
      const double eps = total_privacy(params, {rounds, 1e-6, kDefaultLambdaMax, false}).eps;
      t.record(eps - prev + scaled_tol(kTol, prev),
               format("total-in-T eps0=%g T=%lld", eps0, static_cast<long long>(rounds)));
      prev = eps;
    }
    double prev_max = kInf;
    for (int lambda_max : {4, 16, 64, 256, 2048}) {
      const double eps = total_privacy(params, {1000, 1e-6, lambda_max, false}).eps;
      t.record(prev_max - eps + scaled_tol(kTol, eps),
               format("total-in-lambda_max eps0=%g lambda_max=%d", eps0, lambda_max));
      prev_max = eps;
    }
  }
  return t.done();
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"sandwich", "exact2rr", "ternary", "convexity",
                                                 "monotone"};
  return names;
}

CheckReport run_check(const std::string& name) {
  if (name == "sandwich") return check_sandwich();
  if (name == "exact2rr") return check_exact2rr();
  if (name == "ternary") return check_ternary();
  if (name == "monotone") return check_monotone();
  if (name == "convexity") {
    CheckReport conv = check_convexity();
    const CheckReport em = check_e_m_monotone();
    conv.passed = conv.passed && em.passed;
    conv.cases += em.cases;
    if (em.worst_margin < conv.worst_margin) {
      conv.worst_margin = em.worst_margin;
      conv.worst_case = "e_m " + em.worst_case;
    }
    return conv;
  }
  throw std::invalid_argument("unknown check '" + name + "'");
}

}  // namespace rdpacct
