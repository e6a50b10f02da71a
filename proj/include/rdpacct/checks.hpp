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

// Invariant suites that pit the closed-form bounds against the brute-force
// oracles. Each suite reports the tightest margin it saw; a negative margin is
// a violation.

#ifndef RDPACCT_CHECKS_HPP_
#define RDPACCT_CHECKS_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace rdpacct {

struct CheckReport {
  std::string name;
  bool passed = true;
  std::int64_t cases = 0;
  /// Smallest (allowed - observed) over all cases.
  double worst_margin = 0.0;
  /// Human-readable location of the worst case.
  std::string worst_case;
};

struct SandwichGrid {
  std::vector<double> eps0 = {0.5, 1.0, 2.0, 3.0};
  std::vector<std::int64_t> k = {10, 100, 1000};
  std::int64_t n_over_k = 10;
  int lambda_max = 32;
};
/// rdp_lower <= rdp_upper on the grid; margin is upper - lower.
CheckReport check_sandwich(const SandwichGrid& grid = {});

struct Exact2rrGrid {
  std::vector<double> eps0 = {0.5, 1.0, 2.0};
  std::vector<std::int64_t> k = {1, 2, 3, 10, 50, 100, 200};
  std::vector<std::int64_t> n_over_k = {1, 10, 100};
  int lambda_max = 16;
  double rel_tol = 1e-9;
};
/// rdp_lower equals the exact 2RR divergence; margin is rel_tol - relative gap.
CheckReport check_exact2rr(const Exact2rrGrid& grid = {});

struct TernaryGrid {
  int instances = 200;
  int k_max = 10;
  int bins_max = 3;
  std::vector<int> alpha = {2, 3, 4};
  std::vector<double> eps0 = {0.5, 1.0, 2.0};
  std::uint64_t seed = 20260101;
};
/// Exact ternary divergences of random eps0-LDP randomizers against
/// zeta_shuffle (arbitrary adjacent triples) and zeta_special (special
/// datasets); margin is bound - exact.
CheckReport check_ternary(const TernaryGrid& grid = {});

struct ConvexityGrid {
  int instances = 200;
  int atoms_max = 20;
  std::vector<double> weights = {0.25, 0.5, 0.75};
  std::vector<double> alpha = {1.0, 2.0, 3.0, 4.0};
  double tol = 1e-10;
  std::uint64_t seed = 20260102;
};
/// Joint convexity of the ternary divergence in (P, Q, R).
CheckReport check_convexity(const ConvexityGrid& grid = {});

struct EmGrid {
  int instances = 60;
  int m_max = 8;
  int bins_max = 3;
  std::vector<int> alpha = {2, 3, 4};
  std::vector<double> eps0 = {0.5, 1.0, 2.0};
  double tol = 1e-12;
  std::uint64_t seed = 20260103;
};
/// E_{m+1} <= E_m for m = 1..m_max.
CheckReport check_e_m_monotone(const EmGrid& grid = {});

/// Grid monotonicity: Renyi order monotonicity of exact divergences,
/// zeta_shuffle nonincreasing in k, both RDP bounds nondecreasing in eps0,
/// total_privacy nondecreasing in T and nonincreasing in lambda_max.
CheckReport check_monotone();

/// Names accepted by run_check.
const std::vector<std::string>& check_names();

/// Runs a suite by name ("sandwich", "exact2rr", "ternary", "convexity",
/// "monotone"). Throws std::invalid_argument for unknown names. "convexity"
/// also runs the E_m suite and merges the reports.
CheckReport run_check(const std::string& name);

}  // namespace rdpacct

#endif  // RDPACCT_CHECKS_HPP_
