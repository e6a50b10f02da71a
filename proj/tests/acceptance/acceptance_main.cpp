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

// Release gate. One line per criterion:
//   AC<i> PASS|FAIL <seconds>s <detail>
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rdpacct/accountant.hpp"
#include "rdpacct/baselines.hpp"
#include "rdpacct/checks.hpp"
#include "rdpacct/cldp_sgd.hpp"
#include "rdpacct/cli.hpp"
#include "rdpacct/ldp.hpp"
#include "rdpacct/shuffle_rdp.hpp"

namespace fs = std::filesystem;
using namespace rdpacct;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "rdpacct");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome from_report(const CheckReport& r) {
  std::ostringstream s;
  s << "cases=" << r.cases << " worst_margin=" << r.worst_margin;
  if (!r.passed) s << " worst_case=[" << r.worst_case << "]";
  return {r.passed, s.str()};
}

Outcome ac1() { return from_report(check_sandwich()); }

Outcome ac2() { return from_report(check_exact2rr()); }

Outcome ac3() { return from_report(check_ternary()); }

Outcome ac4() {
  ConvexityGrid cg;
  cg.tol = 1e-10;
  EmGrid eg;
  eg.tol = 1e-12;
  const CheckReport conv = check_convexity(cg);
  const CheckReport em = check_e_m_monotone(eg);
  Outcome o{conv.passed && em.passed, ""};
  o.detail = "convexity: " + from_report(conv).detail + "; e_m: " + from_report(em).detail;
  return o;
}

Outcome ac5() {
  const SubsampledShuffleParams params(1000000, 1000, 2.0);
  const DpGuarantee ours = total_privacy(params, {100000, 1e-8});
  const DpGuarantee base = baseline_total(params, 100000, 1e-8);
  const double ratio = base.eps / ours.eps;
  return {ratio >= 10.0, fmt("ours=%.6f baseline=%.6f ratio=%.3f", ours.eps, base.eps, ratio)};
}

Outcome ac6() {
  const bool clones = clones_condition_ok(3.0, 1000, 1e-8);
  const bool blanket = blanket_condition_ok(3.0, 1000, 1e-8);
  std::string csv;
  const int code = cli({"compare", "--axis", "T", "--values", "100000", "--n", "1000000", "--k", "1000",
                        "--eps0", "3", "--delta", "1e-8"},
                       &csv);
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  const bool token = row.find(",degenerate,") != std::string::npos;
  return {!clones && !blanket && code == kExitOk && token,
          std::string("clones_ok=") + (clones ? "true" : "false") + " blanket_ok=" + (blanket ? "true" : "false") +
              " compare_row=" + row};
}

Outcome ac7() {
  const SubsampledShuffleParams params(1000, 100, 0.0);
  const AccountantConfig cfg{1000, 1e-6, 256, true};
  double max_abs = 0.0;
  max_abs = std::max(max_abs, std::abs(zeta_special(2, 10, 0.0)));
  max_abs = std::max(max_abs, std::abs(zeta_special(5, 10, 0.0)));
  for (int a : {2, 3, 8}) max_abs = std::max(max_abs, std::abs(zeta_shuffle(a, 100, 0.0).value));
  for (int l : {2, 3, 17, 256}) {
    max_abs = std::max(max_abs, std::abs(rdp_upper(l, params)));
    max_abs = std::max(max_abs, std::abs(rdp_lower(l, params)));
  }
  max_abs = std::max(max_abs, std::abs(baseline_total(params, 1000, 1e-6).eps));
  const DpGuarantee g = total_privacy(params, cfg);
  double penalty = kInf;
  for (int l = 2; l <= cfg.lambda_max; ++l) penalty = std::min(penalty, conversion_penalty(l, cfg.delta));
  const bool ok = max_abs == 0.0 && g.eps == penalty;
  return {ok, fmt("max_abs_component=%.3g total=%.12f penalty_only=%.12f", max_abs, g.eps, penalty)};
}

Outcome ac8() {
  const ConvexProblem prob = ConvexProblem::synthetic(Loss::kLeastSquares, 1000, 10, 1.0, 1);
  bool ok = true;
  std::ostringstream s;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SgdConfig cfg;
    cfg.rounds = 2000;
    cfg.cohort = 100;
    cfg.eps0 = 2.0;
    cfg.schedule = Schedule::kPaper;
    cfg.seed = seed;
    const SgdRunReport rep = run(prob, cfg);
    const double bound = 4.0 * convergence_bound(rep.step_d, rep.step_g, cfg.rounds);
    worst = std::max(worst, rep.final_suboptimality / bound);
    if (!(rep.final_suboptimality <= bound)) ok = false;
  }
  s << "worst_subopt_over_bound=" << worst;

  // Mechanism contracts: 4 standard errors on the mean, 1.1x on E||z - x||^2.
  const int draws = 100000;
  double worst_z = 0.0;
  double worst_var = 0.0;
  for (int d : {1, 8, 64}) {
    for (double eps0 : {1.0, 2.0}) {
      const VecMech mech(eps0, d, 1.0);
      Rng xr = make_stream(2026, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(eps0 * 10));
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      Eigen::VectorXd x(d);
      for (int j = 0; j < d; ++j) x(j) = u(xr);
      Rng rng = make_stream(2027, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(eps0 * 10));
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
      double sq = 0.0;
      for (int i = 0; i < draws; ++i) {
        const Eigen::VectorXd z = mech.randomize(x, rng);
        sum += z;
        sq += (z - x).squaredNorm();
      }
      const Eigen::VectorXd mean = sum / draws;
      for (int j = 0; j < d; ++j) {
        const double se = std::sqrt((mech.scale() * mech.scale() / d - x(j) * x(j)) / draws);
        worst_z = std::max(worst_z, std::abs(mean(j) - x(j)) / se);
      }
      worst_var = std::max(worst_var, (sq / draws) / mech.variance_bound());
    }
  }
  if (!(worst_z <= 4.0) || !(worst_var <= 1.1)) ok = false;
  s << " worst_mean_z=" << worst_z << " worst_var_over_bound=" << worst_var;
  return {ok, s.str()};
}

Outcome ac9() {
  const fs::path root = fs::temp_directory_path() / "rdpacct_acceptance_ac9";
  fs::remove_all(root);
  const std::vector<std::string> sim = {"simulate", "--n", "1000", "--d", "10", "--k", "100", "--rounds",
                                        "500", "--eps0", "2", "--seed", "7"};
  const std::vector<std::string> cmp = {"compare", "--axis", "n", "--range", "10000,1000000,5", "--k", "1000",
                                        "--eps0", "2", "--rounds", "100000", "--delta", "1e-8"};
  bool ok = true;
  for (const char* run_name : {"a", "b"}) {
    auto s = sim;
    s.insert(s.end(), {"--out", (root / "sim" / run_name).string()});
    auto c = cmp;
    c.insert(c.end(), {"--out", (root / "cmp" / run_name).string()});
    ok = ok && cli(s) == kExitOk && cli(c) == kExitOk;
  }
  int files = 0;
  for (const auto& [dir, name] : std::vector<std::pair<std::string, std::string>>{
           {"sim", "trajectory.csv"}, {"sim", "privacy.json"}, {"cmp", "compare.csv"}, {"cmp", "compare.json"}}) {
    const std::string a = slurp(root / dir / "a" / name);
    const std::string b = slurp(root / dir / "b" / name);
    ok = ok && !a.empty() && a == b;
    ++files;
  }
  fs::remove_all(root);
  return {ok, "files_compared=" + std::to_string(files)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    double budget_s;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"AC1 sandwich", 10.0, ac1},
      {"AC2 lower_bound_exactness", 5.0, ac2},
      {"AC3 ternary_domination", 60.0, ac3},
      {"AC4 e_m_monotone_and_convexity", 0.0, ac4},
      {"AC5 headline_savings", 60.0, ac5},
      {"AC6 degenerate_baseline", 0.0, ac6},
      {"AC7 trivial_zero", 0.0, ac7},
      {"AC8 cldp_sgd_convergence", 120.0, ac8},
      {"AC9 determinism", 0.0, ac9},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.ok = false;
      o.detail += fmt(" over_budget=%.0fs", c.budget_s);
    }
    if (!o.ok) ++failures;
    std::printf("%s %s %.2fs %s\n", c.id, o.ok ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
