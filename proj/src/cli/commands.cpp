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

#include "rdpacct/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rdpacct/accountant.hpp"
#include "rdpacct/baselines.hpp"
#include "rdpacct/checks.hpp"
#include "rdpacct/cldp_sgd.hpp"
#include "rdpacct/shuffle_rdp.hpp"

namespace rdpacct {
namespace {

using json = nlohmann::ordered_json;

// Raised for problems that map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MechanismFlags {
  std::int64_t n = 0;
  std::int64_t k = 0;
  double gamma = 0.0;
  double eps0 = -1.0;
  CLI::Option* n_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* eps0_opt = nullptr;
};

void add_mechanism_flags(CLI::App* cmd, MechanismFlags& f) {
  f.n_opt = cmd->add_option("--n", f.n, "Total number of clients n");
  f.k_opt = cmd->add_option("--k", f.k, "Clients sampled per round k");
  f.gamma_opt = cmd->add_option("--gamma", f.gamma, "Sampling rate; sets k = round(gamma n) when --k is absent");
  f.eps0_opt = cmd->add_option("--eps0", f.eps0, "LDP parameter eps0");
}

std::int64_t cohort_for(const MechanismFlags& f, std::int64_t n) {
  if (f.k_opt->count() > 0) return f.k;
  if (f.gamma_opt->count() > 0) {
    if (!(f.gamma > 0.0 && f.gamma <= 1.0)) throw UsageError("--gamma must lie in (0, 1]");
    return std::llround(f.gamma * static_cast<double>(n));
  }
  throw UsageError("one of --k or --gamma is required");
}

SubsampledShuffleParams mechanism_params(const MechanismFlags& f, std::int64_t n, double eps0) {
  const std::int64_t k = cohort_for(f, n);
  try {
    return SubsampledShuffleParams(n, k, eps0);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
}

SubsampledShuffleParams mechanism_params(const MechanismFlags& f) {
  if (f.n_opt->count() == 0) throw UsageError("--n is required");
  if (f.eps0_opt->count() == 0) throw UsageError("--eps0 is required");
  return mechanism_params(f, f.n, f.eps0);
}

void require_upper_domain(const SubsampledShuffleParams& p) {
  if (p.k() < 2) throw UsageError("the upper bound requires k >= 2 sampled clients");
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("--delta must lie in (0, 1)");
}

void require_rounds(std::int64_t rounds) {
  if (rounds < 1) throw UsageError("--rounds must be >= 1");
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

// Emits `body` to <out_dir>/<name> when an output directory is set, else to out.
void emit(const std::string& out_dir, const std::string& name, const std::string& body, std::ostream& out) {
  if (out_dir.empty()) {
    out << body;
    return;
  }
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path path = std::filesystem::path(out_dir) / name;
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open " + path.string() + " for writing");
  file << body;
  if (!file) throw UsageError("failed writing " + path.string());
}

int thread_budget(std::size_t tasks) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RDP_ACCT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = static_cast<unsigned>(v);
  }
  return static_cast<int>(std::min<std::size_t>(cap, std::max<std::size_t>(tasks, 1)));
}

// Runs task(i) for i in [0, count); results are stored by index, so output
// order never depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task) {
  const int threads = thread_budget(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// ---- bound / compose ------------------------------------------------------

struct BoundFlags {
  MechanismFlags mech;
  int lambda_min = 2;
  int lambda_max = 32;
  std::int64_t rounds = 1;
  std::string out_dir;
};

void check_lambda_range(int lo, int hi) {
  if (lo < 2) throw UsageError("--lambda-min must be >= 2");
  if (hi < lo) throw UsageError("empty order range: --lambda-max < --lambda-min");
}

std::string bound_table(const BoundFlags& f, std::int64_t rounds, const char* suffix) {
  const SubsampledShuffleParams params = mechanism_params(f.mech);
  require_upper_domain(params);
  check_lambda_range(f.lambda_min, f.lambda_max);
  require_rounds(rounds);
  const RdpCurve upper = compose(upper_curve(params, f.lambda_min, f.lambda_max), rounds);
  const RdpCurve lower = compose(lower_curve(params, f.lambda_min, f.lambda_max), rounds);
  std::string body = csv_row({"lambda", std::string("eps_upper") + suffix, std::string("eps_lower") + suffix});
  for (std::size_t i = 0; i < upper.entries.size(); ++i) {
    body += csv_row({std::to_string(upper.entries[i].lambda), format_number(upper.entries[i].eps),
                     format_number(lower.entries[i].eps)});
  }
  return body;
}

// ---- convert -------------------------------------------------------------

struct ConvertFlags {
  MechanismFlags mech;
  std::int64_t rounds = 1;
  double delta = 1e-5;
  int lambda_max = kDefaultLambdaMax;
  bool exact_search = false;
  std::string curve_file;
  std::string out_dir;
};

RdpCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read curve file " + path);
  std::string line;
  if (!std::getline(in, line)) throw UsageError("curve file is empty: " + path);
  if (line != "lambda,eps") throw UsageError("curve file header must be 'lambda,eps'");
  RdpCurve curve{SubsampledShuffleParams(1, 1, 0.0), {}, BoundKind::kUpperBound};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw UsageError("malformed curve row: " + line);
    try {
      std::size_t used = 0;
      const int lambda = std::stoi(line.substr(0, comma), &used);
      const double eps = std::stod(line.substr(comma + 1));
      curve.entries.push_back({lambda, eps});
    } catch (const std::exception&) {
      throw UsageError("malformed curve row: " + line);
    }
  }
  if (curve.entries.empty()) throw UsageError("curve file has no rows");
  try {
    validate_curve(curve);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  return curve;
}

std::string guarantee_row(const std::string& label, const DpGuarantee& g) {
  return csv_row({label, format_number(g.eps), format_number(g.delta),
                  g.argmin_lambda ? std::to_string(*g.argmin_lambda) : std::string(""),
                  format_number(g.eps_unclamped)});
}

std::string convert_table(const ConvertFlags& f) {
  require_delta(f.delta);
  require_rounds(f.rounds);
  if (f.lambda_max < 2) throw UsageError("--lambda-max must be >= 2");
  std::string body = csv_row({"bound", "eps", "delta", "argmin_lambda", "eps_unclamped"});
  if (!f.curve_file.empty()) {
    const RdpCurve curve = compose(read_curve_csv(f.curve_file), f.rounds);
    body += guarantee_row("curve", rdp_to_dp(curve, f.delta));
    return body;
  }
  const SubsampledShuffleParams params = mechanism_params(f.mech);
  require_upper_domain(params);
  const AccountantConfig cfg{f.rounds, f.delta, f.lambda_max, f.exact_search};
  body += guarantee_row("upper", total_privacy(params, cfg));
  body += guarantee_row("lower", total_privacy_lower(params, cfg));
  return body;
}

// ---- compare ---------------------------------------------------------------

struct CompareFlags {
  MechanismFlags mech;
  std::string axis;
  std::vector<double> values;
  std::vector<double> range;
  std::int64_t rounds = 1;
  double delta = 1e-5;
  int lambda_max = kDefaultLambdaMax;
  bool exact_search = false;
  std::string out_dir;
  CLI::Option* rounds_opt = nullptr;
};

bool integral_axis(const std::string& axis) { return axis != "eps0"; }

std::vector<double> sweep_values(const CompareFlags& f) {
  std::vector<double> values;
  if (!f.values.empty() && !f.range.empty()) throw UsageError("give either --values or --range, not both");
  if (!f.values.empty()) {
    values = f.values;
    if (!std::is_sorted(values.begin(), values.end()) ||
        std::adjacent_find(values.begin(), values.end()) != values.end()) {
      throw UsageError("--values must be strictly increasing");
    }
  } else if (!f.range.empty()) {
    if (f.range.size() != 3) throw UsageError("--range expects start,stop,points");
    const double a = f.range[0], b = f.range[1];
    const double points = f.range[2];
    if (!(a > 0.0) || !(b >= a) || points < 1 || points != std::floor(points)) {
      throw UsageError("--range needs 0 < start <= stop and an integer point count >= 1");
    }
    const int count = static_cast<int>(points);
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      values.push_back(std::exp(std::log(a) + t * (std::log(b) - std::log(a))));
    }
    if (integral_axis(f.axis)) {
      for (double& v : values) v = std::round(v);
      values.erase(std::unique(values.begin(), values.end()), values.end());
    }
  } else {
    throw UsageError("one of --values or --range is required");
  }
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("sweep values must be positive and finite");
    if (integral_axis(f.axis) && v != std::floor(v)) {
      throw UsageError("axis " + f.axis + " takes integer values");
    }
  }
  return values;
}

struct ComparePoint {
  double axis_value = 0.0;
  SubsampledShuffleParams params{1, 1, 0.0};
  std::int64_t rounds = 1;
  int fixed_lambda = 0;  // > 0 on the lambda axis
  DpGuarantee ours;
  DpGuarantee baseline;
  DpGuarantee lower;
};

DpGuarantee single_order(RdpEvaluator& eval, int lambda, std::int64_t rounds, double delta) {
  RdpCurve curve{eval.params(), {{lambda, eval(lambda)}}, eval.kind()};
  return rdp_to_dp(compose(curve, rounds), delta);
}

int cmd_compare(const CompareFlags& f, std::ostream& out) {
  if (f.axis != "T" && f.axis != "n" && f.axis != "lambda" && f.axis != "eps0") {
    throw UsageError("--axis must be one of T, n, lambda, eps0");
  }
  require_delta(f.delta);
  if (f.lambda_max < 2) throw UsageError("--lambda-max must be >= 2");
  const std::vector<double> values = sweep_values(f);
  if (f.axis != "T" && f.rounds_opt->count() == 0) throw UsageError("--rounds is required");
  if (f.axis != "n" && f.mech.n_opt->count() == 0) throw UsageError("--n is required");
  if (f.axis != "eps0" && f.mech.eps0_opt->count() == 0) throw UsageError("--eps0 is required");

  std::vector<ComparePoint> points;
  for (double v : values) {
    ComparePoint p;
    p.axis_value = v;
    p.rounds = f.axis == "T" ? static_cast<std::int64_t>(v) : f.rounds;
    const std::int64_t n = f.axis == "n" ? static_cast<std::int64_t>(v) : f.mech.n;
    const double eps0 = f.axis == "eps0" ? v : f.mech.eps0;
    if (f.axis == "lambda") {
      if (v < 2.0 || v > 1e6) throw UsageError("lambda axis values must lie in [2, 1e6]");
      p.fixed_lambda = static_cast<int>(v);
    }
    p.params = mechanism_params(f.mech, n, eps0);
    require_upper_domain(p.params);
    require_rounds(p.rounds);
    points.push_back(p);
  }

  parallel_for(points.size(), [&](std::size_t i) {
    ComparePoint& p = points[i];
    const AccountantConfig cfg{p.rounds, f.delta, f.lambda_max, f.exact_search};
    auto upper = make_upper_evaluator(p.params);
    auto lower = make_lower_evaluator(p.params);
    if (p.fixed_lambda > 0) {
      p.ours = single_order(*upper, p.fixed_lambda, p.rounds, f.delta);
      p.lower = single_order(*lower, p.fixed_lambda, p.rounds, f.delta);
    } else {
      p.ours = minimize_over_orders(*upper, cfg);
      p.lower = minimize_over_orders(*lower, cfg);
    }
    p.baseline = baseline_total(p.params, p.rounds, f.delta);
  });

  std::string csv = csv_row({"axis_value", "eps_ours", "eps_baseline", "eps_lower_ref"});
  json rows = json::array();
  for (const ComparePoint& p : points) {
    csv += csv_row({format_number(p.axis_value), format_number(p.ours.eps),
                    p.baseline.degenerate ? std::string("degenerate") : format_number(p.baseline.eps),
                    format_number(p.lower.eps)});
    rows.push_back({{"axis_value", p.axis_value},
                    {"n", p.params.n()},
                    {"k", p.params.k()},
                    {"eps0", p.params.eps0()},
                    {"rounds", p.rounds},
                    {"ours_argmin_lambda", p.ours.argmin_lambda.value_or(0)},
                    {"lower_argmin_lambda", p.lower.argmin_lambda.value_or(0)},
                    {"baseline_eps", p.baseline.eps},
                    {"baseline_delta", p.baseline.delta},
                    {"baseline_degenerate", p.baseline.degenerate}});
  }
  if (f.out_dir.empty()) {
    out << csv;
    return kExitOk;
  }
  json meta = {{"command", "compare"},
               {"axis", f.axis},
               {"delta", f.delta},
               {"lambda_max", f.lambda_max},
               {"exact_search", f.exact_search},
               {"baseline", {{"variant", "clones_closed_form"},
                             {"delta_shuffle", 0.5 * f.delta},
                             {"delta_comp", 0.5 * f.delta}}},
               {"points", rows}};
  emit(f.out_dir, "compare.csv", csv, out);
  emit(f.out_dir, "compare.json", meta.dump(2) + "\n", out);
  return kExitOk;
}

// ---- simulate ----------------------------------------------------------------

struct SimulateFlags {
  std::string loss = "least_squares";
  int n = 1000;
  int dim = 10;
  double radius = 1.0;
  std::uint64_t data_seed = 1;
  SgdConfig sgd;
  std::string schedule = "paper";
  bool no_randomize = false;
  bool no_shuffle = false;
  std::string out_dir;
};

int cmd_simulate(SimulateFlags f, std::ostream& out) {
  if (f.out_dir.empty()) throw UsageError("--out is required for simulate");
  Loss loss;
  if (f.loss == "least_squares") {
    loss = Loss::kLeastSquares;
  } else if (f.loss == "logistic") {
    loss = Loss::kLogistic;
  } else {
    throw UsageError("--loss must be least_squares or logistic");
  }
  if (f.schedule == "paper") {
    f.sgd.schedule = Schedule::kPaper;
  } else if (f.schedule == "constant") {
    f.sgd.schedule = Schedule::kConstant;
  } else {
    throw UsageError("--schedule must be paper or constant");
  }
  f.sgd.randomize = !f.no_randomize;
  f.sgd.shuffle = !f.no_shuffle;
  if (f.n < 1 || f.dim < 1) throw UsageError("--n and --d must be >= 1");

  std::optional<ConvexProblem> problem;
  try {
    problem.emplace(ConvexProblem::synthetic(loss, f.n, f.dim, f.radius, f.data_seed));
    validate_sgd_config(*problem, f.sgd);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }

  const SgdRunReport report = run(*problem, f.sgd);
  std::string csv = csv_row({"round", "objective", "suboptimality"});
  for (const TrajectoryPoint& p : report.trajectory) {
    csv += csv_row({std::to_string(p.round), format_number(p.objective), format_number(p.suboptimality)});
  }
  json privacy = nullptr;
  if (report.privacy) {
    privacy = {{"eps", report.privacy->eps},
               {"delta", report.privacy->delta},
               {"argmin_lambda", report.privacy->argmin_lambda.value_or(0)},
               {"eps_unclamped", report.privacy->eps_unclamped},
               {"provenance", provenance_name(report.privacy->provenance)}};
  }
  const json meta = {
      {"command", "simulate"},
      {"problem", {{"loss", loss_name(loss)}, {"n", f.n}, {"d", f.dim}, {"radius", f.radius},
                   {"data_seed", f.data_seed}, {"lipschitz", problem->lipschitz()},
                   {"optimum", problem->optimum()}}},
      {"config", {{"rounds", f.sgd.rounds}, {"k", f.sgd.cohort}, {"eps0", f.sgd.eps0},
                  {"clip", effective_clip(*problem, f.sgd)}, {"schedule", f.schedule},
                  {"eta", f.sgd.eta}, {"seed", f.sgd.seed}, {"delta", f.sgd.delta},
                  {"randomize", f.sgd.randomize}, {"shuffle", f.sgd.shuffle},
                  {"lambda_max", f.sgd.lambda_max}}},
      {"final_objective", report.final_objective},
      {"final_suboptimality", report.final_suboptimality},
      {"diameter", report.step_d},
      {"g", report.step_g},
      {"convergence_bound", convergence_bound(report.step_d, report.step_g, f.sgd.rounds)},
      {"grad_second_moment", report.grad_second_moment},
      {"second_moment_bound", second_moment_bound(*problem, f.sgd)},
      {"privacy", privacy}};
  emit(f.out_dir, "trajectory.csv", csv, out);
  emit(f.out_dir, "privacy.json", meta.dump(2) + "\n", out);
  return kExitOk;
}

// ---- oracle ------------------------------------------------------------------

int cmd_oracle(const std::string& name, std::ostream& out) {
  const CheckReport r = run_check(name);
  char margin[64];
  std::snprintf(margin, sizeof(margin), "%.6e", r.worst_margin);
  out << "check=" << r.name << " status=" << (r.passed ? "pass" : "FAIL") << " cases=" << r.cases
      << " worst_margin=" << margin << "\n";
  out << "worst_case: " << r.worst_case << "\n";
  return r.passed ? kExitOk : kExitCheckFailed;
}

// ---- config file -------------------------------------------------------------

std::string json_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
    return buf;
  }
  throw UsageError("config values must be strings, numbers, booleans or arrays of numbers");
}

bool flag_given(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  for (const std::string& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Turns a JSON object into --key=value tokens for keys the command line did
// not set.
std::vector<std::string> config_tokens(const std::string& path, const std::vector<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> tokens;
  for (const auto& [raw_key, value] : cfg.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config" || flag_given(given, key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
    } else if (value.is_array()) {
      std::string joined;
      for (const json& item : value) joined += (joined.empty() ? "" : ",") + json_scalar(item);
      tokens.push_back("--" + key + "=" + joined);
    } else {
      tokens.push_back("--" + key + "=" + json_scalar(value));
    }
  }
  return tokens;
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return "";
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.14e", v);
  return buf;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Renyi-DP accounting for the subsampled shuffle mechanism", "rdpacct"};
  app.require_subcommand(1);
  std::string config_file;

  BoundFlags bound;
  CLI::App* bound_cmd = app.add_subcommand("bound", "Tabulate the RDP upper and lower bounds over lambda");
  add_mechanism_flags(bound_cmd, bound.mech);
  bound_cmd->add_option("--lambda-min", bound.lambda_min, "Smallest order")->capture_default_str();
  bound_cmd->add_option("--lambda-max", bound.lambda_max, "Largest order")->capture_default_str();
  bound_cmd->add_option("--out", bound.out_dir, "Write bound.csv into this directory");

  BoundFlags comp;
  CLI::App* compose_cmd = app.add_subcommand("compose", "Tabulate both bounds composed over T rounds");
  add_mechanism_flags(compose_cmd, comp.mech);
  compose_cmd->add_option("--lambda-min", comp.lambda_min, "Smallest order")->capture_default_str();
  compose_cmd->add_option("--lambda-max", comp.lambda_max, "Largest order")->capture_default_str();
  compose_cmd->add_option("--rounds", comp.rounds, "Number of rounds T")->required();
  compose_cmd->add_option("--out", comp.out_dir, "Write compose.csv into this directory");

  ConvertFlags conv;
  CLI::App* convert_cmd = app.add_subcommand("convert", "Compose over T rounds and convert to (eps, delta)-DP");
  add_mechanism_flags(convert_cmd, conv.mech);
  convert_cmd->add_option("--rounds", conv.rounds, "Number of rounds T")->capture_default_str();
  convert_cmd->add_option("--delta", conv.delta, "Target delta")->capture_default_str();
  convert_cmd->add_option("--lambda-max", conv.lambda_max, "Largest order searched")->capture_default_str();
  convert_cmd->add_flag("--exact-search", conv.exact_search, "Search every order up to --lambda-max");
  convert_cmd->add_option("--curve", conv.curve_file, "Convert a lambda,eps CSV curve instead of the bounds");
  convert_cmd->add_option("--out", conv.out_dir, "Write convert.csv into this directory");

  CompareFlags cmp;
  CLI::App* compare_cmd = app.add_subcommand("compare", "Sweep one axis and compare ours, baseline and lower reference");
  add_mechanism_flags(compare_cmd, cmp.mech);
  compare_cmd->add_option("--axis", cmp.axis, "Sweep axis: T, n, lambda or eps0")->required();
  compare_cmd->add_option("--values", cmp.values, "Explicit axis values")->delimiter(',');
  compare_cmd->add_option("--range", cmp.range, "Log-spaced start,stop,points")->delimiter(',');
  cmp.rounds_opt = compare_cmd->add_option("--rounds", cmp.rounds, "Number of rounds T");
  compare_cmd->add_option("--delta", cmp.delta, "Target delta")->capture_default_str();
  compare_cmd->add_option("--lambda-max", cmp.lambda_max, "Largest order searched")->capture_default_str();
  compare_cmd->add_flag("--exact-search", cmp.exact_search, "Search every order up to --lambda-max");
  compare_cmd->add_option("--out", cmp.out_dir, "Write compare.csv and compare.json into this directory");

  SimulateFlags sim;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Run CLDP-SGD on a synthetic convex problem");
  simulate_cmd->add_option("--loss", sim.loss, "least_squares or logistic")->capture_default_str();
  simulate_cmd->add_option("--n", sim.n, "Number of clients")->capture_default_str();
  simulate_cmd->add_option("--d", sim.dim, "Dimension")->capture_default_str();
  simulate_cmd->add_option("--radius", sim.radius, "Radius of the l2-ball domain")->capture_default_str();
  simulate_cmd->add_option("--data-seed", sim.data_seed, "Seed of the synthetic dataset")->capture_default_str();
  simulate_cmd->add_option("--rounds", sim.sgd.rounds, "Number of rounds T")->required();
  simulate_cmd->add_option("--k", sim.sgd.cohort, "Clients sampled per round")->required();
  simulate_cmd->add_option("--eps0", sim.sgd.eps0, "LDP parameter eps0")->capture_default_str();
  simulate_cmd->add_option("--clip", sim.sgd.clip, "l_inf clip radius; 0 uses the Lipschitz constant")
      ->capture_default_str();
  simulate_cmd->add_option("--schedule", sim.schedule, "paper or constant")->capture_default_str();
  simulate_cmd->add_option("--eta", sim.sgd.eta, "Step size for the constant schedule")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.sgd.seed, "Seed of the run")->capture_default_str();
  simulate_cmd->add_option("--delta", sim.sgd.delta, "Target delta")->capture_default_str();
  simulate_cmd->add_option("--lambda-max", sim.sgd.lambda_max, "Largest order searched")->capture_default_str();
  simulate_cmd->add_flag("--no-randomize", sim.no_randomize, "Bypass the local randomizer");
  simulate_cmd->add_flag("--no-shuffle", sim.no_shuffle, "Skip the explicit shuffling step");
  simulate_cmd->add_option("--out", sim.out_dir, "Write trajectory.csv and privacy.json into this directory");

  std::string check_name;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Run an invariant suite against the exact oracles");
  oracle_cmd->add_option("check", check_name, "sandwich, exact2rr, ternary, convexity or monotone")
      ->required()
      ->check(CLI::IsMember(check_names()));

  for (CLI::App* cmd : {bound_cmd, compose_cmd, convert_cmd, compare_cmd, simulate_cmd, oracle_cmd}) {
    cmd->add_option("--config", config_file, "JSON file of option values; flags override it");
  }

  try {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    const std::string path = config_path(args);
    if (!path.empty() && !args.empty()) {
      const std::vector<std::string> extra = config_tokens(path, args);
      args.insert(args.begin() + 1, extra.begin(), extra.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      const auto subs = app.get_subcommands();
      out << (subs.empty() ? app.help() : subs.front()->help());
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (bound_cmd->parsed()) {
      emit(bound.out_dir, "bound.csv", bound_table(bound, 1, ""), out);
      return kExitOk;
    }
    if (compose_cmd->parsed()) {
      emit(comp.out_dir, "compose.csv", bound_table(comp, comp.rounds, "_composed"), out);
      return kExitOk;
    }
    if (convert_cmd->parsed()) {
      emit(conv.out_dir, "convert.csv", convert_table(conv), out);
      return kExitOk;
    }
    if (compare_cmd->parsed()) return cmd_compare(cmp, out);
    if (simulate_cmd->parsed()) return cmd_simulate(sim, out);
    if (oracle_cmd->parsed()) return cmd_oracle(check_name, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace rdpacct
