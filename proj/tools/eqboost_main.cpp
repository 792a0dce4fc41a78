// Copyright 2026 The eqboost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "eqboost/experiments.hpp"
#include "eqboost/process.hpp"
#include "eqboost/verification.hpp"

namespace {

using eqboost::UsageError;
using nlohmann::json;

// Late-merges a flat JSON config file under the command line: a key applies
// only when its flag was not passed explicitly. Unknown keys are rejected.
class ConfigBinder {
 public:
  void bind(CLI::Option* opt, std::string key, std::function<void(const json&)> set) {
    entries_.emplace(std::move(key), Entry{opt, std::move(set)});
  }

  // Returns the set of keys actually taken from the file.
  std::vector<std::string> apply(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("--config: cannot open " + path);
    json cfg;
    try {
      in >> cfg;
    } catch (const json::exception& e) {
      throw UsageError("--config: invalid JSON: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw UsageError("--config: expected a flat JSON object");
    std::vector<std::string> applied;
    for (const auto& [key, value] : cfg.items()) {
      const auto it = entries_.find(key);
      if (it == entries_.end()) throw UsageError("--config: unknown key '" + key + "'");
      if (it->second.opt->count() > 0) continue;  // explicit flag wins
      try {
        it->second.set(value);
      } catch (const json::exception& e) {
        throw UsageError("--config: bad value for '" + key + "': " + e.what());
      }
      applied.push_back(key);
    }
    return applied;
  }

 private:
  struct Entry {
    CLI::Option* opt;
    std::function<void(const json&)> set;
  };
  std::map<std::string, Entry> entries_;
};

std::uint64_t env_seed() {
  if (const char* raw = std::getenv("EQBOOST_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end && *end == '\0') return v;
    throw UsageError("EQBOOST_SEED: cannot parse '" + std::string(raw) + "'");
  }
  return 0;
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw UsageError("--eps: must be in (0,1)");
}

void check_n(long long n) {
  if (n < 1) throw UsageError("--n: feature space size must be >= 1");
}

eqboost::ScheduleMode parse_mode(const std::string& mode) {
  if (mode == "practical") return eqboost::ScheduleMode::Practical;
  if (mode == "theory") return eqboost::ScheduleMode::Theory;
  throw UsageError("--mode: expected practical | theory, got '" + mode + "'");
}

eqboost::RuleBScope parse_scope(const std::string& scope) {
  if (scope == "all") return eqboost::RuleBScope::AllPositions;
  if (scope == "negative") return eqboost::RuleBScope::NegativeOnly;
  if (scope == "positive") return eqboost::RuleBScope::PositiveOnly;
  throw UsageError("--scope: expected all | negative | positive, got '" + scope + "'");
}

void print_schedule(const eqboost::Schedule& s) {
  using eqboost::format_double;
  std::cout << "mode=" << (s.mode == eqboost::ScheduleMode::Theory ? "theory" : "practical")
            << "\nepsilon=" << format_double(s.epsilon) << "\ndelta=" << format_double(s.delta)
            << "\nd=" << s.vc << "\nc_m=" << format_double(s.c_m)
            << "\nc_t=" << format_double(s.c_t) << "\neps_prime=" << format_double(s.eps_prime)
            << "\nB=" << s.bound << "\nm=" << s.batch_size << "\nt=" << s.rounds
            << "\ndistinct_function_bound=" << s.distinct_function_bound()
            << "\nquery_bound=" << format_double(s.query_bound()) << "\n";
  // Normalization against the O((d + log(1/delta)) * log^9(1/eps)) form.
  const double form = (s.vc + std::log2(1.0 / s.delta)) *
                      std::pow(std::log2(1.0 / s.epsilon), 9.0);
  std::cout << "polylog_form_value=" << format_double(form)
            << "\npolylog_form_constant=" << format_double(s.query_bound() / form) << "\n";
}

// Shared experiment options (learn / game / compare).
struct RunOpts {
  std::string class_spec = "thresholds";
  long long n = 65536;
  std::string dist = "uniform";
  std::string g = "random";
  double delta = 1.0 / 3.0;
  std::string mode = "practical";
  double c_m = eqboost::kDefaultCm;
  double c_t = eqboost::kDefaultCt;
  std::uint64_t seed = 0;
  std::string config_path;
};

struct SeedTracking {
  CLI::Option* opt = nullptr;
  bool from_file = false;
};

void add_run_options(CLI::App* cmd, RunOpts& o, ConfigBinder& binder, SeedTracking& seed) {
  auto* oc = cmd->add_option("--class", o.class_spec,
                             "hypothesis class: thresholds | intervals | union:<k>");
  binder.bind(oc, "class", [&o](const json& v) { o.class_spec = v.get<std::string>(); });
  auto* on = cmd->add_option("--n", o.n, "feature space size");
  binder.bind(on, "n", [&o](const json& v) { o.n = v.get<long long>(); });
  auto* od = cmd->add_option("--dist", o.dist,
                             "distribution: uniform | random | point:<i> | weights:...");
  binder.bind(od, "dist", [&o](const json& v) { o.dist = v.get<std::string>(); });
  auto* og = cmd->add_option("--g", o.g,
                             "ground truth: random | threshold:<t> | interval:<a>-<b> | union:...");
  binder.bind(og, "g", [&o](const json& v) { o.g = v.get<std::string>(); });
  auto* ode = cmd->add_option("--delta", o.delta, "failure probability (default 1/3)");
  binder.bind(ode, "delta", [&o](const json& v) { o.delta = v.get<double>(); });
  auto* om = cmd->add_option("--mode", o.mode, "schedule mode: practical | theory");
  binder.bind(om, "mode", [&o](const json& v) { o.mode = v.get<std::string>(); });
  auto* ocm = cmd->add_option("--c-m", o.c_m, "batch-size constant");
  binder.bind(ocm, "c-m", [&o](const json& v) { o.c_m = v.get<double>(); });
  auto* oct = cmd->add_option("--c-t", o.c_t, "round-count constant");
  binder.bind(oct, "c-t", [&o](const json& v) { o.c_t = v.get<double>(); });
  seed.opt = cmd->add_option("--seed", o.seed, "master seed (lowest precedence: EQBOOST_SEED)");
  binder.bind(seed.opt, "seed", [&o, &seed](const json& v) {
    o.seed = v.get<std::uint64_t>();
    seed.from_file = true;
  });
  cmd->add_option("--config", o.config_path, "flat JSON config file (flags override)");
}

void finalize_seed(const RunOpts& o, const SeedTracking& tracking, std::uint64_t& out) {
  if (tracking.opt->count() > 0 || tracking.from_file) {
    out = o.seed;
  } else {
    out = env_seed();
  }
}

int cmd_learn(const RunOpts& opts, double eps, bool dry_run, double budget,
              bool stop_at_target, std::uint64_t seed) {
  check_eps(eps);
  check_n(opts.n);
  const auto cls = eqboost::parse_class_spec(opts.class_spec);
  const int d = vc_dim(cls);
  eqboost::ScheduleOverrides ov{opts.c_m, opts.c_t};
  const auto schedule = eqboost::schedule_params(eps, opts.delta, d, parse_mode(opts.mode), ov);

  std::cout << "command=learn\nclass=" << cls.name() << "\nn=" << opts.n
            << "\nseed=" << seed << "\n";
  print_schedule(schedule);
  if (dry_run) {
    std::cout << "dry_run=true\n";
    return 0;
  }

  eqboost::RandomStream master(seed);
  eqboost::RandomStream dist_rng = master.substream(0, 1);
  eqboost::RandomStream g_rng = master.substream(0, 2);
  eqboost::RandomStream eq_rng = master.substream(0, 3);
  const auto dist = eqboost::make_dist(opts.dist, opts.n, dist_rng);
  const auto g = eqboost::make_ground_truth(opts.g, cls, opts.n, g_rng);
  std::cout << "g=" << g.describe() << "\n";

  eqboost::ExactEqSource source(dist, g, eq_rng);
  eqboost::EqLearnOptions lo;
  lo.query_budget = budget;
  if (stop_at_target) {
    lo.stop_at_target = true;
    lo.exact_risk = [&](const eqboost::Hypothesis& h) { return risk(h, g, dist); };
  }
  const auto result = eq_learn(cls, opts.n, source, schedule, lo);
  const double final_risk = risk(result.hypothesis, g, dist);
  std::cout << "final_risk=" << eqboost::format_double(final_risk)
            << "\neq_queries=" << result.stats.eq_queries
            << "\ndistinct_functions=" << result.stats.distinct_functions
            << "\nrounds=" << result.stats.rounds
            << "\nearly_stop=" << (result.stats.early_stop ? 1 : 0)
            << "\nsuccess=" << (final_risk <= eps ? 1 : 0) << "\n";
  return 0;
}

int cmd_game(const RunOpts& opts, double eps, const std::string& adversary, double beta,
             int trials, std::uint64_t seed) {
  check_eps(eps);
  check_n(opts.n);
  const auto cls = eqboost::parse_class_spec(opts.class_spec);
  const auto kind = eqboost::parse_adversary_kind(adversary);
  eqboost::ScheduleOverrides ov{opts.c_m, opts.c_t};
  const auto schedule =
      eqboost::schedule_params(eps, opts.delta, vc_dim(cls), parse_mode(opts.mode), ov);

  std::cout << "command=game\nadversary=" << adversary << "\nclass=" << cls.name()
            << "\nn=" << opts.n << "\ntrials=" << trials << "\nseed=" << seed << "\n";

  eqboost::RandomStream master(seed);
  int risk_achieved = 0, non_strong = 0, failure = 0;
  for (int trial = 0; trial < trials; ++trial) {
    eqboost::RandomStream dist_rng = master.substream(trial, 1);
    eqboost::RandomStream g_rng = master.substream(trial, 2);
    eqboost::RandomStream game_rng = master.substream(trial, 3);
    const auto dist = eqboost::make_dist(opts.dist, opts.n, dist_rng);
    const auto g = eqboost::make_ground_truth(opts.g, cls, opts.n, g_rng);
    const eqboost::GameContext ctx{&dist, &g};
    auto adv = make_adversary(kind, ctx, beta);
    const auto t = run_game(cls, dist, g, *adv, schedule, game_rng);

    switch (t.verdict.kind) {
      case eqboost::GameVerdictKind::RiskAchieved: ++risk_achieved; break;
      case eqboost::GameVerdictKind::NonStrongRoundFound: ++non_strong; break;
      case eqboost::GameVerdictKind::Failure: ++failure; break;
    }
    std::cout << "trial=" << trial << " verdict=" << verdict_name(t.verdict.kind)
              << " final_risk=" << eqboost::format_double(t.final_risk)
              << " round=" << t.verdict.round
              << " tv=" << eqboost::format_double(t.verdict.tv)
              << " functions_shown=" << t.functions.size()
              << " replies=" << t.stats.eq_queries
              << " inconsistent=" << (t.adversary_inconsistent ? 1 : 0) << "\n";
  }
  std::cout << "risk_achieved=" << risk_achieved << "\nnon_strong_round_found=" << non_strong
            << "\nfailure=" << failure << "\n";
  return failure == 0 ? 0 : 1;
}

int cmd_process(double eps, const std::string& scheduler, long long steps,
                const std::string& start, const std::string& scope_name,
                const std::string& trace_path, bool trace_slots, long long trace_every,
                std::uint64_t seed) {
  check_eps(eps);
  const auto scope = parse_scope(scope_name);
  std::unique_ptr<eqboost::ProcessScheduler> sched;
  if (scheduler == "greedy-up") sched = eqboost::greedy_up_scheduler(scope);
  else if (scheduler == "all-down") sched = eqboost::all_down_scheduler();
  else if (scheduler == "uniform-random") sched = eqboost::uniform_random_scheduler(scope);
  else if (scheduler == "proportional") sched = eqboost::proportional_scheduler();
  else
    throw UsageError("--scheduler: expected greedy-up | all-down | uniform-random | "
                     "proportional, got '" + scheduler + "'");

  const int b = eqboost::vote_bound(eps);
  if (steps < 0) steps = 10LL * b * b * b;

  eqboost::RunProcessOptions ro;
  ro.scope = scope;
  if (start == "top") {
    // default initial state in run_process
  } else if (start == "bottom") {
    eqboost::ArrayXd m = eqboost::ArrayXd::Zero(b + 1);
    m[0] = 1.0;
    ro.initial = m;
  } else if (start == "uniform") {
    ro.initial = eqboost::ArrayXd::Constant(b + 1, 1.0 / (b + 1));
  } else {
    throw UsageError("--start: expected top | bottom | uniform, got '" + start + "'");
  }

  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path, std::ios::binary);
    if (!trace) throw eqboost::IoError("--trace: cannot open " + trace_path);
    ro.trace = &trace;
    ro.trace_slots = trace_slots;
    ro.trace_every = trace_every;
  }

  eqboost::RandomStream rng = eqboost::RandomStream(seed).substream(0, 4);
  const auto s = run_process(eps, *sched, steps, rng, ro);
  std::cout << "command=process\nscheduler=" << s.scheduler << "\nepsilon="
            << eqboost::format_double(eps) << "\nB=" << s.bound << "\nsteps=" << s.steps
            << "\nseed=" << seed
            << "\nfinal_W=" << eqboost::format_double(s.final_metrics.W)
            << "\nfinal_M=" << eqboost::format_double(s.final_metrics.M)
            << "\nfinal_positive_mass=" << eqboost::format_double(s.final_metrics.positive_mass)
            << "\nconvergence_bound=" << eqboost::format_double(s.convergence_bound)
            << "\nconverged=" << (s.converged ? 1 : 0)
            << "\nw_recurrence_violations=" << s.w_recurrence_violations
            << "\nclamp_events=" << s.clamp_events
            << "\nmax_mass_drift=" << eqboost::format_double(s.max_mass_drift) << "\n";
  return s.converged && s.w_recurrence_violations == 0 ? 0 : 1;
}

int cmd_compare(const RunOpts& opts, const std::vector<double>& eps_list, int trials,
                int threads, const std::string& out_path, std::uint64_t seed) {
  for (const double e : eps_list) check_eps(e);
  check_n(opts.n);
  eqboost::CompareConfig config;
  config.class_spec = opts.class_spec;
  config.n = opts.n;
  config.dist_spec = opts.dist;
  config.g_spec = opts.g;
  config.eps_list = eps_list;
  config.delta = opts.delta;
  config.mode = parse_mode(opts.mode);
  config.overrides = eqboost::ScheduleOverrides{opts.c_m, opts.c_t};
  config.trials = trials;
  config.seed = seed;
  config.threads = threads;

  const auto report = run_compare_sweep(config);
  if (out_path.empty()) {
    std::cout << to_csv_string(report.table);
  } else {
    emit_csv(report.table, out_path);
    std::cout << "command=compare\nout=" << out_path << "\n";
    for (const auto& s : report.summaries) {
      std::cout << "epsilon=" << eqboost::format_double(s.epsilon)
                << " pac_samples=" << s.pac_samples
                << " median_eq_queries=" << eqboost::format_double(s.median_eq_queries)
                << " eq_success_rate=" << eqboost::format_double(s.eq_success_rate)
                << " pac_success_rate=" << eqboost::format_double(s.pac_success_rate) << "\n";
    }
  }
  return 0;
}

int cmd_verify(std::uint64_t seed, const std::vector<std::string>& suites) {
  const auto results = eqboost::run_verification_suites(seed, suites);
  bool all_ok = true;
  for (const auto& r : results) {
    std::cout << r.name << ": " << (r.passed ? "PASS" : "FAIL") << " (" << r.detail << ")\n";
    all_ok = all_ok && r.passed;
  }
  if (!all_ok) {
    json failed = json::array();
    for (const auto& r : results)
      if (!r.passed) failed.push_back({{"suite", r.name}, {"detail", r.detail}});
    std::cerr << json{{"failed", failed}}.dump() << "\n";
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EQ-learning boosting simulator: learner, adversarial game, and "
               "mass-movement process"};
  app.require_subcommand(1);

  // learn
  RunOpts learn_opts;
  double learn_eps = 1.0 / 16;
  bool learn_dry = false;
  bool learn_stop = false;
  double learn_budget = 1e8;
  ConfigBinder learn_binder;
  SeedTracking learn_seed;
  auto* learn = app.add_subcommand("learn", "one boosting run against the exact EQ oracle");
  add_run_options(learn, learn_opts, learn_binder, learn_seed);
  auto* le = learn->add_option("--eps", learn_eps, "target error");
  learn_binder.bind(le, "eps", [&](const json& v) { learn_eps = v.get<double>(); });
  auto* ld = learn->add_flag("--dry-run", learn_dry, "print the schedule and exit");
  learn_binder.bind(ld, "dry-run", [&](const json& v) { learn_dry = v.get<bool>(); });
  auto* lb = learn->add_option("--budget", learn_budget,
                               "max m*t*(B+1) allowed for Theory-mode execution");
  learn_binder.bind(lb, "budget", [&](const json& v) { learn_budget = v.get<double>(); });
  auto* ls = learn->add_flag("--stop-at-target", learn_stop,
                             "stop once the exact risk reaches the target (practical mode)");
  learn_binder.bind(ls, "stop-at-target", [&](const json& v) { learn_stop = v.get<bool>(); });

  // game
  RunOpts game_opts;
  double game_eps = 1.0 / 16;
  std::string game_adversary = "strong";
  double game_beta = 2.0;
  int game_trials = 1;
  ConfigBinder game_binder;
  SeedTracking game_seed;
  auto* game = app.add_subcommand("game", "adversarial learning game with a chosen attacker");
  add_run_options(game, game_opts, game_binder, game_seed);
  auto* ge = game->add_option("--eps", game_eps, "target error");
  game_binder.bind(ge, "eps", [&](const json& v) { game_eps = v.get<double>(); });
  auto* ga = game->add_option("--adversary", game_adversary,
                              "strong | fixed-error | nearest-error | biased-error | lazy");
  game_binder.bind(ga, "adversary", [&](const json& v) { game_adversary = v.get<std::string>(); });
  auto* gb = game->add_option("--beta", game_beta, "bias exponent for biased-error");
  game_binder.bind(gb, "beta", [&](const json& v) { game_beta = v.get<double>(); });
  auto* gt = game->add_option("--trials", game_trials, "seeded games to play");
  game_binder.bind(gt, "trials", [&](const json& v) { game_trials = v.get<int>(); });

  // process
  double proc_eps = 1.0 / 64;
  std::string proc_sched = "greedy-up";
  long long proc_steps = -1;
  std::string proc_start = "top";
  std::string proc_scope = "all";
  std::string proc_trace;
  bool proc_trace_slots = false;
  long long proc_trace_every = 1;
  std::uint64_t proc_seed = 0;
  auto* proc = app.add_subcommand("process", "mass-movement process simulation");
  proc->add_option("--eps", proc_eps, "process epsilon (must be in (0,1/32))");
  proc->add_option("--scheduler", proc_sched,
                   "greedy-up | all-down | uniform-random | proportional");
  proc->add_option("--steps", proc_steps, "step count (default ceil(10*B^3))");
  proc->add_option("--start", proc_start, "initial masses: top | bottom | uniform");
  proc->add_option("--scope", proc_scope, "up-cap scope: all | negative | positive");
  proc->add_option("--trace", proc_trace, "write per-step metrics CSV to this path");
  proc->add_flag("--trace-slots", proc_trace_slots, "include per-slot masses in the trace");
  proc->add_option("--trace-every", proc_trace_every, "trace stride");
  auto* proc_seed_opt = proc->add_option("--seed", proc_seed, "seed");

  // compare
  RunOpts cmp_opts;
  std::vector<double> cmp_eps;
  int cmp_trials = 20;
  int cmp_threads = 1;
  std::string cmp_out;
  ConfigBinder cmp_binder;
  SeedTracking cmp_seed;
  auto* cmp = app.add_subcommand("compare", "PAC-versus-EQ query-complexity sweep (CSV)");
  add_run_options(cmp, cmp_opts, cmp_binder, cmp_seed);
  auto* ce = cmp->add_option("--eps", cmp_eps, "target errors (repeatable)");
  cmp_binder.bind(ce, "eps", [&](const json& v) {
    cmp_eps.clear();
    if (v.is_array())
      for (const auto& x : v) cmp_eps.push_back(x.get<double>());
    else
      cmp_eps.push_back(v.get<double>());
  });
  auto* ct = cmp->add_option("--trials", cmp_trials, "trials per epsilon");
  cmp_binder.bind(ct, "trials", [&](const json& v) { cmp_trials = v.get<int>(); });
  auto* cth = cmp->add_option("--threads", cmp_threads, "worker threads");
  cmp_binder.bind(cth, "threads", [&](const json& v) { cmp_threads = v.get<int>(); });
  auto* co = cmp->add_option("--out", cmp_out, "CSV output path (default: stdout)");
  cmp_binder.bind(co, "out", [&](const json& v) { cmp_out = v.get<std::string>(); });

  // verify
  std::uint64_t verify_seed = 0;
  std::vector<std::string> verify_suites;
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--seed", verify_seed, "seed");
  auto* verify_seed_opt = verify->get_option("--seed");
  verify->add_option("--suite", verify_suites,
                     "suite names (default: all of model voting oracles learners process "
                     "game csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (learn->parsed()) {
      if (!learn_opts.config_path.empty()) learn_binder.apply(learn_opts.config_path);
      std::uint64_t seed = 0;
      finalize_seed(learn_opts, learn_seed, seed);
      return cmd_learn(learn_opts, learn_eps, learn_dry, learn_budget, learn_stop, seed);
    }
    if (game->parsed()) {
      if (!game_opts.config_path.empty()) game_binder.apply(game_opts.config_path);
      std::uint64_t seed = 0;
      finalize_seed(game_opts, game_seed, seed);
      return cmd_game(game_opts, game_eps, game_adversary, game_beta, game_trials, seed);
    }
    if (proc->parsed()) {
      std::uint64_t seed = proc_seed_opt->count() > 0 ? proc_seed : env_seed();
      return cmd_process(proc_eps, proc_sched, proc_steps, proc_start, proc_scope,
                         proc_trace, proc_trace_slots, proc_trace_every, seed);
    }
    if (cmp->parsed()) {
      if (!cmp_opts.config_path.empty()) cmp_binder.apply(cmp_opts.config_path);
      std::uint64_t seed = 0;
      finalize_seed(cmp_opts, cmp_seed, seed);
      return cmd_compare(cmp_opts, cmp_eps, cmp_trials, cmp_threads, cmp_out, seed);
    }
    if (verify->parsed()) {
      const std::uint64_t seed =
          verify_seed_opt->count() > 0 ? verify_seed : env_seed();
      return cmd_verify(seed, verify_suites);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const eqboost::ScheduleInfeasibleError& e) {
    std::cerr << "error: " << e.what()
              << " (pass --budget to execute a Theory-mode schedule)\n";
    return 3;
  } catch (const eqboost::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
