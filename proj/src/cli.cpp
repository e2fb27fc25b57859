#include "rostop/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "rostop/error.hpp"
#include "rostop/exact.hpp"
#include "rostop/heuristic.hpp"
#include "rostop/io.hpp"
#include "rostop/parallel.hpp"
#include "rostop/pipeline.hpp"
#include "rostop/policy.hpp"
#include "rostop/rewards.hpp"
#include "rostop/testing/oracles.hpp"

namespace rostop {

namespace {

// Short decimal form that always shows a fractional part: 6 -> "6.0".
std::string pretty(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s = buf;
  if (s.find_first_of(".eni") == std::string::npos) { s += ".0"; }
  return s;
}

std::string sigma_text(const SigmaPolicy& p)
{
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) { s += (i ? "," : "") + std::to_string(p.sigma[i] + 1); }
  return s + ")";
}

struct SimulateArgs {
  std::string process, config, out, rewards_out, raw_out;
  std::size_t n = 0;
  std::uint64_t seed = 1;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out)
{
  std::map<std::string, std::string> kv;
  if (!a.config.empty()) {
    auto in = open_input(a.config);
    kv = parse_key_values(in);
  }
  if (!a.process.empty()) { kv["process"] = a.process; }
  const auto scenario = scenario_config_from(kv, true);
  const auto set = simulate_scenario(scenario, a.n, a.seed);
  {
    auto f = open_output(a.out);
    write_paths_csv(f, set.paths.states);
  }
  if (!a.rewards_out.empty()) {
    auto f = open_output(a.rewards_out);
    write_rewards_csv(f, set.rewards);
  }
  if (!a.raw_out.empty()) {
    require(set.paths.raw.has_value(), ErrorKind::configuration, "this process has no raw asset paths");
    auto f = open_output(a.raw_out);
    write_paths_csv(f, *set.paths.raw);
  }
  out << "simulated " << set.paths.n_paths() << " paths of " << set.paths.generator_tag << " (T="
      << set.paths.horizon() << ", d=" << set.paths.state_dim() << ")\n";
  return 0;
}

struct BuildArgs {
  std::string paths, rewards, out;
  double epsilon = 0.0;
};

int cmd_build(const BuildArgs& a, std::ostream& out)
{
  auto pin = open_input(a.paths);
  auto states = read_paths_csv(pin);
  RewardMatrix rewards;
  if (a.rewards.empty()) {
    SamplePathSet set;
    set.states = states;
    rewards = reward_matrix(set, IdentityReward{});
  } else {
    auto rin = open_input(a.rewards);
    rewards = read_rewards_csv(rin);
  }
  const auto instance = build_instance(std::move(states), std::move(rewards), a.epsilon);
  auto f = open_output(a.out, true);
  write_instance(f, instance);
  out << "instance: N=" << instance.n_paths() << " T=" << instance.horizon() << " d=" << instance.state_dim()
      << " epsilon=" << pretty(instance.epsilon()) << "\n";
  return 0;
}

struct SolveArgs {
  std::string instance, method = "heuristic", out, dot;
  std::size_t node_limit = unlimited_nodes;
  std::uint64_t cap = default_enumeration_cap;
};

int cmd_solve(const SolveArgs& a, std::ostream& out)
{
  auto in = open_input(a.instance, true);
  const auto instance = read_instance(in);
  const auto start = std::chrono::steady_clock::now();
  SigmaPolicy sigma;
  std::string extra;
  double objective = 0.0;
  const auto method = parse_solver(a.method);
  if (method == SolverKind::heuristic) {
    SurrogateOptions options;
    options.keep_vacuous = false;
    const auto problem = build_surrogate(instance, options);
    if (!a.dot.empty()) {
      auto f = open_output(a.dot);
      std::vector<std::string> labels;
      for (std::size_t v = 0; v < problem.nodes.size(); ++v) { labels.push_back(problem.label(v)); }
      write_dot(f, problem.closure, labels);
    }
    const auto h = solve_heuristic(instance, problem);
    sigma = h.sigma;
    objective = h.policy_value;
    extra = " surrogate=" + pretty(h.surrogate_value);
  } else if (method == SolverKind::bnb) {
    const auto e = solve_bnb(instance, a.node_limit);
    sigma = e.sigma;
    objective = e.value;
    extra = std::string(" proved=") + (e.proved_optimal ? "yes" : "no") + " nodes=" + std::to_string(e.nodes_explored);
  } else {
    const auto e = solve_enumeration(instance, a.cap);
    sigma = e.sigma;
    objective = e.value;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!a.out.empty()) {
    auto f = open_output(a.out);
    write_sigma_csv(f, sigma);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", seconds);
  out << "sigma=" << sigma_text(sigma) << " objective=" << pretty(objective) << extra << " seconds=" << buf << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string instance, sigma, test, test_rewards, out;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out)
{
  auto iin = open_input(a.instance, true);
  const auto instance = read_instance(iin);
  auto sin = open_input(a.sigma);
  const auto sigma = read_sigma_csv(sin);
  auto tin = open_input(a.test);
  SamplePathSet test;
  test.states = read_paths_csv(tin);
  RewardMatrix rewards;
  if (a.test_rewards.empty()) {
    rewards = reward_matrix(test, IdentityReward{});
  } else {
    auto rin = open_input(a.test_rewards);
    rewards = read_rewards_csv(rin);
  }
  const auto rule = materialize_policy(instance, sigma);
  const auto est = evaluate_policy(rule, test, rewards);
  if (!a.out.empty()) {
    auto f = open_output(a.out);
    f << "mean,std_error,n\n" << format_real(est.mean) << ',' << format_real(est.std_error) << ',' << est.n << '\n';
  }
  out << "mean=" << pretty(est.mean) << " std_error=" << pretty(est.std_error) << " n=" << est.n << "\n";
  return 0;
}

struct PipelineArgs {
  std::string config, out, summary, plot;
};

int cmd_pipeline(const PipelineArgs& a, std::ostream& out)
{
  const auto config = load_pipeline_config(a.config);
  PipelineReport report;
  try {
    report = run_pipeline(config);
  } catch (const BudgetError& e) {
    auto f = open_output(a.out);
    write_report_csv(f, e.partial());
    throw;
  }
  {
    auto f = open_output(a.out);
    write_report_csv(f, report);
  }
  if (!a.plot.empty()) {
    auto f = open_output(a.plot);
    write_plot_csv(f, report);
  }
  if (!a.summary.empty()) {
    auto f = open_output(a.summary);
    write_summary(f, config, report);
  }
  write_summary(out, config, report);
  return 0;
}

struct ExportArgs {
  std::string instance, out;
};

int cmd_export(const ExportArgs& a, std::ostream& out)
{
  auto in = open_input(a.instance, true);
  const auto instance = read_instance(in);
  auto f = open_output(a.out);
  export_milp(instance, f);
  out << "wrote " << a.out << "\n";
  return 0;
}

int cmd_selftest(std::uint64_t seed, std::size_t rounds, std::ostream& out)
{
  const int failures = testing::run_property_suite(out, seed, rounds);
  out << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Robust optimization toolkit for optimal stopping", "rostop"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = ROSTOP_THREADS or all cores)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate sample paths to CSV");
  simulate->add_option("--process", sim.process, "bump | gbm | threepoint | uniform");
  simulate->add_option("--config", sim.config, "key=value file with process parameters");
  simulate->add_option("--n", sim.n, "Number of paths")->required();
  simulate->add_option("--seed", sim.seed, "Stream seed");
  simulate->add_option("--out", sim.out, "Output paths CSV")->required();
  simulate->add_option("--rewards-out", sim.rewards_out, "Also write the reward matrix");
  simulate->add_option("--raw-out", sim.raw_out, "Also write raw asset paths (gbm)");

  BuildArgs bld;
  auto* build = app.add_subcommand("build", "Build a robust instance file");
  build->add_option("--paths", bld.paths, "Paths CSV")->required();
  build->add_option("--rewards", bld.rewards, "Rewards CSV (default: identity reward)");
  build->add_option("--epsilon", bld.epsilon, "Box radius")->required();
  build->add_option("--out", bld.out, "Output instance file")->required();

  SolveArgs slv;
  auto* solve = app.add_subcommand("solve", "Solve a robust instance");
  solve->add_option("--instance", slv.instance, "Instance file")->required();
  solve->add_option("--method", slv.method, "heuristic | bnb | enum");
  solve->add_option("--out", slv.out, "Output sigma CSV");
  solve->add_option("--node-limit", slv.node_limit, "Branch-and-bound node budget");
  solve->add_option("--cap", slv.cap, "Enumeration cap on T^N");
  solve->add_option("--dot", slv.dot, "Write the closure graph in DOT format (heuristic)");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a policy on test paths");
  evaluate->add_option("--instance", ev.instance, "Instance file")->required();
  evaluate->add_option("--sigma", ev.sigma, "Sigma CSV")->required();
  evaluate->add_option("--test", ev.test, "Test paths CSV")->required();
  evaluate->add_option("--test-rewards", ev.test_rewards, "Test rewards CSV (default: identity reward)");
  evaluate->add_option("--out", ev.out, "Output CSV");

  PipelineArgs pl;
  auto* pipeline = app.add_subcommand("pipeline", "Train / validate / test pipeline");
  pipeline->add_option("--config", pl.config, "key=value config")->required();
  pipeline->add_option("--out", pl.out, "Report CSV")->required();
  pipeline->add_option("--summary", pl.summary, "Plain-text summary file");
  pipeline->add_option("--plot-out", pl.plot, "Per-N curve CSV");

  ExportArgs ex;
  auto* export_cmd = app.add_subcommand("export-milp", "Write the mixed-integer model in LP format");
  export_cmd->add_option("--instance", ex.instance, "Instance file")->required();
  export_cmd->add_option("--out", ex.out, "Output LP file")->required();

  std::uint64_t self_seed = 2024;
  std::size_t self_rounds = 50;
  auto* selftest = app.add_subcommand("selftest", "Run the randomized property checks");
  selftest->add_option("--seed", self_seed, "Generator seed");
  selftest->add_option("--rounds", self_rounds, "Random cases per property");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) { return app.exit(e, out, err); }
    std::string msg = e.what();
    for (auto& c : msg) {
      if (c == '\n') { c = ' '; }
    }
    err << "error[usage]: " << msg << "\n";
    return 1;
  }

  try {
    set_thread_count(threads);
    if (*simulate) { return cmd_simulate(sim, out); }
    if (*build) { return cmd_build(bld, out); }
    if (*solve) { return cmd_solve(slv, out); }
    if (*evaluate) { return cmd_evaluate(ev, out); }
    if (*pipeline) { return cmd_pipeline(pl, out); }
    if (*export_cmd) { return cmd_export(ex, out); }
    if (*selftest) { return cmd_selftest(self_seed, self_rounds, out); }
  } catch (const Error& e) {
    err << "error[" << error_kind_name(e.kind()) << "]: " << e.what() << "\n";
    return e.kind() == ErrorKind::refusal ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace rostop
