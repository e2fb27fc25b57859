#include "rostop/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "rostop/heuristic.hpp"
#include "rostop/io.hpp"
#include "rostop/parallel.hpp"
#include "rostop/policy.hpp"
#include "rostop/rng.hpp"

namespace rostop {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> split_list(const std::string& text)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(text);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t");
    if (b == std::string::npos) { continue; }
    out.push_back(cell.substr(b, cell.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

double tidy(double v) { return std::round(v * 1e12) / 1e12; }

// Comma-separated reals; an item "a:step:b" expands to a, a+step, ..., b.
std::vector<double> parse_real_list(const std::string& text, const std::string& key)
{
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_real(item, key));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    require(c2 != std::string::npos, ErrorKind::configuration, key + ": ranges are written start:step:stop");
    const double a = parse_real(item.substr(0, c1), key), step = parse_real(item.substr(c1 + 1, c2 - c1 - 1), key),
                 b = parse_real(item.substr(c2 + 1), key);
    require(step > 0.0 && b >= a, ErrorKind::configuration, key + ": range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) { out.push_back(tidy(a + static_cast<double>(k) * step)); }
  }
  require(!out.empty(), ErrorKind::configuration, key + " is empty");
  return out;
}

std::vector<std::size_t> parse_count_list(const std::string& text, const std::string& key)
{
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) { out.push_back(parse_count(item, key)); }
  require(!out.empty(), ErrorKind::configuration, key + " is empty");
  return out;
}

bool parse_bool(const std::string& text, const std::string& key)
{
  if (text == "1" || text == "true" || text == "yes") { return true; }
  if (text == "0" || text == "false" || text == "no") { return false; }
  fail(ErrorKind::configuration, key + " must be true or false");
}

// Wraps number parsing so malformed values surface as configuration errors.
template <class F>
auto config_value(const std::string& key, F&& parse)
{
  try {
    return parse();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) { fail(ErrorKind::configuration, std::string(e.what()) + " (key " + key + ")"); }
    throw;
  }
}

const std::vector<std::string> scenario_keys = {
    "process",      "T",          "delta",       "assets",     "years",       "rate",
    "strike",       "barrier",    "barrier_growth", "initial_price", "volatility", "correlation",
    "rho",          "brownian_scaling"};

const std::vector<std::string> schedule_keys = {
    "train_sizes", "validation_size", "test_size", "epsilon_grid", "budget_seconds", "solver",
    "bnb_node_limit", "seed", "ls_basis", "ls_itm_only", "ls_train_size"};

ScenarioConfig scenario_from(const std::map<std::string, std::string>& kv)
{
  ScenarioConfig s;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  const std::string* process = get("process");
  require(process != nullptr, ErrorKind::configuration, "config needs a 'process' key");
  s.process = parse_process(*process);

  if (const auto* v = get("T")) {
    const std::size_t horizon = config_value("T", [&] { return parse_count(*v, "T"); });
    s.bump.horizon = horizon;
    s.gbm.horizon = horizon;
    s.uniform.horizon = horizon;
  }
  if (const auto* v = get("delta")) { s.bump.delta = config_value("delta", [&] { return parse_count(*v, "delta"); }); }
  auto real = [&](const char* key, double& target) {
    if (const auto* v = get(key)) { target = config_value(key, [&] { return parse_real(*v, key); }); }
  };
  if (const auto* v = get("assets")) { s.gbm.assets = config_value("assets", [&] { return parse_count(*v, "assets"); }); }
  real("years", s.gbm.years);
  real("rate", s.gbm.rate);
  real("strike", s.gbm.strike);
  real("barrier", s.gbm.barrier);
  real("barrier_growth", s.gbm.barrier_growth);
  real("initial_price", s.gbm.initial_price);
  if (const auto* v = get("volatility")) {
    s.gbm.volatilities = config_value("volatility", [&] { return parse_real_list(*v, "volatility"); });
  }
  if (const auto* v = get("correlation")) {
    s.gbm.correlation = config_value("correlation", [&] { return parse_real_list(*v, "correlation"); });
  }
  if (const auto* v = get("rho")) {
    require(get("correlation") == nullptr, ErrorKind::configuration, "give either rho or correlation, not both");
    const double rho = config_value("rho", [&] { return parse_real(*v, "rho"); });
    if (rho != 0.0) {
      const std::size_t d = s.gbm.assets;
      s.gbm.correlation.assign(d * d, rho);
      for (std::size_t a = 0; a < d; ++a) { s.gbm.correlation[a * d + a] = 1.0; }
    }
  }
  if (const auto* v = get("brownian_scaling")) {
    if (*v == "printed") {
      s.gbm.scaling = BrownianScaling::printed;
    } else if (*v == "standard") {
      s.gbm.scaling = BrownianScaling::standard;
    } else {
      fail(ErrorKind::configuration, "brownian_scaling must be 'printed' or 'standard'");
    }
  }
  return s;
}

void check_keys(const std::map<std::string, std::string>& kv, const std::vector<std::string>& allowed)
{
  for (const auto& [key, value] : kv) {
    require(std::find(allowed.begin(), allowed.end(), key) != allowed.end(), ErrorKind::configuration,
            "unknown config key '" + key + "'");
  }
}

}  // namespace

ProcessKind parse_process(const std::string& name)
{
  if (name == "bump") { return ProcessKind::bump; }
  if (name == "gbm") { return ProcessKind::gbm; }
  if (name == "threepoint") { return ProcessKind::threepoint; }
  if (name == "uniform") { return ProcessKind::uniform; }
  fail(ErrorKind::configuration, "unknown process '" + name + "' (bump, gbm, threepoint, uniform)");
}

SolverKind parse_solver(const std::string& name)
{
  if (name == "heuristic") { return SolverKind::heuristic; }
  if (name == "bnb") { return SolverKind::bnb; }
  if (name == "enum" || name == "enumeration") { return SolverKind::enumeration; }
  fail(ErrorKind::configuration, "unknown solver '" + name + "' (heuristic, bnb, enum)");
}

const char* process_name(ProcessKind kind)
{
  switch (kind) {
    case ProcessKind::bump: return "bump";
    case ProcessKind::gbm: return "gbm";
    case ProcessKind::threepoint: return "threepoint";
    case ProcessKind::uniform: return "uniform";
  }
  return "?";
}

const char* solver_name(SolverKind kind)
{
  switch (kind) {
    case SolverKind::heuristic: return "heuristic";
    case SolverKind::bnb: return "bnb";
    case SolverKind::enumeration: return "enum";
  }
  return "?";
}

const std::vector<std::string>& pipeline_config_keys()
{
  static const std::vector<std::string> keys = [] {
    auto k = scenario_keys;
    k.insert(k.end(), schedule_keys.begin(), schedule_keys.end());
    return k;
  }();
  return keys;
}

ScenarioConfig scenario_config_from(const std::map<std::string, std::string>& kv, bool allow_schedule_keys)
{
  check_keys(kv, allow_schedule_keys ? pipeline_config_keys() : scenario_keys);
  return scenario_from(kv);
}

PipelineConfig pipeline_config_from(const std::map<std::string, std::string>& kv)
{
  check_keys(kv, pipeline_config_keys());
  PipelineConfig c;
  c.scenario = scenario_from(kv);
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("train_sizes")) {
    c.train_sizes = config_value("train_sizes", [&] { return parse_count_list(*v, "train_sizes"); });
  }
  if (const auto* v = get("validation_size")) {
    c.validation_size = config_value("validation_size", [&] { return parse_count(*v, "validation_size"); });
  }
  if (const auto* v = get("test_size")) {
    c.test_size = config_value("test_size", [&] { return parse_count(*v, "test_size"); });
  }
  if (const auto* v = get("epsilon_grid")) {
    c.epsilon_grid = config_value("epsilon_grid", [&] { return parse_real_list(*v, "epsilon_grid"); });
  }
  if (const auto* v = get("budget_seconds")) {
    c.budget_seconds = config_value("budget_seconds", [&] { return parse_real(*v, "budget_seconds"); });
  }
  if (const auto* v = get("solver")) { c.solver = parse_solver(*v); }
  if (const auto* v = get("bnb_node_limit")) {
    c.bnb_node_limit = config_value("bnb_node_limit", [&] { return parse_count(*v, "bnb_node_limit"); });
  }
  if (const auto* v = get("seed")) {
    c.seed = config_value("seed", [&] { return static_cast<std::uint64_t>(parse_count(*v, "seed")); });
  }
  if (const auto* v = get("ls_basis")) { c.ls_basis = parse_basis(*v); }
  if (const auto* v = get("ls_itm_only")) { c.ls_itm_only = parse_bool(*v, "ls_itm_only"); }
  if (const auto* v = get("ls_train_size")) {
    c.ls_train_size = config_value("ls_train_size", [&] { return parse_count(*v, "ls_train_size"); });
  }
  c.validate();
  return c;
}

PipelineConfig load_pipeline_config(const std::string& path)
{
  auto in = open_input(path);
  return pipeline_config_from(parse_key_values(in));
}

void PipelineConfig::validate() const
{
  require(!train_sizes.empty() && !epsilon_grid.empty(), ErrorKind::configuration,
          "training sizes and epsilon grid must be non-empty");
  for (std::size_t n : train_sizes) { require(n >= 1, ErrorKind::configuration, "training sizes must be >= 1"); }
  require(validation_size >= 1 && test_size >= 1, ErrorKind::configuration, "validation and test sizes must be >= 1");
  for (double e : epsilon_grid) {
    require(std::isfinite(e) && e >= 0.0, ErrorKind::parameter, "epsilon grid entries must be nonnegative");
  }
  require(!std::isnan(budget_seconds), ErrorKind::configuration, "budget must be a number");
}

SimulatedSet simulate_scenario(const ScenarioConfig& scenario, std::size_t n, std::uint64_t seed)
{
  SimulatedSet out;
  switch (scenario.process) {
    case ProcessKind::bump: {
      auto p = scenario.bump;
      p.seed = seed;
      out.paths = simulate_bump(p, n);
      out.rewards = reward_matrix(out.paths, IdentityReward{});
      break;
    }
    case ProcessKind::gbm: {
      auto p = scenario.gbm;
      p.seed = seed;
      auto sample = simulate_gbm_barrier(p, n);
      out.paths = std::move(sample.paths);
      out.rewards = std::move(sample.rewards);
      break;
    }
    case ProcessKind::threepoint: {
      out.paths = simulate_threepoint({seed}, n);
      out.rewards = reward_matrix(out.paths, IdentityReward{});
      break;
    }
    case ProcessKind::uniform: {
      auto p = scenario.uniform;
      p.seed = seed;
      out.paths = simulate_uniform(p, n);
      out.rewards = reward_matrix(out.paths, IdentityReward{});
      break;
    }
  }
  return out;
}

RobustSolve solve_robust(const RobustInstance& instance, SolverKind solver, std::size_t bnb_node_limit)
{
  switch (solver) {
    case SolverKind::heuristic: {
      auto h = solve_heuristic(instance);
      return {std::move(h.sigma), h.surrogate_value};
    }
    case SolverKind::bnb: {
      auto e = solve_bnb(instance, bnb_node_limit);
      return {std::move(e.sigma), e.value};
    }
    case SolverKind::enumeration: {
      auto e = solve_enumeration(instance);
      return {std::move(e.sigma), e.value};
    }
  }
  return {};
}

std::size_t choose_epsilon(const std::vector<double>& epsilons, const std::vector<MeanEstimate>& validation)
{
  std::size_t best = 0;
  for (std::size_t k = 1; k < epsilons.size(); ++k) {
    const double a = validation[k].mean, b = validation[best].mean;
    if (a > b || (a == b && epsilons[k] < epsilons[best])) { best = k; }
  }
  return best;
}

PipelineReport run_pipeline(const PipelineConfig& config)
{
  config.validate();
  const auto start = Clock::now();
  PipelineReport report;

  const auto validation = simulate_scenario(config.scenario, config.validation_size, derive_seed(config.seed, "validation"));
  const auto test = simulate_scenario(config.scenario, config.test_size, derive_seed(config.seed, "test"));

  auto sizes = config.train_sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  const auto& grid = config.epsilon_grid;

  double spent = 0.0;  // training simulation, solves and validation scoring
  if (!(config.budget_seconds > 0.0)) {
    report.budget_exhausted = true;
    report.total_seconds = seconds_since(start);
    throw BudgetError("budget of " + format_real(config.budget_seconds) + " s exhausted before any solve completed",
                      report);
  }

  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const auto sweep_start = Clock::now();
    const std::size_t n = sizes[k];
    const auto train = simulate_scenario(config.scenario, n, derive_seed(config.seed, "train", k));

    std::vector<SigmaPolicy> sigmas(grid.size());
    std::vector<MeanEstimate> scores(grid.size());
    std::vector<double> objective(grid.size()), elapsed(grid.size());
    std::vector<StoppingRule> rules(grid.size());
    parallel_for(grid.size(), [&](std::size_t e) {
      const auto solve_start = Clock::now();
      const auto instance = build_instance(train.paths.states, train.rewards, grid[e]);
      auto solved = solve_robust(instance, config.solver, config.bnb_node_limit);
      elapsed[e] = seconds_since(solve_start);
      objective[e] = solved.objective;
      rules[e] = materialize_policy(instance, solved.sigma);
      scores[e] = evaluate_policy(rules[e], validation.paths, validation.rewards);
      sigmas[e] = std::move(solved.sigma);
    });

    const std::size_t best = choose_epsilon(grid, scores);
    const auto test_score = evaluate_policy(rules[best], test.paths, test.rewards);

    for (std::size_t e = 0; e < grid.size(); ++e) {
      PipelineRow row;
      row.n = n;
      row.epsilon = grid[e];
      row.solver = solver_name(config.solver);
      row.objective = objective[e];
      row.validation = scores[e];
      if (e == best) { row.test = test_score; }
      row.seconds = elapsed[e];
      report.solve_seconds += elapsed[e];
      report.rows.push_back(std::move(row));
    }
    report.curve.push_back({n, grid[best], scores[best], test_score});
    report.chosen_n = n;
    report.chosen_epsilon = grid[best];
    report.chosen_sigma = std::move(sigmas[best]);
    report.test = test_score;

    spent += seconds_since(sweep_start);
    if (spent >= config.budget_seconds && k + 1 < sizes.size()) {
      report.budget_exhausted = true;
      break;
    }
  }

  if (config.ls_basis) {
    const std::size_t n = config.ls_train_size > 0 ? config.ls_train_size : sizes.back();
    const auto train = simulate_scenario(config.scenario, n, derive_seed(config.seed, "ls-train"));
    LsOptions options;
    options.itm_only = config.ls_itm_only;
    if (config.scenario.process == ProcessKind::gbm) { options.barrier = config.scenario.gbm.reward(); }
    const auto policy = fit_ls(train.paths, train.rewards, *config.ls_basis, options);
    report.ls_test = evaluate_ls(policy, test.paths, test.rewards);
    report.ls_basis = config.ls_basis->to_string();
  }

  report.total_seconds = seconds_since(start);
  return report;
}

std::vector<std::pair<std::size_t, double>> best_epsilon_curve(const PipelineReport& report)
{
  std::vector<std::pair<std::size_t, double>> out;
  for (const auto& p : report.curve) { out.emplace_back(p.n, p.epsilon); }
  return out;
}

std::vector<std::pair<std::size_t, double>> best_epsilon_curve(const PipelineConfig& config)
{
  return best_epsilon_curve(run_pipeline(config));
}

void write_report_csv(std::ostream& out, const PipelineReport& report)
{
  out << "N,epsilon,solver,objective,val_mean,val_se,test_mean,test_se,seconds\n";
  for (const auto& r : report.rows) {
    out << r.n << ',' << format_real(r.epsilon) << ',' << r.solver << ',' << format_real(r.objective) << ','
        << format_real(r.validation.mean) << ',' << format_real(r.validation.std_error) << ',';
    if (r.test) {
      out << format_real(r.test->mean) << ',' << format_real(r.test->std_error);
    } else {
      out << ',';
    }
    out << ',' << format_real(r.seconds) << '\n';
  }
}

void write_plot_csv(std::ostream& out, const PipelineReport& report)
{
  out << "N,epsilon,val_mean,val_se,test_mean,test_se\n";
  for (const auto& p : report.curve) {
    out << p.n << ',' << format_real(p.epsilon) << ',' << format_real(p.validation.mean) << ','
        << format_real(p.validation.std_error) << ',' << format_real(p.test.mean) << ','
        << format_real(p.test.std_error) << '\n';
  }
}

void write_summary(std::ostream& out, const PipelineConfig& config, const PipelineReport& report)
{
  char buf[256];
  out << "process: " << process_name(config.scenario.process) << "\n";
  out << "solver: " << solver_name(config.solver) << "\n";
  out << "validation paths: " << config.validation_size << ", test paths: " << config.test_size << "\n";
  for (const auto& p : report.curve) {
    std::snprintf(buf, sizeof buf, "N=%zu  epsilon=%g  validation %.4f (%.4f)  test %.4f (%.4f)\n", p.n, p.epsilon,
                  p.validation.mean, p.validation.std_error, p.test.mean, p.test.std_error);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "chosen: N=%zu epsilon=%g test mean %.4f (se %.4f)\n", report.chosen_n,
                report.chosen_epsilon, report.test.mean, report.test.std_error);
  out << buf;
  if (report.ls_test) {
    std::snprintf(buf, sizeof buf, "least squares [%s]: test mean %.4f (se %.4f)\n", report.ls_basis.c_str(),
                  report.ls_test->mean, report.ls_test->std_error);
    out << buf;
  }
  if (report.budget_exhausted) { out << "budget exhausted before the largest training size\n"; }
  std::snprintf(buf, sizeof buf, "solve time %.3f s, total %.3f s\n", report.solve_seconds, report.total_seconds);
  out << buf;
}

std::vector<double> barrier_epsilon_grid()
{
  std::vector<double> grid{0.0};
  for (int k = 1; k <= 9; ++k) { grid.push_back(k / 100.0); }
  for (int k = 1; k <= 9; ++k) { grid.push_back(k / 10.0); }
  for (int k = 1; k <= 10; ++k) { grid.push_back(static_cast<double>(k)); }
  return grid;
}

}  // namespace rostop
