#ifndef ROSTOP_PIPELINE_HPP
#define ROSTOP_PIPELINE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rostop/baseline_ls.hpp"
#include "rostop/error.hpp"
#include "rostop/exact.hpp"
#include "rostop/instance.hpp"
#include "rostop/paths.hpp"
#include "rostop/rewards.hpp"
#include "rostop/scenarios.hpp"

namespace rostop {

enum class ProcessKind { bump, gbm, threepoint, uniform };
enum class SolverKind { heuristic, bnb, enumeration };

ProcessKind parse_process(const std::string& name);
SolverKind parse_solver(const std::string& name);
const char* process_name(ProcessKind kind);
const char* solver_name(SolverKind kind);

/// The stochastic process and its reward. Only the parameter block matching
/// `process` is used.
struct ScenarioConfig {
  ProcessKind process = ProcessKind::bump;
  BumpParams bump;
  GbmBarrierParams gbm;
  UniformParams uniform;
};

struct SimulatedSet {
  SamplePathSet paths;
  RewardMatrix rewards;
};

/// n paths of the configured process from the stream keyed by `seed`.
SimulatedSet simulate_scenario(const ScenarioConfig& scenario, std::size_t n, std::uint64_t seed);

struct PipelineConfig {
  ScenarioConfig scenario;
  std::vector<std::size_t> train_sizes{1000};
  std::size_t validation_size = 1000;
  std::size_t test_size = 100000;
  std::vector<double> epsilon_grid{0.0};
  double budget_seconds = std::numeric_limits<double>::infinity();
  SolverKind solver = SolverKind::heuristic;
  std::size_t bnb_node_limit = unlimited_nodes;
  std::uint64_t seed = 1;
  // Optional least-squares baseline on its own training stream.
  std::optional<BasisSpec> ls_basis;
  bool ls_itm_only = false;
  std::size_t ls_train_size = 0;  // 0 = largest training size

  void validate() const;
};

/// Builds a config from parsed key=value pairs; unknown keys are errors.
PipelineConfig pipeline_config_from(const std::map<std::string, std::string>& kv);
/// Reads a key=value file.
PipelineConfig load_pipeline_config(const std::string& path);
/// The scenario part alone. Schedule keys are rejected unless
/// `allow_schedule_keys` is set, in which case they are ignored.
ScenarioConfig scenario_config_from(const std::map<std::string, std::string>& kv, bool allow_schedule_keys = false);

/// Keys accepted by config files.
const std::vector<std::string>& pipeline_config_keys();

struct PipelineRow {
  std::size_t n = 0;
  double epsilon = 0.0;
  std::string solver;
  double objective = 0.0;  // surrogate value for the heuristic, exact value otherwise
  MeanEstimate validation;
  std::optional<MeanEstimate> test;  // filled for the epsilon chosen at this N
  double seconds = 0.0;
};

struct CurvePoint {
  std::size_t n = 0;
  double epsilon = 0.0;
  MeanEstimate validation;
  MeanEstimate test;
};

struct PipelineReport {
  std::vector<PipelineRow> rows;
  std::vector<CurvePoint> curve;  // one entry per completed training size
  std::size_t chosen_n = 0;
  double chosen_epsilon = 0.0;
  SigmaPolicy chosen_sigma;
  MeanEstimate test;
  bool budget_exhausted = false;
  double solve_seconds = 0.0;  // summed over all solves
  double total_seconds = 0.0;
  std::optional<MeanEstimate> ls_test;
  std::string ls_basis;
};

/// Thrown when the budget runs out before any solve finished.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, PipelineReport partial)
    : Error(ErrorKind::budget, what), partial_(std::move(partial))
  {
  }
  const PipelineReport& partial() const { return partial_; }

 private:
  PipelineReport partial_;
};

/// Train / validate / test schedule: validation and test sets are simulated
/// once; each training size gets a fresh training set, every epsilon is solved
/// and scored on the validation set, and the budget is checked after each full
/// epsilon sweep. The last completed size supplies the chosen policy.
PipelineReport run_pipeline(const PipelineConfig& config);

/// (N, chosen epsilon) for every completed training size.
std::vector<std::pair<std::size_t, double>> best_epsilon_curve(const PipelineReport& report);
std::vector<std::pair<std::size_t, double>> best_epsilon_curve(const PipelineConfig& config);

/// Index of the best validation mean (ties to the smallest epsilon).
std::size_t choose_epsilon(const std::vector<double>& epsilons, const std::vector<MeanEstimate>& validation);

struct RobustSolve {
  SigmaPolicy sigma;
  double objective = 0.0;
};

RobustSolve solve_robust(const RobustInstance& instance, SolverKind solver, std::size_t bnb_node_limit);

void write_report_csv(std::ostream& out, const PipelineReport& report);
void write_summary(std::ostream& out, const PipelineConfig& config, const PipelineReport& report);
void write_plot_csv(std::ostream& out, const PipelineReport& report);

/// {0} u {0.01..0.09} u {0.1..0.9} u {1..10}
std::vector<double> barrier_epsilon_grid();

}  // namespace rostop

#endif  // ROSTOP_PIPELINE_HPP
