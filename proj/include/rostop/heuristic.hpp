#ifndef ROSTOP_HEURISTIC_HPP
#define ROSTOP_HEURISTIC_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "rostop/instance.hpp"
#include "rostop/maxflow.hpp"
#include "rostop/paths.hpp"

namespace rostop {

struct SurrogateOptions {
  // Arcs b -> w(i, t, l) at or above the reward level of period t point at
  // weightless nodes whose whole upward chain is weightless too; they never
  // change the optimal closure.
  bool keep_vacuous = true;
  // Paths with the same argmax period and the same state there send their
  // cross-path arcs through one shared zero-weight node.
  bool merge_duplicates = true;
};

/// What a closure node stands for. Periods and levels are 0-based.
struct SurrogateNode {
  enum class Kind { stop, level, hub };
  Kind kind = Kind::stop;
  std::size_t path = 0;
  std::size_t period = 0;
  std::size_t level = 0;
};

struct SurrogateProblem {
  ClosureProblem closure;
  std::vector<SurrogateNode> nodes;
  /// Index of the stop node of path i, or -1 when its peak period is the last period.
  std::vector<long> stop_node_of_path;

  std::size_t horizon = 0;
  std::vector<int> peak_period;
  /// level_nodes[i][slot * levels + l] for slot 0 = the peak period, slot 1 =
  /// the last period (unused when the peak is the last period); -1 = not created.
  std::vector<std::vector<long>> level_nodes;

  /// Node index of w(i, t, l), or -1 if that node was not created.
  long level_node(std::size_t path, std::size_t period, std::size_t level) const;
  std::string label(std::size_t node) const;
};

SurrogateProblem build_surrogate(const RobustInstance& instance, const SurrogateOptions& options = {});

struct HeuristicSolution {
  SigmaPolicy sigma;
  double surrogate_value = 0.0;
  double policy_value = 0.0;
};

/// Solves the linear surrogate as a maximal closure and lifts it to a policy:
/// sigma^i = peak period of path i if path i's stop node is selected (or the peak is the last
/// period), and the last period otherwise.
HeuristicSolution solve_heuristic(const RobustInstance& instance);

/// Same, on an already built surrogate.
HeuristicSolution solve_heuristic(const RobustInstance& instance, const SurrogateProblem& problem);

}  // namespace rostop

#endif  // ROSTOP_HEURISTIC_HPP
