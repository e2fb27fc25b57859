#ifndef ROSTOP_EXACT_HPP
#define ROSTOP_EXACT_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "rostop/instance.hpp"
#include "rostop/paths.hpp"

namespace rostop {

struct ExactSolution {
  SigmaPolicy sigma;
  double value = 0.0;
  bool proved_optimal = false;
  std::size_t nodes_explored = 0;
};

inline constexpr std::uint64_t default_enumeration_cap = 1'000'000;
inline constexpr std::size_t unlimited_nodes = std::numeric_limits<std::size_t>::max();

/// Evaluates every sigma in {1..T}^N; ties go to the lexicographically
/// smallest sigma. Refuses (ErrorKind::refusal) when T^N exceeds `cap`.
ExactSolution solve_enumeration(const RobustInstance& instance, std::uint64_t cap = default_enumeration_cap);

/// Depth-first branch-and-bound over sigma, warm-started from the heuristic.
/// Every explored node, the root included, counts against `node_budget`;
/// with budget 0 the heuristic incumbent is returned unproved.
ExactSolution solve_bnb(const RobustInstance& instance, std::size_t node_budget = unlimited_nodes);

/// Bound at the root of the search: (1/N) sum_i max_t G[i][t].
double bnb_root_bound(const RobustInstance& instance);

/// Writes the linearized bilinear model in CPLEX LP format. Variables are
/// named b_i_t, w_i_t_l and f_i_t_l with 1-based indices.
void export_milp(const RobustInstance& instance, std::ostream& out);

/// A candidate solution of the zero-one bilinear program.
/// b[i][t] in {0,1}; w[i][t * levels + l] for 0-based level l, where levels
/// is the size of path i's level table.
struct BilinearAssignment {
  std::vector<std::vector<int>> b;
  std::vector<std::vector<double>> w;
};

/// Smallest nonnegative w satisfying every constraint of the program for the
/// given b.
BilinearAssignment bilinear_minimal_completion(const RobustInstance& instance, const std::vector<std::vector<int>>& b);

/// Checks the program's constraints (not the extra valid equalities).
bool bilinear_is_feasible(const RobustInstance& instance, const BilinearAssignment& a, double tol = 1e-12);

/// (1/N) sum_i sum_t sum_{l < level_of[t]} (levels[l+1] - levels[l]) b[i][t] (1 - w[i][t,l]).
double bilinear_objective(const RobustInstance& instance, const BilinearAssignment& a);

/// sigma^i = first t with b^i_t = 1, or the last period if there is none.
SigmaPolicy sigma_from_b(const std::vector<std::vector<int>>& b, std::size_t horizon);

}  // namespace rostop

#endif  // ROSTOP_EXACT_HPP
