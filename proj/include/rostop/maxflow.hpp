#ifndef ROSTOP_MAXFLOW_HPP
#define ROSTOP_MAXFLOW_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rostop {

struct FlowArc {
  std::size_t from = 0;
  std::size_t to = 0;
  double capacity = 0.0;
};

/// Directed graph with real, nonnegative capacities. Parallel arcs are allowed.
struct FlowGraph {
  std::size_t node_count = 0;
  std::size_t source = 0;
  std::size_t sink = 1;
  std::vector<FlowArc> arcs;

  std::size_t add_node() { return node_count++; }
  void add_arc(std::size_t from, std::size_t to, double capacity) { arcs.push_back({from, to, capacity}); }
};

struct MaxFlowResult {
  double value = 0.0;
  std::vector<bool> source_side;  // nodes reachable from the source in the final residual graph
  std::vector<double> flows;      // flow on each arc, in input order
};

/// Dinic's blocking-flow algorithm. Residual capacities at or below
/// `tolerance` count as saturated; a negative tolerance selects
/// 1e-12 * (largest capacity).
MaxFlowResult max_flow(const FlowGraph& graph, double tolerance = -1.0);

/// Node-weighted digraph; an arc (u, v) means u in the closure forces v in.
struct ClosureProblem {
  std::vector<double> weights;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  double offset = 0.0;

  std::size_t add_node(double weight)
  {
    weights.push_back(weight);
    return weights.size() - 1;
  }
  void add_arc(std::size_t from, std::size_t to) { arcs.emplace_back(from, to); }
  std::size_t node_count() const { return weights.size(); }
};

struct ClosureResult {
  std::vector<bool> in_closure;
  double weight = 0.0;  // includes the offset
};

/// Maximum-weight closure via the source/sink min-cut reduction. Among optimal
/// closures the smallest one is returned, so zero-weight ties are excluded.
ClosureResult maximal_closure(const ClosureProblem& problem);

/// Sum of the selected weights plus the offset.
double closure_weight(const ClosureProblem& problem, const std::vector<bool>& selected);

/// True iff no arc leaves the selected set.
bool is_closed(const ClosureProblem& problem, const std::vector<bool>& selected);

/// Graphviz dump for debugging; labels may be empty (node indices are used).
void write_dot(std::ostream& out, const ClosureProblem& problem, const std::vector<std::string>& labels = {});

}  // namespace rostop

#endif  // ROSTOP_MAXFLOW_HPP
