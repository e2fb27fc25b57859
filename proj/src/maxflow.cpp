#include "rostop/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rostop/error.hpp"

namespace rostop {

namespace {

// Residual network in compressed adjacency form. Edge 2k is arc k, edge 2k+1
// its reverse; `slot` maps an edge id to its position in the adjacency arrays.
class Residual {
 public:
  explicit Residual(const FlowGraph& g) : n_(g.node_count), first_(g.node_count + 1, 0)
  {
    const std::size_t m = g.arcs.size();
    for (const auto& a : g.arcs) {
      ++first_[a.from + 1];
      ++first_[a.to + 1];
    }
    for (std::size_t v = 0; v < n_; ++v) { first_[v + 1] += first_[v]; }
    head_.resize(2 * m);
    cap_.resize(2 * m);
    mate_.resize(2 * m);
    slot_.resize(2 * m);
    std::vector<std::size_t> fill(first_.begin(), first_.end() - 1);
    for (std::size_t k = 0; k < m; ++k) {
      const auto& a = g.arcs[k];
      const std::size_t fwd = fill[a.from]++, bwd = fill[a.to]++;
      head_[fwd] = a.to;
      cap_[fwd] = a.capacity;
      head_[bwd] = a.from;
      cap_[bwd] = 0.0;
      mate_[fwd] = bwd;
      mate_[bwd] = fwd;
      slot_[2 * k] = fwd;
      slot_[2 * k + 1] = bwd;
    }
  }

  double run(std::size_t s, std::size_t t, double tol)
  {
    tol_ = tol;
    double total = 0.0;
    level_.assign(n_, -1);
    cursor_.assign(n_, 0);
    while (bfs(s, t)) { total += blocking_flow(s, t); }
    return total;
  }

  std::vector<bool> reachable(std::size_t s) const
  {
    std::vector<bool> seen(n_, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t e = first_[u]; e < first_[u + 1]; ++e) {
        if (cap_[e] > tol_ && !seen[head_[e]]) {
          seen[head_[e]] = true;
          stack.push_back(head_[e]);
        }
      }
    }
    return seen;
  }

  double residual_of_arc(std::size_t k) const { return cap_[slot_[2 * k]]; }

 private:
  bool bfs(std::size_t s, std::size_t t)
  {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::size_t> queue{s};
    level_[s] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t u = queue[q];
      for (std::size_t e = first_[u]; e < first_[u + 1]; ++e) {
        const std::size_t v = head_[e];
        if (cap_[e] > tol_ && level_[v] < 0) {
          level_[v] = level_[u] + 1;
          queue.push_back(v);
        }
      }
    }
    return level_[t] >= 0;
  }

  double blocking_flow(std::size_t s, std::size_t t)
  {
    for (std::size_t v = 0; v < n_; ++v) { cursor_[v] = first_[v]; }
    double pushed = 0.0;
    std::vector<std::size_t> path;  // edges from s to the current node
    std::size_t u = s;
    while (true) {
      if (u == t) {
        double bottleneck = std::numeric_limits<double>::infinity();
        for (std::size_t e : path) { bottleneck = std::min(bottleneck, cap_[e]); }
        std::size_t cut = path.size();
        for (std::size_t k = 0; k < path.size(); ++k) {
          const std::size_t e = path[k];
          cap_[e] -= bottleneck;
          cap_[mate_[e]] += bottleneck;
          if (cap_[e] <= tol_ && cut == path.size()) { cut = k; }
        }
        pushed += bottleneck;
        // Retreat to the tail of the first saturated edge.
        path.resize(cut);
        u = path.empty() ? s : head_[path.back()];
        continue;
      }
      bool advanced = false;
      for (std::size_t& e = cursor_[u]; e < first_[u + 1]; ++e) {
        const std::size_t v = head_[e];
        if (cap_[e] > tol_ && level_[v] == level_[u] + 1) {
          path.push_back(e);
          u = v;
          advanced = true;
          break;
        }
      }
      if (advanced) { continue; }
      level_[u] = -1;  // dead end for this phase
      if (path.empty()) { break; }
      const std::size_t e = path.back();
      path.pop_back();
      u = head_[mate_[e]];
      ++cursor_[u];
    }
    return pushed;
  }

  std::size_t n_;
  std::vector<std::size_t> first_, head_, mate_, slot_, cursor_;
  std::vector<double> cap_;
  std::vector<int> level_;
  double tol_ = 0.0;
};

}  // namespace

MaxFlowResult max_flow(const FlowGraph& graph, double tolerance)
{
  const std::size_t n = graph.node_count;
  require(graph.source < n && graph.sink < n, ErrorKind::parameter, "source or sink out of range");
  require(graph.source != graph.sink, ErrorKind::parameter, "source and sink must differ");
  double largest = 0.0;
  for (const auto& a : graph.arcs) {
    require(a.from < n && a.to < n, ErrorKind::parameter, "arc endpoint out of range");
    require(std::isfinite(a.capacity) && a.capacity >= 0.0, ErrorKind::parameter,
            "capacities must be finite and nonnegative");
    largest = std::max(largest, a.capacity);
  }
  if (tolerance < 0.0) { tolerance = 1e-12 * largest; }

  Residual residual(graph);
  MaxFlowResult out;
  out.value = residual.run(graph.source, graph.sink, tolerance);
  out.source_side = residual.reachable(graph.source);
  out.flows.resize(graph.arcs.size());
  for (std::size_t k = 0; k < graph.arcs.size(); ++k) {
    out.flows[k] = std::max(0.0, graph.arcs[k].capacity - residual.residual_of_arc(k));
  }
  return out;
}

double closure_weight(const ClosureProblem& problem, const std::vector<bool>& selected)
{
  double w = problem.offset;
  for (std::size_t v = 0; v < problem.node_count(); ++v) {
    if (selected[v]) { w += problem.weights[v]; }
  }
  return w;
}

bool is_closed(const ClosureProblem& problem, const std::vector<bool>& selected)
{
  return std::all_of(problem.arcs.begin(), problem.arcs.end(),
                     [&](const auto& a) { return !selected[a.first] || selected[a.second]; });
}

ClosureResult maximal_closure(const ClosureProblem& problem)
{
  const std::size_t n = problem.node_count();
  double total = 0.0, largest = 0.0;
  for (double w : problem.weights) {
    require(std::isfinite(w), ErrorKind::parameter, "closure weights must be finite");
    total += std::abs(w);
    largest = std::max(largest, std::abs(w));
  }
  for (const auto& [u, v] : problem.arcs) {
    require(u < n && v < n, ErrorKind::parameter, "closure arc references a missing node");
  }

  // Precedence arcs must never be cut; anything above the total weight will do.
  const double infinite = total + 1.0;
  FlowGraph g;
  g.node_count = n + 2;
  g.source = n;
  g.sink = n + 1;
  g.arcs.reserve(n + problem.arcs.size());
  for (std::size_t v = 0; v < n; ++v) {
    const double w = problem.weights[v];
    if (w > 0.0) {
      g.add_arc(g.source, v, w);
    } else if (w < 0.0) {
      g.add_arc(v, g.sink, -w);
    }
  }
  for (const auto& [u, v] : problem.arcs) { g.add_arc(u, v, infinite); }

  const auto flow = max_flow(g, 1e-12 * std::max(largest, 1e-300));
  ClosureResult out;
  out.in_closure.assign(flow.source_side.begin(), flow.source_side.begin() + static_cast<std::ptrdiff_t>(n));
  out.weight = closure_weight(problem, out.in_closure);
  return out;
}

void write_dot(std::ostream& out, const ClosureProblem& problem, const std::vector<std::string>& labels)
{
  out << "digraph closure {\n";
  out << "  // offset " << problem.offset << "\n";
  for (std::size_t v = 0; v < problem.node_count(); ++v) {
    out << "  n" << v << " [label=\"" << (v < labels.size() ? labels[v] : std::to_string(v)) << "\\n"
        << problem.weights[v] << "\"];\n";
  }
  for (const auto& [u, v] : problem.arcs) { out << "  n" << u << " -> n" << v << ";\n"; }
  out << "}\n";
}

}  // namespace rostop
