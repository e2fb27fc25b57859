#include "rostop/heuristic.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>

#include "rostop/error.hpp"
#include "rostop/policy.hpp"

namespace rostop {

long SurrogateProblem::level_node(std::size_t path, std::size_t period, std::size_t level) const
{
  if (path >= level_nodes.size()) { return -1; }
  const auto& row = level_nodes[path];
  const std::size_t levels = row.size() / 2;
  if (level >= levels) { return -1; }
  const auto ts = static_cast<std::size_t>(peak_period[path]);
  if (period == ts) { return row[level]; }
  if (period + 1 == horizon) { return row[levels + level]; }
  return -1;
}

std::string SurrogateProblem::label(std::size_t node) const
{
  const auto& d = nodes.at(node);
  const auto p = std::to_string(d.path + 1), t = std::to_string(d.period + 1);
  switch (d.kind) {
    case SurrogateNode::Kind::stop: return "b" + p + "_" + t;
    case SurrogateNode::Kind::level: return "w" + p + "_" + t + "," + std::to_string(d.level + 1);
    case SurrogateNode::Kind::hub: return "hub" + t;
  }
  return {};
}

SurrogateProblem build_surrogate(const RobustInstance& instance, const SurrogateOptions& options)
{
  const std::size_t n = instance.n_paths(), horizon = instance.horizon(), last = horizon - 1;
  const double inv_n = 1.0 / static_cast<double>(n);

  SurrogateProblem hp;
  hp.horizon = horizon;
  hp.peak_period.resize(n);
  hp.stop_node_of_path.assign(n, -1);
  hp.level_nodes.resize(n);
  auto& cp = hp.closure;

  auto add = [&](double weight, SurrogateNode desc) {
    hp.nodes.push_back(desc);
    return cp.add_node(weight);
  };

  for (std::size_t i = 0; i < n; ++i) {
    const auto ts = static_cast<std::size_t>(instance.peak_period(i));
    hp.peak_period[i] = static_cast<int>(ts);
    cp.offset += instance.reward(i, last) * inv_n;
    if (ts < last) {
      hp.stop_node_of_path[i] =
          static_cast<long>(add(instance.reward(i, ts) * inv_n, {SurrogateNode::Kind::stop, i, ts, 0}));
    }
  }

  // Level nodes that carry objective weight: levels below the reward level of
  // the peak period and of the last period.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& table = instance.level_table(i);
    const auto levels = static_cast<std::size_t>(table.size());
    auto& row = hp.level_nodes[i];
    row.assign(2 * levels, -1);
    const std::size_t ts = hp.peak_period[i];
    for (std::size_t slot = 0; slot < (ts < last ? 2u : 1u); ++slot) {
      const std::size_t t = slot == 0 ? ts : last;
      for (std::size_t l = 0; l < static_cast<std::size_t>(table.level_of[t]); ++l) {
        const double step = table.levels[l + 1] - table.levels[l];
        row[slot * levels + l] = static_cast<long>(add(-step * inv_n, {SurrogateNode::Kind::level, i, t, l}));
      }
    }
  }

  // Node standing for w(i, t, l); weightless ones are created on demand.
  auto target = [&](std::size_t i, std::size_t t, std::size_t l) -> long {
    auto& row = hp.level_nodes[i];
    const std::size_t levels = row.size() / 2;
    const std::size_t slot = t == static_cast<std::size_t>(hp.peak_period[i]) ? 0 : 1;
    long& node = row[slot * levels + l];
    if (node < 0 && options.keep_vacuous) {
      node = static_cast<long>(add(0.0, {SurrogateNode::Kind::level, i, t, l}));
    }
    return node;
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (hp.stop_node_of_path[i] < 0) { continue; }
    const long w = target(i, last, 0);
    if (w >= 0) { cp.add_arc(static_cast<std::size_t>(hp.stop_node_of_path[i]), static_cast<std::size_t>(w)); }
  }

  // Cross-path arcs: stopping j at its peak period before the last constrains every path i whose box
  // meets j's box at that period, at both of i's candidate periods from then on.
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < n; ++j) {
    if (hp.stop_node_of_path[j] >= 0) { order.push_back(j); }
  }
  const auto& states = instance.states();
  auto same_group = [&](std::size_t a, std::size_t b) {
    if (hp.peak_period[a] != hp.peak_period[b]) { return false; }
    const auto pa = states.point(a, hp.peak_period[a]), pb = states.point(b, hp.peak_period[b]);
    return std::equal(pa.begin(), pa.end(), pb.begin());
  };
  if (options.merge_duplicates) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (hp.peak_period[a] != hp.peak_period[b]) { return hp.peak_period[a] < hp.peak_period[b]; }
      const auto pa = states.point(a, hp.peak_period[a]), pb = states.point(b, hp.peak_period[b]);
      return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    });
  }

  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g + 1;
    if (options.merge_duplicates) {
      while (end < order.size() && same_group(order[g], order[end])) { ++end; }
    }
    const std::size_t j = order[g];
    const std::size_t tj = hp.peak_period[j];
    std::size_t source = static_cast<std::size_t>(hp.stop_node_of_path[j]);
    if (end - g > 1) {
      source = add(0.0, {SurrogateNode::Kind::hub, j, tj, 0});
      for (std::size_t k = g; k < end; ++k) {
        cp.add_arc(static_cast<std::size_t>(hp.stop_node_of_path[order[k]]), source);
      }
    }
    const auto row = instance.intersect_row(j, tj);
    for (std::size_t word = 0; word < row.size(); ++word) {
      for (std::uint64_t bits = row[word]; bits != 0; bits &= bits - 1) {
        const std::size_t i = word * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        const auto l = static_cast<std::size_t>(instance.level_table(i).level_of[tj]);
        const std::size_t ts = hp.peak_period[i];
        if (ts >= tj) {
          const long w = target(i, ts, l);
          if (w >= 0) { cp.add_arc(source, static_cast<std::size_t>(w)); }
        }
        if (ts != last) {
          const long w = target(i, last, l);
          if (w >= 0) { cp.add_arc(source, static_cast<std::size_t>(w)); }
        }
      }
    }
    g = end;
  }

  // Monotone chains w(i,t,l) <= w(i,t,l') between consecutive created levels.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = hp.level_nodes[i];
    const std::size_t levels = row.size() / 2;
    for (std::size_t slot = 0; slot < 2; ++slot) {
      long prev = -1;
      for (std::size_t l = 0; l < levels; ++l) {
        const long node = row[slot * levels + l];
        if (node < 0) { continue; }
        if (prev >= 0) { cp.add_arc(static_cast<std::size_t>(prev), static_cast<std::size_t>(node)); }
        prev = node;
      }
    }
  }
  return hp;
}

HeuristicSolution solve_heuristic(const RobustInstance& instance, const SurrogateProblem& problem)
{
  require(problem.stop_node_of_path.size() == instance.n_paths(), ErrorKind::shape,
          "surrogate was built for a different instance");
  const auto closure = maximal_closure(problem.closure);
  const int last = static_cast<int>(instance.horizon()) - 1;

  HeuristicSolution out;
  out.sigma.sigma.resize(instance.n_paths());
  for (std::size_t i = 0; i < instance.n_paths(); ++i) {
    const long b = problem.stop_node_of_path[i];
    const bool early = b >= 0 && closure.in_closure[static_cast<std::size_t>(b)];
    out.sigma.sigma[i] = early || instance.peak_period(i) == last ? instance.peak_period(i) : last;
  }
  out.surrogate_value = closure.weight;
  out.policy_value = policy_objective(instance, out.sigma);
  return out;
}

HeuristicSolution solve_heuristic(const RobustInstance& instance)
{
  SurrogateOptions options;
  options.keep_vacuous = false;
  return solve_heuristic(instance, build_surrogate(instance, options));
}

}  // namespace rostop
