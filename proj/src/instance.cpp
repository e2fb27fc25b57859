#include "rostop/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rostop/error.hpp"
#include "rostop/parallel.hpp"

namespace rostop {

int LevelTable::index_of(double value) const
{
  const auto it = std::lower_bound(levels.begin(), levels.end(), value);
  require(it != levels.end() && *it == value, ErrorKind::parameter, "value is not a reward level of this path");
  return static_cast<int>(it - levels.begin());
}

LevelTable build_level_table(std::span<const double> rewards_row)
{
  LevelTable table;
  table.levels.assign(rewards_row.begin(), rewards_row.end());
  table.levels.push_back(0.0);
  std::sort(table.levels.begin(), table.levels.end());
  table.levels.erase(std::unique(table.levels.begin(), table.levels.end()), table.levels.end());
  table.level_of.resize(rewards_row.size());
  for (std::size_t t = 0; t < rewards_row.size(); ++t) { table.level_of[t] = table.index_of(rewards_row[t]); }
  return table;
}

bool RobustInstance::intersects(std::size_t i, std::size_t j, std::size_t t) const
{
  require(i < n_paths() && j < n_paths() && t < horizon(), ErrorKind::parameter, "intersects: index out of range");
  return intersects_unchecked(i, j, t);
}

RobustInstance build_instance(PathTensor states, RewardMatrix rewards, double epsilon)
{
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorKind::parameter, "epsilon must be a nonnegative real");
  require(states.n_paths() >= 1 && states.horizon() >= 1 && states.dim() >= 1, ErrorKind::shape,
          "instance needs at least one path, period and state dimension");
  require(rewards.n_paths() == states.n_paths() && rewards.horizon() == states.horizon(), ErrorKind::shape,
          "rewards and states disagree on N or T");
  rewards.validate();

  RobustInstance inst;
  const std::size_t n = states.n_paths(), horizon = states.horizon(), dim = states.dim();
  inst.epsilon_ = epsilon;
  inst.words_per_row_ = (n + 63) / 64;
  inst.intersect_.assign(horizon * n * inst.words_per_row_, 0);

  const double width = 2.0 * epsilon;
  parallel_for(horizon, [&](std::size_t t) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return states.at(a, t, 0) < states.at(b, t, 0);
    });
    auto set_bit = [&](std::size_t i, std::size_t j) {
      inst.intersect_[(t * n + i) * inst.words_per_row_ + (j >> 6)] |= 1ULL << (j & 63);
    };
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t i = order[a];
      set_bit(i, i);
      const auto xi = states.point(i, t);
      for (std::size_t b = a + 1; b < n; ++b) {
        const std::size_t j = order[b];
        const auto xj = states.point(j, t);
        if (xj[0] - xi[0] > width) { break; }
        bool meet = true;
        for (std::size_t k = 1; k < dim && meet; ++k) { meet = std::abs(xi[k] - xj[k]) <= width; }
        if (meet) {
          set_bit(i, j);
          set_bit(j, i);
        }
      }
    }
  });

  inst.level_tables_.resize(n);
  inst.peak_period_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = rewards.row(i);
    inst.level_tables_[i] = build_level_table(row);
    inst.peak_period_[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }

  inst.states_ = std::move(states);
  inst.rewards_ = std::move(rewards);
  return inst;
}

}  // namespace rostop
