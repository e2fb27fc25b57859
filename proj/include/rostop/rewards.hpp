#ifndef ROSTOP_REWARDS_HPP
#define ROSTOP_REWARDS_HPP

#include <cstddef>
#include <functional>
#include <variant>

#include "rostop/paths.hpp"

namespace rostop {

/// g(t, x) = x_t for one-dimensional states.
struct IdentityReward {};

/// Discretely monitored knock-out call on the maximum of the raw asset
/// prices. Exercise opportunity t (1-based) sits at calendar time lambda*t
/// with lambda = years / T; the barrier there is barrier * exp(growth*lambda*t).
struct BarrierCallReward {
  double years = 3.0;
  double rate = 0.05;
  double strike = 100.0;
  double barrier = 150.0;
  double barrier_growth = 0.25;

  double lambda(std::size_t horizon) const { return years / static_cast<double>(horizon); }
  /// Barrier level at 0-based period t.
  double barrier_at(std::size_t t, std::size_t horizon) const;
  double discount_at(std::size_t t, std::size_t horizon) const;
};

/// Precomputed rewards supplied as a table (must match the path set's shape).
struct TableReward {
  RewardMatrix values;
};

/// In-process hook: reward(paths, i, t) for 0-based path i and period t.
struct CustomReward {
  std::function<double(const SamplePathSet&, std::size_t, std::size_t)> reward;
};

using RewardSpec = std::variant<IdentityReward, BarrierCallReward, TableReward, CustomReward>;

/// G[i][t] = g(t, x^i) for every path and period.
RewardMatrix reward_matrix(const SamplePathSet& paths, const RewardSpec& spec);

/// Knock-out indicator q[i][t] (1 once the running maximum price has crossed
/// the barrier at some s <= t). Requires raw paths.
RewardMatrix knocked_out_indicator(const SamplePathSet& paths, const BarrierCallReward& spec);

}  // namespace rostop

#endif  // ROSTOP_REWARDS_HPP
