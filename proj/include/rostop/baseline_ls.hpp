#ifndef ROSTOP_BASELINE_LS_HPP
#define ROSTOP_BASELINE_LS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rostop/paths.hpp"
#include "rostop/rewards.hpp"

namespace rostop {

/// Regression features for the least-squares baseline. "Prices" are the raw
/// asset prices when the path set has them and the states otherwise.
struct BasisSpec {
  bool one = false;
  bool prices = false;
  bool prices_ko = false;     // prices * (1 - knocked-out indicator)
  bool ko_indicator = false;  // knocked-out indicator
  bool max_price = false;
  bool payoff = false;        // G[i][t]
  int laguerre_degree = -1;   // L_0..L_k of the (max) state; -1 = none

  bool needs_barrier() const { return prices_ko || ko_indicator; }
  bool empty() const;
  std::string to_string() const;
};

/// Parses a comma-separated list such as "one,prices,laguerre2" (family names:
/// one, prices, pricesKO, KOind, maxprice, payoff, laguerreK with K <= 15).
BasisSpec parse_basis(std::string_view text);

/// Laguerre polynomial L_k(x) by the three-term recurrence.
double laguerre(int k, double x);

struct LsOptions {
  bool itm_only = false;  // regress and stop only where the payoff is positive
  std::optional<BarrierCallReward> barrier;  // required by pricesKO / KOind
};

struct LsPolicy {
  BasisSpec basis;
  LsOptions options;
  std::size_t horizon = 0;
  std::size_t state_dim = 0;
  std::size_t raw_dim = 0;  // 0 when fitted without raw paths
  /// coefficients[t] for t < T - 1; the last period always stops.
  std::vector<std::vector<double>> coefficients;

  std::size_t feature_dim() const;
  /// Fills `out` (length feature_dim()) with the features of one period.
  void features(std::size_t t, std::span<const double> state, std::span<const double> raw, double payoff,
                bool knocked, std::vector<double>& out) const;
};

/// Backward recursion on realized continuation values. Throws a fitting
/// error when a regression stays singular after the ridge fallback.
LsPolicy fit_ls(const SamplePathSet& train, const RewardMatrix& rewards, const BasisSpec& basis,
                const LsOptions& options = {});

/// 0-based stopping period of one path: the first t whose payoff is at least
/// the fitted continuation value, and the last period otherwise. `raw` may be
/// empty when the policy was fitted without raw paths.
std::size_t apply_ls(const LsPolicy& policy, std::span<const double> states, std::span<const double> raw,
                     std::span<const double> path_rewards);

MeanEstimate evaluate_ls(const LsPolicy& policy, const SamplePathSet& test, const RewardMatrix& rewards);

}  // namespace rostop

#endif  // ROSTOP_BASELINE_LS_HPP
