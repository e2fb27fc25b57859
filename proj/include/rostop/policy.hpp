#ifndef ROSTOP_POLICY_HPP
#define ROSTOP_POLICY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rostop/instance.hpp"
#include "rostop/paths.hpp"

namespace rostop {

/// Per-path inner minima of the integer program:
///   term[i] = min { G[i][t] : t <= sigma[i], some j with sigma[j] == t meets i at t }.
/// t = sigma[i] always qualifies through j = i, so every term is attained.
std::vector<double> policy_path_terms(const RobustInstance& instance, const SigmaPolicy& policy);

/// (1/N) * sum of policy_path_terms.
double policy_objective(const RobustInstance& instance, const SigmaPolicy& policy);

/// Markovian stopping rule whose period-t stopping region is the union of the
/// boxes of radius epsilon around x^i_t over paths with sigma[i] == t.
class StoppingRule {
 public:
  StoppingRule() = default;
  StoppingRule(std::size_t horizon, std::size_t state_dim, double epsilon);

  /// Adds the box around `center` to the stopping region of period t.
  void add_center(std::size_t t, std::size_t path_id, std::span<const double> center);

  std::size_t horizon() const { return centers_.size(); }
  std::size_t state_dim() const { return state_dim_; }
  double epsilon() const { return epsilon_; }

  /// Paths whose boxes form the period-t region, with their centers.
  const std::vector<std::size_t>& path_ids(std::size_t t) const { return path_ids_[t]; }
  std::span<const double> center(std::size_t t, std::size_t k) const
  {
    return {centers_[t].data() + k * state_dim_, state_dim_};
  }
  std::size_t center_count(std::size_t t) const { return path_ids_[t].size(); }

  /// True iff ||y - c||_inf <= epsilon for some center c of period t.
  bool stop(std::size_t t, std::span<const double> y) const;

 private:
  void finalize(std::size_t t);

  std::size_t state_dim_ = 1;
  double epsilon_ = 0.0;
  std::vector<std::vector<double>> centers_;
  std::vector<std::vector<std::size_t>> path_ids_;
  std::vector<std::vector<double>> sorted_first_;  // sorted first coordinates, for d == 1 lookups

  friend StoppingRule materialize_policy(const RobustInstance&, const SigmaPolicy&);
};

StoppingRule materialize_policy(const RobustInstance& instance, const SigmaPolicy& policy);

/// First period whose region contains the path's state; nullopt = never stops
/// (reward 0). `path` is a T x d row-major block.
std::optional<std::size_t> apply_policy(const StoppingRule& rule, std::span<const double> path);

/// Mean realized reward G[i][tau_i] over the test paths (0 when tau_i is infinite).
MeanEstimate evaluate_policy(const StoppingRule& rule, const SamplePathSet& test, const RewardMatrix& rewards);

/// Realized per-path rewards behind evaluate_policy.
std::vector<double> realized_rewards(const StoppingRule& rule, const SamplePathSet& test, const RewardMatrix& rewards);

}  // namespace rostop

#endif  // ROSTOP_POLICY_HPP
