#include "rostop/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rostop/error.hpp"
#include "rostop/parallel.hpp"

namespace rostop {

namespace {

void check_policy(const RobustInstance& instance, const SigmaPolicy& policy)
{
  require(policy.size() == instance.n_paths(), ErrorKind::shape, "policy length differs from the number of paths");
  policy.validate(instance.horizon());
}

}  // namespace

std::vector<double> policy_path_terms(const RobustInstance& instance, const SigmaPolicy& policy)
{
  check_policy(instance, policy);
  const std::size_t n = instance.n_paths(), horizon = instance.horizon();

  std::vector<std::vector<std::size_t>> stoppers(horizon);
  for (std::size_t j = 0; j < n; ++j) { stoppers[policy.sigma[j]].push_back(j); }

  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto last = static_cast<std::size_t>(policy.sigma[i]);
    double best = instance.reward(i, last);
    for (std::size_t t = 0; t < last; ++t) {
      if (instance.reward(i, t) >= best) { continue; }
      const bool hit = std::any_of(stoppers[t].begin(), stoppers[t].end(),
                                   [&](std::size_t j) { return instance.intersects_unchecked(i, j, t); });
      if (hit) { best = instance.reward(i, t); }
    }
    terms[i] = best;
  }
  return terms;
}

double policy_objective(const RobustInstance& instance, const SigmaPolicy& policy)
{
  const auto terms = policy_path_terms(instance, policy);
  double sum = 0.0;
  for (double v : terms) { sum += v; }
  return sum / static_cast<double>(terms.size());
}

StoppingRule::StoppingRule(std::size_t horizon, std::size_t state_dim, double epsilon)
  : state_dim_(state_dim), epsilon_(epsilon), centers_(horizon), path_ids_(horizon), sorted_first_(horizon)
{
  require(state_dim >= 1, ErrorKind::shape, "stopping rule needs a state dimension of at least one");
  require(epsilon >= 0.0, ErrorKind::parameter, "epsilon must be nonnegative");
}

void StoppingRule::add_center(std::size_t t, std::size_t path_id, std::span<const double> center)
{
  require(t < horizon(), ErrorKind::parameter, "period out of range");
  require(center.size() == state_dim_, ErrorKind::shape, "center has the wrong dimension");
  centers_[t].insert(centers_[t].end(), center.begin(), center.end());
  path_ids_[t].push_back(path_id);
  finalize(t);
}

void StoppingRule::finalize(std::size_t t)
{
  if (state_dim_ != 1) { return; }
  sorted_first_[t] = centers_[t];
  std::sort(sorted_first_[t].begin(), sorted_first_[t].end());
}

bool StoppingRule::stop(std::size_t t, std::span<const double> y) const
{
  if (state_dim_ == 1) {
    // The centers within epsilon of y are contiguous in sorted order, so the
    // nearest center on either side decides.
    const auto& sorted = sorted_first_[t];
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), y[0]);
    if (it != sorted.end() && std::abs(y[0] - *it) <= epsilon_) { return true; }
    return it != sorted.begin() && std::abs(y[0] - *std::prev(it)) <= epsilon_;
  }
  const auto& flat = centers_[t];
  for (std::size_t base = 0; base < flat.size(); base += state_dim_) {
    bool inside = true;
    for (std::size_t k = 0; k < state_dim_ && inside; ++k) { inside = std::abs(y[k] - flat[base + k]) <= epsilon_; }
    if (inside) { return true; }
  }
  return false;
}

StoppingRule materialize_policy(const RobustInstance& instance, const SigmaPolicy& policy)
{
  check_policy(instance, policy);
  StoppingRule rule(instance.horizon(), instance.state_dim(), instance.epsilon());
  for (std::size_t i = 0; i < instance.n_paths(); ++i) {
    const auto t = static_cast<std::size_t>(policy.sigma[i]);
    const auto c = instance.states().point(i, t);
    rule.centers_[t].insert(rule.centers_[t].end(), c.begin(), c.end());
    rule.path_ids_[t].push_back(i);
  }
  for (std::size_t t = 0; t < rule.horizon(); ++t) { rule.finalize(t); }
  return rule;
}

std::optional<std::size_t> apply_policy(const StoppingRule& rule, std::span<const double> path)
{
  const std::size_t d = rule.state_dim();
  require(path.size() == rule.horizon() * d, ErrorKind::shape, "path does not match the stopping rule");
  for (std::size_t t = 0; t < rule.horizon(); ++t) {
    if (rule.stop(t, path.subspan(t * d, d))) { return t; }
  }
  return std::nullopt;
}

std::vector<double> realized_rewards(const StoppingRule& rule, const SamplePathSet& test, const RewardMatrix& rewards)
{
  require(test.n_paths() >= 1, ErrorKind::parameter, "empty test set");
  require(rewards.n_paths() == test.n_paths() && rewards.horizon() == test.horizon(), ErrorKind::shape,
          "rewards do not correspond to the test set");
  require(test.horizon() == rule.horizon() && test.state_dim() == rule.state_dim(), ErrorKind::shape,
          "test paths do not match the stopping rule");
  std::vector<double> realized(test.n_paths(), 0.0);
  parallel_for(test.n_paths(), [&](std::size_t i) {
    const auto tau = apply_policy(rule, test.states.path(i));
    realized[i] = tau ? rewards.at(i, *tau) : 0.0;
  });
  return realized;
}

MeanEstimate evaluate_policy(const StoppingRule& rule, const SamplePathSet& test, const RewardMatrix& rewards)
{
  const auto realized = realized_rewards(rule, test, rewards);
  return mean_estimate(realized);
}

}  // namespace rostop
