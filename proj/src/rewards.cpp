#include "rostop/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rostop/error.hpp"

namespace rostop {

double BarrierCallReward::barrier_at(std::size_t t, std::size_t horizon) const
{
  return barrier * std::exp(barrier_growth * lambda(horizon) * static_cast<double>(t + 1));
}

double BarrierCallReward::discount_at(std::size_t t, std::size_t horizon) const
{
  return std::exp(-rate * lambda(horizon) * static_cast<double>(t + 1));
}

namespace {

double max_price(const PathTensor& raw, std::size_t i, std::size_t t)
{
  const auto p = raw.point(i, t);
  return *std::max_element(p.begin(), p.end());
}

void check_barrier_spec(const SamplePathSet& paths, const BarrierCallReward& spec)
{
  require(paths.raw.has_value(), ErrorKind::configuration, "barrier reward needs the raw asset paths");
  require(paths.raw->dim() >= 1, ErrorKind::shape, "raw asset paths have no assets");
  require(spec.years > 0.0 && spec.barrier > 0.0 && spec.strike >= 0.0 && spec.rate >= 0.0 && spec.rate < 1.0,
          ErrorKind::parameter, "barrier reward parameters out of range");
}

}  // namespace

RewardMatrix knocked_out_indicator(const SamplePathSet& paths, const BarrierCallReward& spec)
{
  check_barrier_spec(paths, spec);
  const std::size_t n = paths.n_paths(), horizon = paths.horizon();
  RewardMatrix q(n, horizon);
  for (std::size_t i = 0; i < n; ++i) {
    bool knocked = false;
    for (std::size_t t = 0; t < horizon; ++t) {
      knocked = knocked || max_price(*paths.raw, i, t) > spec.barrier_at(t, horizon);
      q.at(i, t) = knocked ? 1.0 : 0.0;
    }
  }
  return q;
}

RewardMatrix reward_matrix(const SamplePathSet& paths, const RewardSpec& spec)
{
  const std::size_t n = paths.n_paths(), horizon = paths.horizon();
  RewardMatrix g(n, horizon);

  if (std::holds_alternative<IdentityReward>(spec)) {
    require(paths.state_dim() == 1, ErrorKind::configuration, "identity reward needs one-dimensional states");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < horizon; ++t) { g.at(i, t) = paths.states.at(i, t, 0); }
    }
  } else if (const auto* barrier = std::get_if<BarrierCallReward>(&spec)) {
    check_barrier_spec(paths, *barrier);
    for (std::size_t i = 0; i < n; ++i) {
      bool alive = true;
      for (std::size_t t = 0; t < horizon; ++t) {
        const double top = max_price(*paths.raw, i, t);
        alive = alive && top <= barrier->barrier_at(t, horizon);
        g.at(i, t) = alive ? barrier->discount_at(t, horizon) * std::max(0.0, top - barrier->strike) : 0.0;
      }
    }
  } else if (const auto* table = std::get_if<TableReward>(&spec)) {
    require(table->values.n_paths() == n && table->values.horizon() == horizon, ErrorKind::shape,
            "reward table does not match the path set");
    g = table->values;
  } else {
    const auto& custom = std::get<CustomReward>(spec);
    require(static_cast<bool>(custom.reward), ErrorKind::configuration, "custom reward has no callback");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < horizon; ++t) { g.at(i, t) = custom.reward(paths, i, t); }
    }
  }

  try {
    g.validate();
  } catch (const Error& e) {
    fail(ErrorKind::parameter, std::string("invalid reward specification: ") + e.what());
  }
  return g;
}

}  // namespace rostop
