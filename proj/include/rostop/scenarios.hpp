#ifndef ROSTOP_SCENARIOS_HPP
#define ROSTOP_SCENARIOS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rostop/paths.hpp"
#include "rostop/rewards.hpp"

namespace rostop {

/// Uniform noise plus a hidden bump: theta ~ U{1..T-delta} is drawn once per
/// path and x_t = u_t + (2 theta / T) 1{theta <= t <= theta + delta}.
struct BumpParams {
  std::size_t horizon = 50;
  std::size_t delta = 5;
  std::uint64_t seed = 0;
};

/// How the cumulative Gaussian sum W_t enters the GBM exponent.
enum class BrownianScaling {
  printed,   // sigma * lambda * W_t, W_t a sum of t unit normals
  standard,  // sigma * sqrt(lambda) * W_t, i.e. Brownian motion sampled at lambda * t
};

struct GbmBarrierParams {
  std::size_t assets = 8;
  std::size_t horizon = 54;
  double years = 3.0;
  double rate = 0.05;
  double strike = 100.0;
  double barrier = 150.0;
  double barrier_growth = 0.25;
  double initial_price = 100.0;
  std::vector<double> volatilities{0.2};  // one per asset, or a single value shared by all
  std::vector<double> correlation;        // assets x assets row-major; empty = identity
  BrownianScaling scaling = BrownianScaling::printed;
  std::uint64_t seed = 0;

  BarrierCallReward reward() const { return {years, rate, strike, barrier, barrier_growth}; }
};

/// (3,2,1) with probability 2/3, (1,2,3) otherwise.
struct ThreePointParams {
  std::uint64_t seed = 0;
};

/// x_t i.i.d. Uniform[0,1].
struct UniformParams {
  std::size_t horizon = 3;
  std::uint64_t seed = 0;
};

struct GbmSample {
  SamplePathSet paths;  // states = max over assets; raw = all asset prices
  RewardMatrix rewards;
};

SamplePathSet simulate_bump(const BumpParams& params, std::size_t n);
GbmSample simulate_gbm_barrier(const GbmBarrierParams& params, std::size_t n);
SamplePathSet simulate_threepoint(const ThreePointParams& params, std::size_t n);
SamplePathSet simulate_uniform(const UniformParams& params, std::size_t n);

/// Factor F (row-major, dim x dim) with F F^T = correlation. Throws a
/// factorization error unless the matrix is symmetric with unit diagonal and
/// positive semidefinite.
std::vector<double> correlation_factor(const std::vector<double>& correlation, std::size_t dim);

}  // namespace rostop

#endif  // ROSTOP_SCENARIOS_HPP
