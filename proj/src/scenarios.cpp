#include "rostop/scenarios.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "rostop/error.hpp"
#include "rostop/parallel.hpp"
#include "rostop/rng.hpp"

namespace rostop {

namespace {

void require_paths(std::size_t n)
{
  require(n >= 1, ErrorKind::parameter, "number of paths must be at least 1");
}

}  // namespace

SamplePathSet simulate_bump(const BumpParams& params, std::size_t n)
{
  require_paths(n);
  const std::size_t horizon = params.horizon, delta = params.delta;
  require(delta >= 1 && delta < horizon, ErrorKind::parameter, "bump duration must satisfy 1 <= delta <= T-1");

  SamplePathSet out;
  out.states = PathTensor(n, horizon, 1);
  out.seed = params.seed;
  out.generator_tag = "bump";
  const double height = 2.0 / static_cast<double>(horizon);
  parallel_for(n, [&](std::size_t i) {
    auto rng = path_rng(params.seed, i);
    std::uniform_int_distribution<std::size_t> onset(1, horizon - delta);
    std::uniform_real_distribution<double> noise(0.0, 1.0);
    const std::size_t theta = onset(rng);
    for (std::size_t t = 1; t <= horizon; ++t) {
      const bool bumped = theta <= t && t <= theta + delta;
      out.states.at(i, t - 1, 0) = noise(rng) + (bumped ? height * static_cast<double>(theta) : 0.0);
    }
  });
  return out;
}

std::vector<double> correlation_factor(const std::vector<double>& correlation, std::size_t dim)
{
  require(correlation.size() == dim * dim, ErrorKind::shape, "correlation matrix has the wrong size");
  Eigen::MatrixXd rho(dim, dim);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) { rho(a, b) = correlation[a * dim + b]; }
  }
  for (std::size_t a = 0; a < dim; ++a) {
    require(std::abs(rho(a, a) - 1.0) <= 1e-12, ErrorKind::factorization, "correlation matrix needs a unit diagonal");
    for (std::size_t b = 0; b < a; ++b) {
      require(std::abs(rho(a, b) - rho(b, a)) <= 1e-12, ErrorKind::factorization,
              "correlation matrix is not symmetric");
    }
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(rho);
  require(ldlt.info() == Eigen::Success, ErrorKind::factorization, "correlation factorization failed");
  const Eigen::VectorXd diag = ldlt.vectorD();
  require(diag.minCoeff() >= -1e-12, ErrorKind::factorization, "correlation matrix is not positive semidefinite");

  // rho = P^T L D L^T P, so F = P^T L sqrt(D).
  Eigen::MatrixXd factor = ldlt.matrixL();
  factor = factor * diag.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  factor = ldlt.transpositionsP().transpose() * factor;

  std::vector<double> out(dim * dim);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) { out[a * dim + b] = factor(a, b); }
  }
  return out;
}

GbmSample simulate_gbm_barrier(const GbmBarrierParams& params, std::size_t n)
{
  require_paths(n);
  const std::size_t dim = params.assets, horizon = params.horizon;
  require(dim >= 1 && horizon >= 1, ErrorKind::parameter, "GBM needs at least one asset and one period");
  require(params.volatilities.size() == 1 || params.volatilities.size() == dim, ErrorKind::shape,
          "need one volatility per asset or a single shared volatility");
  require(std::all_of(params.volatilities.begin(), params.volatilities.end(),
                      [](double s) { return std::isfinite(s) && s >= 0.0; }),
          ErrorKind::parameter, "volatilities must be nonnegative");
  require(params.initial_price > 0.0, ErrorKind::parameter, "initial price must be positive");
  const auto spec = params.reward();
  require(spec.years > 0.0 && spec.rate >= 0.0 && spec.rate < 1.0 && spec.strike >= 0.0 && spec.barrier > 0.0,
          ErrorKind::parameter, "barrier option parameters out of range");

  std::vector<double> factor;
  if (!params.correlation.empty()) { factor = correlation_factor(params.correlation, dim); }

  const double lambda = spec.lambda(horizon);
  const double noise_scale = params.scaling == BrownianScaling::printed ? lambda : std::sqrt(lambda);
  std::vector<double> vol(dim), drift(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    vol[a] = params.volatilities.size() == 1 ? params.volatilities[0] : params.volatilities[a];
    drift[a] = (params.rate - 0.5 * vol[a] * vol[a]) * lambda;
  }

  GbmSample out;
  out.paths.states = PathTensor(n, horizon, 1);
  out.paths.raw = PathTensor(n, horizon, dim);
  out.paths.seed = params.seed;
  out.paths.generator_tag = params.scaling == BrownianScaling::printed ? "gbm" : "gbm-standard";
  auto& raw = *out.paths.raw;

  parallel_for(n, [&](std::size_t i) {
    auto rng = path_rng(params.seed, i);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> w(dim, 0.0), z(dim);
    for (std::size_t t = 0; t < horizon; ++t) {
      for (auto& v : z) { v = normal(rng); }
      for (std::size_t a = 0; a < dim; ++a) {
        if (factor.empty()) {
          w[a] += z[a];
        } else {
          double s = 0.0;
          for (std::size_t b = 0; b < dim; ++b) { s += factor[a * dim + b] * z[b]; }
          w[a] += s;
        }
      }
      double top = 0.0;
      const double periods = static_cast<double>(t + 1);
      for (std::size_t a = 0; a < dim; ++a) {
        const double price = params.initial_price * std::exp(drift[a] * periods + vol[a] * noise_scale * w[a]);
        raw.at(i, t, a) = price;
        top = a == 0 ? price : std::max(top, price);
      }
      out.paths.states.at(i, t, 0) = top;
    }
  });

  out.rewards = reward_matrix(out.paths, spec);
  return out;
}

SamplePathSet simulate_threepoint(const ThreePointParams& params, std::size_t n)
{
  require_paths(n);
  SamplePathSet out;
  out.states = PathTensor(n, 3, 1);
  out.seed = params.seed;
  out.generator_tag = "threepoint";
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = path_rng(params.seed, i);
    std::bernoulli_distribution falling(2.0 / 3.0);
    const bool down = falling(rng);
    for (std::size_t t = 0; t < 3; ++t) {
      out.states.at(i, t, 0) = down ? 3.0 - static_cast<double>(t) : 1.0 + static_cast<double>(t);
    }
  }
  return out;
}

SamplePathSet simulate_uniform(const UniformParams& params, std::size_t n)
{
  require_paths(n);
  require(params.horizon >= 1, ErrorKind::parameter, "horizon must be at least 1");
  SamplePathSet out;
  out.states = PathTensor(n, params.horizon, 1);
  out.seed = params.seed;
  out.generator_tag = "uniform";
  parallel_for(n, [&](std::size_t i) {
    auto rng = path_rng(params.seed, i);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t t = 0; t < params.horizon; ++t) { out.states.at(i, t, 0) = u(rng); }
  });
  return out;
}

}  // namespace rostop
