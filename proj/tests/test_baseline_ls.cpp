#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "rostop/baseline_ls.hpp"
#include "rostop/error.hpp"
#include "rostop/rewards.hpp"
#include "rostop/scenarios.hpp"

using namespace rostop;

namespace {

// L_k(x) = sum_j C(k, j) (-x)^j / j!
double laguerre_explicit(int k, double x)
{
  double sum = 0.0, binom = 1.0, fact = 1.0, power = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      binom = binom * (k - j + 1) / j;
      fact *= j;
      power *= -x;
    }
    sum += binom * power / fact;
  }
  return sum;
}

ErrorKind kind_of(const std::function<void()>& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("Laguerre recurrence matches the explicit sum")
{
  CHECK(laguerre(0, 3.0) == 1.0);
  CHECK(laguerre(1, 3.0) == -2.0);
  CHECK(laguerre(2, 3.0) == doctest::Approx(0.5 * (9.0 - 12.0 + 2.0)));
  for (int k = 0; k <= 15; ++k) {
    for (double x = 0.0; x <= 10.0; x += 0.25) {
      const double e = laguerre_explicit(k, x);
      CHECK(std::abs(laguerre(k, x) - e) <= 1e-9 * std::max(1.0, std::abs(e)));
    }
  }
}

TEST_CASE("basis parsing")
{
  const auto b = parse_basis("one,prices,laguerre2");
  CHECK(b.one);
  CHECK(b.prices);
  CHECK(b.laguerre_degree == 2);
  CHECK_FALSE(b.payoff);
  CHECK(parse_basis(b.to_string()).to_string() == b.to_string());
  const auto all = parse_basis("one, prices, pricesKO, KOind, maxprice, payoff, laguerre15");
  CHECK(all.needs_barrier());
  CHECK(all.laguerre_degree == 15);
  CHECK(kind_of([] { parse_basis("laguerre16"); }) == ErrorKind::configuration);
  CHECK(kind_of([] { parse_basis("bogus"); }) == ErrorKind::configuration);
  CHECK(kind_of([] { parse_basis(""); }) == ErrorKind::configuration);
}

TEST_CASE("feature layout")
{
  LsPolicy p;
  p.basis = parse_basis("one,prices,laguerre2");
  p.state_dim = 1;
  CHECK(p.feature_dim() == 4);
  std::vector<double> f;
  const std::vector<double> state{3.0};
  p.features(0, state, {}, 0.0, false, f);
  CHECK(f == std::vector<double>{1.0, 3.0, laguerre(1, 3.0), laguerre(2, 3.0)});

  p.basis = parse_basis("laguerre1");
  p.features(0, state, {}, 0.0, false, f);
  CHECK(f == std::vector<double>{1.0, -2.0});
}

TEST_CASE("single period always stops at once")
{
  SamplePathSet train;
  train.states = PathTensor(10, 1, 1);
  RewardMatrix g(10, 1);
  for (std::size_t i = 0; i < 10; ++i) { train.states.at(i, 0, 0) = g.at(i, 0) = static_cast<double>(i); }
  const auto policy = fit_ls(train, g, parse_basis("one"));
  CHECK(policy.coefficients.empty());
  CHECK(evaluate_ls(policy, train, g).mean == doctest::Approx(4.5));
}

TEST_CASE("constant basis regresses onto the sample mean")
{
  const auto train = simulate_uniform({2, 3}, 1000);
  const auto g = reward_matrix(train, IdentityReward{});
  const auto policy = fit_ls(train, g, parse_basis("one"));
  double mean = 0.0;
  for (std::size_t i = 0; i < 1000; ++i) { mean += g.at(i, 1); }
  mean /= 1000.0;
  REQUIRE(policy.coefficients.size() == 1);
  CHECK(policy.coefficients[0][0] == doctest::Approx(mean).epsilon(1e-10));
  const std::vector<double> high{mean + 0.01, 0.0}, low{mean - 0.01, 0.9};
  CHECK(apply_ls(policy, high, {}, high) == 0);
  CHECK(apply_ls(policy, low, {}, low) == 1);
}

TEST_CASE("three-point process: the regression rule cannot beat two and two thirds")
{
  const auto train = simulate_threepoint({1}, 10000);
  const auto test = simulate_threepoint({2}, 100000);
  const auto basis = parse_basis("one,prices,laguerre2");
  const auto policy = fit_ls(train, reward_matrix(train, IdentityReward{}), basis);
  const auto est = evaluate_ls(policy, test, reward_matrix(test, IdentityReward{}));
  CHECK(est.mean == doctest::Approx(2.0 + 2.0 / 3.0).epsilon(0.01));

  // The decision depends on (t, x_t) only: both histories that reach x_2 = 2
  // from x_1 = 1 stop at period 2, whatever comes later.
  const std::vector<double> up{1, 2, 3}, odd{1, 2, 1}, down{3, 2, 1};
  CHECK(apply_ls(policy, up, {}, up) == 1);
  CHECK(apply_ls(policy, odd, {}, odd) == 1);
  CHECK(apply_ls(policy, down, {}, down) == 0);
}

TEST_CASE("zero payoffs stop at the last period at the latest")
{
  const auto train = simulate_uniform({3, 4}, 200);
  const auto policy = fit_ls(train, reward_matrix(train, IdentityReward{}), parse_basis("one,prices"));
  const std::vector<double> zeros{0, 0, 0};
  CHECK(apply_ls(policy, zeros, {}, zeros) <= 2);
  const std::vector<double> huge{1e6, 0, 0};
  CHECK(apply_ls(policy, huge, {}, huge) == 0);
}

TEST_CASE("barrier option features")
{
  GbmBarrierParams params;
  params.assets = 2;
  params.horizon = 9;
  params.scaling = BrownianScaling::standard;
  params.seed = 10;
  const auto train = simulate_gbm_barrier(params, 3000);
  params.seed = 11;
  const auto test = simulate_gbm_barrier(params, 3000);
  LsOptions options;
  options.barrier = params.reward();
  const auto basis = parse_basis("one,prices,pricesKO,KOind,maxprice,payoff,laguerre3");
  for (bool itm : {false, true}) {
    options.itm_only = itm;
    const auto policy = fit_ls(train.paths, train.rewards, basis, options);
    CHECK(policy.feature_dim() == 1 + 2 + 2 + 1 + 1 + 1 + 3);
    const auto est = evaluate_ls(policy, test.paths, test.rewards);
    double cap = 0.0;
    for (std::size_t i = 0; i < 3000; ++i) {
      const auto row = test.rewards.row(i);
      cap += *std::max_element(row.begin(), row.end());
    }
    CHECK(est.mean > 0.0);
    CHECK(est.mean <= cap / 3000.0);
  }
  CHECK(kind_of([&] { fit_ls(train.paths, train.rewards, basis); }) == ErrorKind::configuration);
}

TEST_CASE("fitting failures")
{
  SamplePathSet train;
  train.states = PathTensor(3, 2, 1);
  RewardMatrix g(3, 2);
  CHECK(kind_of([&] { fit_ls(train, g, parse_basis("one,prices,laguerre2")); }) == ErrorKind::fitting);
  // An all-zero design matrix stays singular after the ridge.
  CHECK(kind_of([&] { fit_ls(train, g, parse_basis("prices")); }) == ErrorKind::fitting);
}
