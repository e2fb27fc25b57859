#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rostop/error.hpp"
#include "rostop/policy.hpp"
#include "rostop/rewards.hpp"
#include "rostop/testing/oracles.hpp"

using namespace rostop;

namespace {

SamplePathSet one_dim_set(const std::vector<std::vector<double>>& rows)
{
  SamplePathSet s;
  s.states = PathTensor(rows.size(), rows.at(0).size(), 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t t = 0; t < rows[i].size(); ++t) { s.states.at(i, t, 0) = rows[i][t]; }
  }
  return s;
}

SigmaPolicy one_based(std::vector<int> s)
{
  for (auto& v : s) { --v; }
  return {s};
}

}  // namespace

TEST_CASE("identity reward copies the state")
{
  const auto set = one_dim_set({{8, 7, 6}});
  const auto g = reward_matrix(set, IdentityReward{});
  CHECK(g.at(0, 0) == 8.0);
  CHECK(g.at(0, 1) == 7.0);
  CHECK(g.at(0, 2) == 6.0);
}

TEST_CASE("identity reward rejects multi-dimensional states")
{
  SamplePathSet set;
  set.states = PathTensor(1, 2, 2);
  CHECK_THROWS_AS(reward_matrix(set, IdentityReward{}), Error);
}

TEST_CASE("barrier reward")
{
  BarrierCallReward spec;
  spec.rate = 0.0;
  spec.strike = 100.0;
  spec.barrier = 150.0;
  spec.barrier_growth = 0.0;

  SamplePathSet set;
  set.states = PathTensor(1, 2, 1);
  set.raw = PathTensor(1, 2, 2);
  set.raw->at(0, 0, 0) = 120.0;
  set.raw->at(0, 0, 1) = 90.0;
  set.raw->at(0, 1, 0) = 95.0;
  set.raw->at(0, 1, 1) = 80.0;

  SUBCASE("in the money, no breach")
  {
    const auto g = reward_matrix(set, spec);
    CHECK(g.at(0, 0) == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(g.at(0, 1) == 0.0);
  }
  SUBCASE("breach at the first period kills the whole row")
  {
    set.raw->at(0, 0, 1) = 151.0;
    const auto g = reward_matrix(set, spec);
    CHECK(g.at(0, 0) == 0.0);
    CHECK(g.at(0, 1) == 0.0);
  }
  SUBCASE("breach stays in force after prices fall back")
  {
    set.raw->at(0, 0, 0) = 200.0;
    set.raw->at(0, 1, 0) = 130.0;
    const auto g = reward_matrix(set, spec);
    CHECK(g.at(0, 1) == 0.0);
    const auto q = knocked_out_indicator(set, spec);
    CHECK(q.at(0, 0) == 1.0);
    CHECK(q.at(0, 1) == 1.0);
  }
  SUBCASE("discount and barrier growth follow the calendar")
  {
    spec.rate = 0.05;
    const double lambda = spec.lambda(2);
    CHECK(lambda == doctest::Approx(1.5));
    spec.barrier_growth = 0.25;
    CHECK(spec.barrier_at(1, 2) == doctest::Approx(150.0 * std::exp(0.25 * 1.5 * 2)));
    spec.barrier_growth = 0.0;
    const auto g = reward_matrix(set, spec);
    CHECK(g.at(0, 0) == doctest::Approx(20.0 * std::exp(-0.05 * 1.5)));
  }
}

TEST_CASE("barrier reward needs raw paths")
{
  const auto set = one_dim_set({{100, 110}});
  try {
    reward_matrix(set, BarrierCallReward{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }
}

TEST_CASE("negative rewards are rejected")
{
  const auto set = one_dim_set({{1, 2}});
  CustomReward custom{[](const SamplePathSet&, std::size_t, std::size_t t) { return t == 1 ? -1.0 : 0.0; }};
  try {
    reward_matrix(set, custom);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parameter);
  }
}

TEST_CASE("integer program objective on the two-path example")
{
  const auto inst = testing::two_path_instance();
  CHECK(policy_objective(inst, one_based({1, 2})) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(policy_objective(inst, one_based({2, 3})) == doctest::Approx(5.0).epsilon(1e-12));
  const auto terms = policy_path_terms(inst, one_based({2, 3}));
  CHECK(terms[0] == 7.0);
  CHECK(terms[1] == 3.0);

  // All nine policies in lexicographic order.
  const double expected[9] = {5.5, 6.0, 5.5, 5.0, 5.5, 5.0, 4.5, 5.0, 4.5};
  int k = 0;
  for (int a = 1; a <= 3; ++a) {
    for (int b = 1; b <= 3; ++b) {
      const auto sigma = one_based({a, b});
      const double v = policy_objective(inst, sigma);
      CHECK(v == doctest::Approx(expected[k]).epsilon(1e-12));
      CHECK(v == doctest::Approx(testing::naive_policy_objective(inst.states(), inst.rewards(), 2.0, sigma.sigma)));
      ++k;
    }
  }
}

TEST_CASE("objective rejects mismatched policies")
{
  const auto inst = testing::two_path_instance();
  CHECK_THROWS_AS(policy_objective(inst, one_based({1})), Error);
  CHECK_THROWS_AS(policy_objective(inst, one_based({1, 4})), Error);
}

TEST_CASE("objective matches the naive definition on random instances")
{
  std::mt19937_64 rng(11);
  for (int r = 0; r < 300; ++r) {
    const auto ri = testing::random_instance(rng, 7, 5, 3);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(ri.instance.horizon()) - 1);
    SigmaPolicy sigma;
    for (std::size_t i = 0; i < ri.instance.n_paths(); ++i) { sigma.sigma.push_back(pick(rng)); }
    const auto terms = policy_path_terms(ri.instance, sigma);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      // The inner minimum is attained and bounded by the reward at sigma^i.
      CHECK(terms[i] <= ri.rewards.at(i, static_cast<std::size_t>(sigma.sigma[i])));
    }
    CHECK(policy_objective(ri.instance, sigma) ==
          doctest::Approx(testing::naive_policy_objective(ri.states, ri.rewards, ri.epsilon, sigma.sigma)).epsilon(1e-12));
  }
}

TEST_CASE("zero radius with distinct states reduces to the mean reward at sigma")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int r = 0; r < 50; ++r) {
    const std::size_t n = 6, horizon = 4;
    PathTensor x(n, horizon, 1);
    for (auto& v : x.values()) { v = u(rng); }
    RewardMatrix g(n, horizon, x.values());
    const auto inst = build_instance(x, g, 0.0);
    SigmaPolicy sigma;
    double expected = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sigma.sigma.push_back(static_cast<int>(rng() % horizon));
      expected += g.at(i, static_cast<std::size_t>(sigma.sigma.back()));
    }
    CHECK(policy_objective(inst, sigma) == doctest::Approx(expected / n).epsilon(1e-14));
  }
}

TEST_CASE("materialized rule for sigma = (2,3)")
{
  const auto inst = testing::two_path_instance();
  const auto rule = materialize_policy(inst, one_based({2, 3}));
  auto at = [&](std::size_t t, double y) { return rule.stop(t, std::vector<double>{y}); };
  CHECK(rule.center_count(0) == 0);
  CHECK_FALSE(at(0, 8.0));
  CHECK(at(1, 5.0));
  CHECK(at(1, 9.0));
  CHECK_FALSE(at(1, 4.999));
  CHECK_FALSE(at(1, 9.001));
  CHECK(at(2, 1.0));
  CHECK(at(2, 5.0));
  CHECK_FALSE(at(2, 5.001));
  CHECK_FALSE(at(2, 0.999));

  const std::vector<double> path1{8, 7, 6}, zeros{0, 0, 0};
  CHECK(apply_policy(rule, path1) == std::optional<std::size_t>(1));
  CHECK_FALSE(apply_policy(rule, zeros).has_value());
}

TEST_CASE("rules with every path stopping first, and with zero radius")
{
  auto x = testing::two_path_states();
  RewardMatrix g(2, 3, x.values());
  const auto wide = build_instance(x, g, 2.0);
  const auto first = materialize_policy(wide, one_based({1, 1}));
  CHECK(first.center_count(0) == 2);
  CHECK(first.center_count(1) == 0);
  CHECK(apply_policy(first, std::vector<double>{4.5, 0, 0}) == std::optional<std::size_t>(0));

  const auto sharp = build_instance(x, g, 0.0);
  const auto rule = materialize_policy(sharp, one_based({2, 3}));
  CHECK(rule.stop(1, std::vector<double>{7.0}));
  CHECK_FALSE(rule.stop(1, std::vector<double>{std::nextafter(7.0, 8.0)}));
}

TEST_CASE("multi-dimensional boxes use the sup norm")
{
  StoppingRule rule(2, 2, 0.5);
  rule.add_center(0, 0, std::vector<double>{1.0, 1.0});
  CHECK(rule.stop(0, std::vector<double>{1.5, 0.5}));
  CHECK_FALSE(rule.stop(0, std::vector<double>{1.5, 0.4}));
  CHECK_FALSE(rule.stop(1, std::vector<double>{1.0, 1.0}));
}

TEST_CASE("one-dimensional lookup agrees with a linear scan")
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  StoppingRule rule(1, 1, 0.3);
  std::vector<double> centers;
  for (int k = 0; k < 40; ++k) {
    centers.push_back(u(rng));
    rule.add_center(0, static_cast<std::size_t>(k), std::vector<double>{centers.back()});
  }
  for (int k = 0; k < 2000; ++k) {
    const double y = u(rng);
    const bool scan = std::any_of(centers.begin(), centers.end(), [&](double c) { return std::abs(y - c) <= 0.3; });
    CHECK(rule.stop(0, std::vector<double>{y}) == scan);
  }
}

TEST_CASE("evaluation statistics")
{
  StoppingRule rule(1, 1, 0.0);
  rule.add_center(0, 0, std::vector<double>{2.0});
  rule.add_center(0, 1, std::vector<double>{4.0});
  const auto test = one_dim_set({{2.0}, {4.0}});
  const auto g = reward_matrix(test, IdentityReward{});
  const auto est = evaluate_policy(rule, test, g);
  CHECK(est.mean == doctest::Approx(3.0));
  CHECK(est.std_error == doctest::Approx(1.0));
  CHECK(est.n == 2);

  const StoppingRule never(1, 1, 0.0);
  CHECK(evaluate_policy(never, test, g).mean == 0.0);

  SamplePathSet empty;
  empty.states = PathTensor(0, 1, 1);
  CHECK_THROWS_AS(evaluate_policy(rule, empty, RewardMatrix(0, 1)), Error);
}

TEST_CASE("evaluation is invariant to test-path order")
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 500, horizon = 4;
  PathTensor x(n, horizon, 1);
  for (auto& v : x.values()) { v = u(rng); }
  StoppingRule rule(horizon, 1, 0.05);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (int k = 0; k < 5; ++k) { rule.add_center(t, 0, std::vector<double>{u(rng)}); }
  }
  SamplePathSet a;
  a.states = x;
  const auto ga = reward_matrix(a, IdentityReward{});
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) { perm[i] = i; }
  std::shuffle(perm.begin(), perm.end(), rng);
  SamplePathSet b;
  b.states = PathTensor(n, horizon, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < horizon; ++t) { b.states.at(i, t, 0) = x.at(perm[i], t, 0); }
  }
  const auto gb = reward_matrix(b, IdentityReward{});
  const auto ea = evaluate_policy(rule, a, ga), eb = evaluate_policy(rule, b, gb);
  CHECK(ea.mean == eb.mean);
  CHECK(ea.std_error == eb.std_error);

  // Textbook standard error.
  const auto realized = realized_rewards(rule, a, ga);
  double mean = 0.0, ss = 0.0;
  for (double v : realized) { mean += v; }
  mean /= n;
  for (double v : realized) { ss += (v - mean) * (v - mean); }
  CHECK(ea.std_error == doctest::Approx(std::sqrt(ss / (n - 1)) / std::sqrt(double(n))).epsilon(1e-12));
}

TEST_CASE("training paths realize at least their inner-minimum term")
{
  const auto inst = testing::two_path_instance();
  for (int a = 1; a <= 3; ++a) {
    for (int b = 1; b <= 3; ++b) {
      const auto sigma = one_based({a, b});
      const auto rule = materialize_policy(inst, sigma);
      SamplePathSet train;
      train.states = inst.states();
      const auto realized = realized_rewards(rule, train, inst.rewards());
      const auto terms = policy_path_terms(inst, sigma);
      for (std::size_t i = 0; i < 2; ++i) { CHECK(realized[i] >= terms[i]); }
    }
  }
}

TEST_CASE("every path in the boxes of path i earns at least its inner minimum")
{
  std::mt19937_64 rng(21);
  for (int r = 0; r < 40; ++r) {
    const auto ri = testing::random_instance(rng, 5, 4, 2);
    const auto& inst = ri.instance;
    std::uniform_int_distribution<int> pick(0, static_cast<int>(inst.horizon()) - 1);
    SigmaPolicy sigma;
    for (std::size_t i = 0; i < inst.n_paths(); ++i) { sigma.sigma.push_back(pick(rng)); }
    const auto rule = materialize_policy(inst, sigma);
    const auto terms = policy_path_terms(inst, sigma);
    std::uniform_real_distribution<double> jitter(-inst.epsilon(), inst.epsilon());
    const std::size_t d = inst.state_dim(), horizon = inst.horizon();
    for (std::size_t i = 0; i < inst.n_paths(); ++i) {
      for (int m = 0; m < 1000; ++m) {
        std::vector<double> y(horizon * d);
        for (std::size_t t = 0; t < horizon; ++t) {
          for (std::size_t k = 0; k < d; ++k) { y[t * d + k] = inst.states().at(i, t, k) + jitter(rng); }
        }
        const auto tau = apply_policy(rule, y);
        REQUIRE(tau.has_value());
        CHECK(*tau <= static_cast<std::size_t>(sigma.sigma[i]));
        CHECK(inst.reward(i, *tau) >= terms[i]);
      }
    }
  }
}

TEST_CASE("stopping decisions do not look ahead")
{
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  StoppingRule rule(6, 1, 0.1);
  for (std::size_t t = 0; t < 6; ++t) {
    for (int k = 0; k < 3; ++k) { rule.add_center(t, 0, std::vector<double>{u(rng)}); }
  }
  for (int r = 0; r < 500; ++r) {
    std::vector<double> y(6);
    for (auto& v : y) { v = u(rng); }
    const auto tau = apply_policy(rule, y);
    if (!tau) { continue; }
    auto z = y;
    for (std::size_t t = *tau + 1; t < 6; ++t) { z[t] = u(rng); }
    CHECK(apply_policy(rule, z) == tau);
  }
}

TEST_CASE("mean estimate")
{
  const std::vector<double> one{5.0};
  const auto e = mean_estimate(one);
  CHECK(e.mean == 5.0);
  CHECK(e.std_error == 0.0);
  CHECK(e.n == 1);
}
