#include "rostop/baseline_ls.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "rostop/error.hpp"
#include "rostop/parallel.hpp"

namespace rostop {

bool BasisSpec::empty() const
{
  return !(one || prices || prices_ko || ko_indicator || max_price || payoff || laguerre_degree >= 0);
}

std::string BasisSpec::to_string() const
{
  std::string s;
  auto add = [&](const std::string& name) { s += (s.empty() ? "" : ",") + name; };
  if (one) { add("one"); }
  if (prices) { add("prices"); }
  if (prices_ko) { add("pricesKO"); }
  if (ko_indicator) { add("KOind"); }
  if (max_price) { add("maxprice"); }
  if (payoff) { add("payoff"); }
  if (laguerre_degree >= 0) { add("laguerre" + std::to_string(laguerre_degree)); }
  return s;
}

BasisSpec parse_basis(std::string_view text)
{
  BasisSpec b;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string token(text.substr(pos, comma - pos));
    token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }),
                token.end());
    std::string lower = token;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "one") {
      b.one = true;
    } else if (lower == "prices") {
      b.prices = true;
    } else if (lower == "priceko" || lower == "pricesko") {
      b.prices_ko = true;
    } else if (lower == "koind") {
      b.ko_indicator = true;
    } else if (lower == "maxprice") {
      b.max_price = true;
    } else if (lower == "payoff") {
      b.payoff = true;
    } else if (lower.rfind("laguerre", 0) == 0) {
      std::string digits = lower.substr(8);
      if (!digits.empty() && (digits[0] == ':' || digits[0] == '-')) { digits.erase(0, 1); }
      require(!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit), ErrorKind::configuration,
              "laguerre basis needs a degree, e.g. laguerre2");
      const int k = std::stoi(digits);
      require(k <= 15, ErrorKind::configuration, "laguerre degree is capped at 15");
      b.laguerre_degree = std::max(b.laguerre_degree, k);
    } else if (!lower.empty()) {
      fail(ErrorKind::configuration, "unknown basis family '" + token + "'");
    }
    pos = comma + 1;
  }
  require(!b.empty(), ErrorKind::configuration, "basis needs at least one family");
  return b;
}

double laguerre(int k, double x)
{
  if (k <= 0) { return 1.0; }
  double prev = 1.0, cur = 1.0 - x;
  for (int m = 1; m < k; ++m) {
    const double next = ((2.0 * m + 1.0 - x) * cur - m * prev) / (m + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::size_t LsPolicy::feature_dim() const
{
  const std::size_t price_dim = raw_dim > 0 ? raw_dim : state_dim;
  std::size_t d = 0;
  if (basis.one) { ++d; }
  if (basis.prices) { d += price_dim; }
  if (basis.prices_ko) { d += price_dim; }
  if (basis.ko_indicator) { ++d; }
  if (basis.max_price) { ++d; }
  if (basis.payoff) { ++d; }
  if (basis.laguerre_degree >= 0) { d += static_cast<std::size_t>(basis.laguerre_degree) + (basis.one ? 0 : 1); }
  return d;
}

void LsPolicy::features(std::size_t, std::span<const double> state, std::span<const double> raw, double payoff,
                        bool knocked, std::vector<double>& out) const
{
  out.clear();
  const auto prices = raw.empty() ? state : raw;
  const double top = *std::max_element(prices.begin(), prices.end());
  const double alive = knocked ? 0.0 : 1.0;
  if (basis.one) { out.push_back(1.0); }
  if (basis.prices) { out.insert(out.end(), prices.begin(), prices.end()); }
  if (basis.prices_ko) {
    for (double p : prices) { out.push_back(p * alive); }
  }
  if (basis.ko_indicator) { out.push_back(1.0 - alive); }
  if (basis.max_price) { out.push_back(top); }
  if (basis.payoff) { out.push_back(payoff); }
  if (basis.laguerre_degree >= 0) {
    const double x = *std::max_element(state.begin(), state.end());
    for (int k = basis.one ? 1 : 0; k <= basis.laguerre_degree; ++k) { out.push_back(laguerre(k, x)); }
  }
}

namespace {

// Least squares through the normal equations, with a small ridge when the
// Gram matrix is numerically singular.
std::vector<double> regress(const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
{
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd gram = x.transpose() * x;
  const Eigen::VectorXd rhs = x.transpose() * y;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() >= 1e-12)) {
    const double trace = gram.trace();
    require(trace > 0.0 && std::isfinite(trace), ErrorKind::fitting, "regression design matrix is degenerate");
    const double ridge = 1e-8 * trace / static_cast<double>(p);
    gram.diagonal().array() += ridge;
    ldlt.compute(gram);
  }
  require(ldlt.info() == Eigen::Success, ErrorKind::fitting, "regression normal equations could not be solved");
  const Eigen::VectorXd beta = ldlt.solve(rhs);
  require(beta.allFinite(), ErrorKind::fitting, "regression produced non-finite coefficients");
  return {beta.data(), beta.data() + beta.size()};
}

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) { s += a[k] * b[k]; }
  return s;
}

std::span<const double> raw_point(const SamplePathSet& paths, std::size_t i, std::size_t t)
{
  if (!paths.raw) { return {}; }
  return paths.raw->point(i, t);
}

}  // namespace

LsPolicy fit_ls(const SamplePathSet& train, const RewardMatrix& rewards, const BasisSpec& basis,
                const LsOptions& options)
{
  train.validate();
  require(rewards.n_paths() == train.n_paths() && rewards.horizon() == train.horizon(), ErrorKind::shape,
          "rewards do not correspond to the training set");
  require(!basis.empty(), ErrorKind::configuration, "basis needs at least one family");
  require(basis.laguerre_degree <= 15, ErrorKind::configuration, "laguerre degree is capped at 15");
  require(!basis.needs_barrier() || (options.barrier && train.raw), ErrorKind::configuration,
          "pricesKO / KOind features need a barrier specification and raw asset paths");

  LsPolicy policy;
  policy.basis = basis;
  policy.options = options;
  policy.horizon = train.horizon();
  policy.state_dim = train.state_dim();
  policy.raw_dim = train.raw ? train.raw->dim() : 0;
  const std::size_t n = train.n_paths(), horizon = train.horizon(), p = policy.feature_dim();
  require(n > p, ErrorKind::fitting, "need more training paths than regression features");
  policy.coefficients.assign(horizon > 0 ? horizon - 1 : 0, {});

  RewardMatrix knocked;
  if (basis.needs_barrier()) { knocked = knocked_out_indicator(train, *options.barrier); }

  std::vector<double> cashflow(n);
  for (std::size_t i = 0; i < n; ++i) { cashflow[i] = rewards.at(i, horizon - 1); }

  std::vector<std::vector<double>> feats(n);
  for (std::size_t t = horizon - 1; t-- > 0;) {
    parallel_for(n, [&](std::size_t i) {
      const bool ko = basis.needs_barrier() && knocked.at(i, t) > 0.5;
      policy.features(t, train.states.point(i, t), raw_point(train, i, t), rewards.at(i, t), ko, feats[i]);
    });
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (!options.itm_only || rewards.at(i, t) > 0.0) { rows.push_back(i); }
    }
    std::vector<double> beta(p, 0.0);
    if (rows.size() > 0) {
      Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
      Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t k = 0; k < p; ++k) { x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = feats[rows[r]][k]; }
        y(static_cast<Eigen::Index>(r)) = cashflow[rows[r]];
      }
      beta = regress(x, y);
    }
    for (std::size_t i : rows) {
      if (rewards.at(i, t) >= dot(beta, feats[i])) { cashflow[i] = rewards.at(i, t); }
    }
    policy.coefficients[t] = std::move(beta);
  }
  return policy;
}

std::size_t apply_ls(const LsPolicy& policy, std::span<const double> states, std::span<const double> raw,
                     std::span<const double> path_rewards)
{
  const std::size_t horizon = policy.horizon, d = policy.state_dim, dr = policy.raw_dim;
  require(states.size() == horizon * d && path_rewards.size() == horizon, ErrorKind::shape,
          "path does not match the regression policy");
  require(dr == 0 || raw.size() == horizon * dr, ErrorKind::shape, "raw path does not match the regression policy");
  const bool track_ko = policy.basis.needs_barrier();
  bool knocked = false;
  std::vector<double> f;
  for (std::size_t t = 0; t + 1 < horizon; ++t) {
    const auto r = dr == 0 ? std::span<const double>{} : raw.subspan(t * dr, dr);
    if (track_ko) {
      knocked = knocked || *std::max_element(r.begin(), r.end()) > policy.options.barrier->barrier_at(t, horizon);
    }
    const double g = path_rewards[t];
    if (policy.options.itm_only && !(g > 0.0)) { continue; }
    policy.features(t, states.subspan(t * d, d), r, g, knocked, f);
    if (g >= dot(policy.coefficients[t], f)) { return t; }
  }
  return horizon - 1;
}

MeanEstimate evaluate_ls(const LsPolicy& policy, const SamplePathSet& test, const RewardMatrix& rewards)
{
  require(test.n_paths() >= 1, ErrorKind::parameter, "empty test set");
  require(rewards.n_paths() == test.n_paths() && rewards.horizon() == test.horizon(), ErrorKind::shape,
          "rewards do not correspond to the test set");
  require(policy.raw_dim == 0 || (test.raw && test.raw->dim() == policy.raw_dim), ErrorKind::shape,
          "test set lacks the raw paths the regression policy uses");
  std::vector<double> realized(test.n_paths());
  parallel_for(test.n_paths(), [&](std::size_t i) {
    const auto raw = policy.raw_dim == 0 ? std::span<const double>{} : test.raw->path(i);
    realized[i] = rewards.at(i, apply_ls(policy, test.states.path(i), raw, rewards.row(i)));
  });
  return mean_estimate(realized);
}

}  // namespace rostop
