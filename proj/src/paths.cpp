#include "rostop/paths.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rostop/error.hpp"

namespace rostop {

const char* error_kind_name(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::shape: return "shape";
    case ErrorKind::refusal: return "refusal";
    case ErrorKind::fitting: return "fitting";
    case ErrorKind::budget: return "budget";
    case ErrorKind::factorization: return "factorization";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

void SamplePathSet::validate() const
{
  require(n_paths() >= 1 && horizon() >= 1 && state_dim() >= 1, ErrorKind::shape,
          "path set must have at least one path, period and state dimension");
  for (double v : states.values()) {
    require(std::isfinite(v), ErrorKind::parameter, "path set contains a non-finite state");
  }
  if (raw) {
    require(raw->n_paths() == n_paths() && raw->horizon() == horizon(), ErrorKind::shape,
            "raw paths do not match the projected states");
  }
}

RewardMatrix::RewardMatrix(std::size_t n_paths, std::size_t horizon, std::vector<double> values)
  : n_paths_(n_paths), horizon_(horizon), values_(std::move(values))
{
  require(values_.size() == n_paths_ * horizon_, ErrorKind::shape, "reward table has the wrong number of entries");
}

void RewardMatrix::validate() const
{
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorKind::parameter, "reward of path " + std::to_string(k / horizon_ + 1) + " at period " +
                                     std::to_string(k % horizon_ + 1) + " is negative or not finite");
    }
  }
}

void SigmaPolicy::validate(std::size_t horizon) const
{
  for (int s : sigma) {
    require(s >= 0 && static_cast<std::size_t>(s) < horizon, ErrorKind::parameter,
            "sigma entry outside {1..T}: " + std::to_string(s + 1));
  }
}

MeanEstimate mean_estimate(std::span<const double> samples)
{
  require(!samples.empty(), ErrorKind::parameter, "mean of an empty sample");
  // Sorted Neumaier summation: the result does not depend on sample order.
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  auto accurate_sum = [](const std::vector<double>& xs) {
    double sum = 0.0, carry = 0.0;
    for (double x : xs) {
      const double t = sum + x;
      carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    return sum + carry;
  };
  const double n = static_cast<double>(sorted.size());
  const double mean = accurate_sum(sorted) / n;
  MeanEstimate est{mean, 0.0, sorted.size()};
  if (sorted.size() > 1) {
    std::vector<double> sq(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k) { sq[k] = (sorted[k] - mean) * (sorted[k] - mean); }
    std::sort(sq.begin(), sq.end());
    const double var = accurate_sum(sq) / (n - 1.0);
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

}  // namespace rostop
