#ifndef ROSTOP_PATHS_HPP
#define ROSTOP_PATHS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rostop {

// Periods are 0-based throughout the library: index t stands for stopping
// period t + 1. File formats and printed output use 1-based periods.

/// Row-major N x T x dim tensor of reals.
class PathTensor {
 public:
  PathTensor() = default;
  PathTensor(std::size_t n_paths, std::size_t horizon, std::size_t dim)
    : n_paths_(n_paths), horizon_(horizon), dim_(dim), values_(n_paths * horizon * dim, 0.0)
  {
  }

  std::size_t n_paths() const { return n_paths_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t dim() const { return dim_; }

  double& at(std::size_t i, std::size_t t, std::size_t k) { return values_[(i * horizon_ + t) * dim_ + k]; }
  double at(std::size_t i, std::size_t t, std::size_t k) const { return values_[(i * horizon_ + t) * dim_ + k]; }

  std::span<double> point(std::size_t i, std::size_t t) { return {values_.data() + (i * horizon_ + t) * dim_, dim_}; }
  std::span<const double> point(std::size_t i, std::size_t t) const
  {
    return {values_.data() + (i * horizon_ + t) * dim_, dim_};
  }

  /// The T x dim block of path i.
  std::span<const double> path(std::size_t i) const { return {values_.data() + i * horizon_ * dim_, horizon_ * dim_}; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool operator==(const PathTensor&) const = default;

 private:
  std::size_t n_paths_ = 0;
  std::size_t horizon_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

/// Simulated sample paths: projected states used by the robust problem and,
/// optionally, the full asset paths the reward is computed from.
struct SamplePathSet {
  PathTensor states;
  std::optional<PathTensor> raw;
  std::uint64_t seed = 0;
  std::string generator_tag;

  std::size_t n_paths() const { return states.n_paths(); }
  std::size_t horizon() const { return states.horizon(); }
  std::size_t state_dim() const { return states.dim(); }

  /// Throws if the set is empty or holds non-finite states.
  void validate() const;
};

/// values[i][t] = g(t, x^i); nonnegative and finite.
class RewardMatrix {
 public:
  RewardMatrix() = default;
  RewardMatrix(std::size_t n_paths, std::size_t horizon) : n_paths_(n_paths), horizon_(horizon), values_(n_paths * horizon, 0.0) {}
  RewardMatrix(std::size_t n_paths, std::size_t horizon, std::vector<double> values);

  std::size_t n_paths() const { return n_paths_; }
  std::size_t horizon() const { return horizon_; }

  double& at(std::size_t i, std::size_t t) { return values_[i * horizon_ + t]; }
  double at(std::size_t i, std::size_t t) const { return values_[i * horizon_ + t]; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * horizon_, horizon_}; }

  const std::vector<double>& values() const { return values_; }

  /// Throws on negative or non-finite entries.
  void validate() const;

  bool operator==(const RewardMatrix&) const = default;

 private:
  std::size_t n_paths_ = 0;
  std::size_t horizon_ = 0;
  std::vector<double> values_;
};

/// One stopping period per training path (0-based).
struct SigmaPolicy {
  std::vector<int> sigma;

  std::size_t size() const { return sigma.size(); }
  /// Throws unless every entry lies in [0, horizon).
  void validate(std::size_t horizon) const;

  bool operator==(const SigmaPolicy&) const = default;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Sample mean and standard error (sample standard deviation / sqrt(n)).
MeanEstimate mean_estimate(std::span<const double> samples);

}  // namespace rostop

#endif  // ROSTOP_PATHS_HPP
