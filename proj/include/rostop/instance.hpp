#ifndef ROSTOP_INSTANCE_HPP
#define ROSTOP_INSTANCE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rostop/paths.hpp"

namespace rostop {

/// Sorted distinct reward levels of one path (0 always included) and the
/// level index of every period: G[i][t] == levels[level_of[t]].
struct LevelTable {
  std::vector<double> levels;
  std::vector<int> level_of;

  int size() const { return static_cast<int>(levels.size()); }
  /// Index of `value` in levels; value must be one of the path's rewards.
  int index_of(double value) const;
};

/// The sampled robust problem: box centers, rewards, radius, and the
/// precomputed tables both solvers read.
class RobustInstance {
 public:
  RobustInstance() = default;

  std::size_t n_paths() const { return states_.n_paths(); }
  std::size_t horizon() const { return states_.horizon(); }
  std::size_t state_dim() const { return states_.dim(); }
  double epsilon() const { return epsilon_; }

  const PathTensor& states() const { return states_; }
  const RewardMatrix& rewards() const { return rewards_; }
  double reward(std::size_t i, std::size_t t) const { return rewards_.at(i, t); }

  /// ||x^i_t - x^j_t||_inf <= 2 epsilon, i.e. the closed boxes around the
  /// two paths meet at period t. Throws on out-of-range indices.
  bool intersects(std::size_t i, std::size_t j, std::size_t t) const;
  /// Unchecked variant for hot loops.
  bool intersects_unchecked(std::size_t i, std::size_t j, std::size_t t) const
  {
    return (intersect_[row_offset(t, i) + (j >> 6)] >> (j & 63)) & 1ULL;
  }
  /// Bit row {j : intersects(i, j, t)}; bit j of word j/64.
  std::span<const std::uint64_t> intersect_row(std::size_t i, std::size_t t) const
  {
    return {intersect_.data() + row_offset(t, i), words_per_row_};
  }

  const LevelTable& level_table(std::size_t i) const { return level_tables_[i]; }
  /// Smallest period maximizing G[i][.].
  int peak_period(std::size_t i) const { return peak_period_[i]; }

  friend RobustInstance build_instance(PathTensor states, RewardMatrix rewards, double epsilon);

 private:
  std::size_t row_offset(std::size_t t, std::size_t i) const { return (t * n_paths() + i) * words_per_row_; }

  PathTensor states_;
  RewardMatrix rewards_;
  double epsilon_ = 0.0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> intersect_;  // bit-packed by (t, i, j)
  std::vector<LevelTable> level_tables_;
  std::vector<int> peak_period_;
};

/// Builds the robust instance; the intersection table costs O(N^2 T d) in the
/// worst case (pairs are swept in order of the first state coordinate).
RobustInstance build_instance(PathTensor states, RewardMatrix rewards, double epsilon);

LevelTable build_level_table(std::span<const double> rewards_row);

}  // namespace rostop

#endif  // ROSTOP_INSTANCE_HPP
