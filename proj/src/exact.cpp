#include "rostop/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "rostop/error.hpp"
#include "rostop/heuristic.hpp"
#include "rostop/policy.hpp"

namespace rostop {

namespace {

bool improves(double candidate, double incumbent)
{
  return candidate > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent));
}

}  // namespace

ExactSolution solve_enumeration(const RobustInstance& instance, std::uint64_t cap)
{
  const std::size_t n = instance.n_paths(), horizon = instance.horizon();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (count > cap / horizon) {
      fail(ErrorKind::refusal, "enumeration would visit more than " + std::to_string(cap) +
                                   " policies (T^N too large); use branch-and-bound instead");
    }
    count *= horizon;
  }

  SigmaPolicy current;
  current.sigma.assign(n, 0);
  ExactSolution best;
  best.value = -std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < count; ++k) {
    const double v = policy_objective(instance, current);
    if (k == 0 || improves(v, best.value)) {
      best.value = v;
      best.sigma = current;
    }
    // Odometer with the first path as the most significant digit.
    for (std::size_t i = n; i-- > 0;) {
      if (++current.sigma[i] < static_cast<int>(horizon)) { break; }
      current.sigma[i] = 0;
    }
  }
  best.proved_optimal = true;
  best.nodes_explored = static_cast<std::size_t>(count);
  return best;
}

double bnb_root_bound(const RobustInstance& instance)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < instance.n_paths(); ++i) {
    sum += instance.reward(i, static_cast<std::size_t>(instance.peak_period(i)));
  }
  return sum / static_cast<double>(instance.n_paths());
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const RobustInstance& instance, std::size_t budget)
    : inst_(instance), n_(instance.n_paths()), horizon_(instance.horizon()), budget_(budget),
      sigma_(instance.n_paths(), -1), hit_(instance.n_paths() * instance.horizon(), 0)
  {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return peak(a) > peak(b);
    });
    choices_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      auto& c = choices_[i];
      c.resize(horizon_);
      std::iota(c.begin(), c.end(), 0);
      // Peak period first, then the remaining periods by decreasing reward.
      std::stable_sort(c.begin(), c.end(), [&](int a, int b) {
        return inst_.reward(i, static_cast<std::size_t>(a)) > inst_.reward(i, static_cast<std::size_t>(b));
      });
    }
  }

  ExactSolution run(const HeuristicSolution& warm)
  {
    incumbent_ = warm.sigma;
    incumbent_value_ = warm.policy_value;
    complete_ = true;
    search(0);
    ExactSolution out;
    out.sigma = incumbent_;
    out.value = policy_objective(inst_, incumbent_);
    out.proved_optimal = complete_;
    out.nodes_explored = nodes_;
    return out;
  }

 private:
  double peak(std::size_t i) const { return inst_.reward(i, static_cast<std::size_t>(inst_.peak_period(i))); }

  // Upper bound on every completion of the current partial assignment. More
  // fixed paths can only add entries to each inner minimum, so dropping the
  // unfixed ones relaxes every term.
  double bound() const
  {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double prefix = std::numeric_limits<double>::infinity();
      double best = 0.0;
      const int last = sigma_[i] >= 0 ? sigma_[i] : static_cast<int>(horizon_) - 1;
      for (int t = 0; t <= last; ++t) {
        const double g = inst_.reward(i, static_cast<std::size_t>(t));
        const double term = std::min(g, prefix);
        if (sigma_[i] < 0) {
          best = std::max(best, term);
        } else if (t == sigma_[i]) {
          best = term;
        }
        if (hit_[i * horizon_ + static_cast<std::size_t>(t)] > 0) { prefix = std::min(prefix, g); }
      }
      sum += best;
    }
    return sum / static_cast<double>(n_);
  }

  void fix(std::size_t k, int t, int delta)
  {
    const auto tt = static_cast<std::size_t>(t);
    const auto row = inst_.intersect_row(k, tt);
    for (std::size_t word = 0; word < row.size(); ++word) {
      for (std::uint64_t bits = row[word]; bits != 0; bits &= bits - 1) {
        const std::size_t i = word * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        hit_[i * horizon_ + tt] += delta;
      }
    }
    sigma_[k] = delta > 0 ? t : -1;
  }

  void search(std::size_t depth)
  {
    if (nodes_ >= budget_) {
      complete_ = false;
      return;
    }
    ++nodes_;
    const double ub = bound();
    if (!improves(ub, incumbent_value_)) { return; }
    if (depth == n_) {
      // All paths fixed: the bound is the objective itself.
      incumbent_value_ = ub;
      incumbent_.sigma = sigma_;
      return;
    }
    const std::size_t k = order_[depth];
    for (int t : choices_[k]) {
      fix(k, t, +1);
      search(depth + 1);
      fix(k, t, -1);
      if (!complete_) { return; }
    }
  }

  const RobustInstance& inst_;
  std::size_t n_, horizon_, budget_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<int>> choices_;
  std::vector<int> sigma_;
  std::vector<int> hit_;
  SigmaPolicy incumbent_;
  double incumbent_value_ = 0.0;
  std::size_t nodes_ = 0;
  bool complete_ = true;
};

}  // namespace

ExactSolution solve_bnb(const RobustInstance& instance, std::size_t node_budget)
{
  const auto warm = solve_heuristic(instance);
  BranchAndBound bnb(instance, node_budget);
  return bnb.run(warm);
}

// ---------------------------------------------------------------------------
// Bilinear program helpers

SigmaPolicy sigma_from_b(const std::vector<std::vector<int>>& b, std::size_t horizon)
{
  SigmaPolicy p;
  p.sigma.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    require(b[i].size() == horizon, ErrorKind::shape, "b row has the wrong length");
    const auto it = std::find(b[i].begin(), b[i].end(), 1);
    p.sigma[i] = it == b[i].end() ? static_cast<int>(horizon) - 1 : static_cast<int>(it - b[i].begin());
  }
  return p;
}

BilinearAssignment bilinear_minimal_completion(const RobustInstance& instance, const std::vector<std::vector<int>>& b)
{
  const std::size_t n = instance.n_paths(), horizon = instance.horizon();
  require(b.size() == n, ErrorKind::shape, "b has the wrong number of rows");
  BilinearAssignment a;
  a.b = b;
  a.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(b[i].size() == horizon, ErrorKind::shape, "b row has the wrong length");
    const auto& table = instance.level_table(i);
    const auto levels = static_cast<std::size_t>(table.size());
    auto& w = a.w[i];
    w.assign(horizon * levels, 0.0);
    // Direct lower bounds, then propagate along both monotone directions.
    for (std::size_t t = 0; t < horizon; ++t) {
      if (t > 0 && b[i][t - 1] == 1) { w[t * levels] = 1.0; }
      const auto l = static_cast<std::size_t>(table.level_of[t]);
      for (std::size_t j = 0; j < n; ++j) {
        if (b[j][t] == 1 && instance.intersects_unchecked(i, j, t)) {
          w[t * levels + l] = 1.0;
          break;
        }
      }
    }
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t l = 0; l < levels; ++l) {
        double v = w[t * levels + l];
        if (t > 0) { v = std::max(v, w[(t - 1) * levels + l]); }
        if (l > 0) { v = std::max(v, w[t * levels + l - 1]); }
        w[t * levels + l] = v;
      }
    }
  }
  return a;
}

bool bilinear_is_feasible(const RobustInstance& instance, const BilinearAssignment& a, double tol)
{
  const std::size_t n = instance.n_paths(), horizon = instance.horizon();
  if (a.b.size() != n || a.w.size() != n) { return false; }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& table = instance.level_table(i);
    const auto levels = static_cast<std::size_t>(table.size());
    const auto& w = a.w[i];
    if (a.b[i].size() != horizon || w.size() != horizon * levels) { return false; }
    for (std::size_t t = 0; t < horizon; ++t) {
      if (a.b[i][t] != 0 && a.b[i][t] != 1) { return false; }
      for (std::size_t l = 0; l < levels; ++l) {
        const double here = w[t * levels + l];
        if (t + 1 < horizon && here > w[(t + 1) * levels + l] + tol) { return false; }
        if (l + 1 < levels && here > w[t * levels + l + 1] + tol) { return false; }
      }
      if (t + 1 < horizon && a.b[i][t] > w[(t + 1) * levels] + tol) { return false; }
      const auto l = static_cast<std::size_t>(table.level_of[t]);
      for (std::size_t j = 0; j < n; ++j) {
        if (instance.intersects_unchecked(i, j, t) && a.b[j][t] > w[t * levels + l] + tol) { return false; }
      }
    }
  }
  return true;
}

double bilinear_objective(const RobustInstance& instance, const BilinearAssignment& a)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < instance.n_paths(); ++i) {
    const auto& table = instance.level_table(i);
    const auto levels = static_cast<std::size_t>(table.size());
    for (std::size_t t = 0; t < instance.horizon(); ++t) {
      if (a.b[i][t] == 0) { continue; }
      for (std::size_t l = 0; l < static_cast<std::size_t>(table.level_of[t]); ++l) {
        sum += (table.levels[l + 1] - table.levels[l]) * (1.0 - a.w[i][t * levels + l]);
      }
    }
  }
  return sum / static_cast<double>(instance.n_paths());
}

// ---------------------------------------------------------------------------
// LP export

namespace {

std::string num(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string var(char kind, std::size_t i, std::size_t t, std::size_t l = 0)
{
  std::string s(1, kind);
  s += "_" + std::to_string(i + 1) + "_" + std::to_string(t + 1);
  if (kind != 'b') { s += "_" + std::to_string(l + 1); }
  return s;
}

}  // namespace

void export_milp(const RobustInstance& instance, std::ostream& out)
{
  const std::size_t n = instance.n_paths(), horizon = instance.horizon();
  const double inv_n = 1.0 / static_cast<double>(n);

  out << "\\ robust optimal stopping: linearized bilinear program\n";
  out << "\\ N = " << n << ", T = " << horizon << ", epsilon = " << num(instance.epsilon()) << "\n";
  out << "Maximize\n obj:";
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& table = instance.level_table(i);
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t l = 0; l + 1 <= static_cast<std::size_t>(table.level_of[t]); ++l) {
        out << "\n   + " << num((table.levels[l + 1] - table.levels[l]) * inv_n) << " " << var('f', i, t, l);
        any = true;
      }
    }
  }
  if (!any) { out << " 0 " << var('b', 0, 0); }
  out << "\nSubject To\n";

  std::size_t row = 0;
  auto name = [&](const char* tag) { return std::string(" ") + tag + std::to_string(++row) + ": "; };

  for (std::size_t i = 0; i < n; ++i) {
    const auto& table = instance.level_table(i);
    const auto levels = static_cast<std::size_t>(table.size());
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t l = 0; l + 1 <= static_cast<std::size_t>(table.level_of[t]); ++l) {
        out << name("fb") << var('f', i, t, l) << " - " << var('b', i, t) << " <= 0\n";
        out << name("fw") << var('f', i, t, l) << " + " << var('w', i, t, l) << " <= 1\n";
      }
    }
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t l = 0; l < levels; ++l) {
        if (t + 1 < horizon) { out << name("wt") << var('w', i, t, l) << " - " << var('w', i, t + 1, l) << " <= 0\n"; }
        if (l + 1 < levels) { out << name("wl") << var('w', i, t, l) << " - " << var('w', i, t, l + 1) << " <= 0\n"; }
      }
    }
    out << name("w1") << var('w', i, 0, 0) << " = 0\n";
    for (std::size_t t = 0; t + 1 < horizon; ++t) {
      out << name("bw") << var('b', i, t) << " + " << var('w', i, t, 0) << " - " << var('w', i, t + 1, 0) << " = 0\n";
    }
    out << name("bT") << var('b', i, horizon - 1) << " + " << var('w', i, horizon - 1, 0) << " = 1\n";
    for (std::size_t t = 0; t + 1 < horizon; ++t) {
      out << name("bn") << var('b', i, t) << " - " << var('w', i, t + 1, 0) << " <= 0\n";
    }
    for (std::size_t t = 0; t < horizon; ++t) {
      const auto l = static_cast<std::size_t>(table.level_of[t]);
      for (std::size_t j = 0; j < n; ++j) {
        if (instance.intersects_unchecked(i, j, t)) {
          out << name("x") << var('b', j, t) << " - " << var('w', i, t, l) << " <= 0\n";
        }
      }
    }
  }

  out << "Bounds\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto levels = static_cast<std::size_t>(instance.level_table(i).size());
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t l = 0; l < levels; ++l) { out << " " << var('w', i, t, l) << " free\n"; }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& table = instance.level_table(i);
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t l = 0; l + 1 <= static_cast<std::size_t>(table.level_of[t]); ++l) {
        out << " " << var('f', i, t, l) << " free\n";
      }
    }
  }
  out << "Binaries\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < horizon; ++t) { out << " " << var('b', i, t) << "\n"; }
  }
  out << "End\n";
}

}  // namespace rostop
