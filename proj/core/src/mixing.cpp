#include "bnmix/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bnmix/error.hpp"

namespace bnmix {

namespace {

using DenseRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Per-row TV distance to pi; returns the max and writes the maximizing row.
double worst_row(const DenseRM& rows, const Eigen::VectorXd& pi, long& which) {
  double best = -1.0;
  which = 0;
  for (long i = 0; i < rows.rows(); ++i) {
    const double d = 0.5 * (rows.row(i).transpose() - pi).cwiseAbs().sum();
    if (d > best) {
      best = d;
      which = i;
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(Errc::EpsilonOutOfRange, "epsilon must lie in (0, 1)");
}

}  // namespace

MixingProfile mixing_profile(const WalkKernel& k, long horizon, const StartPolicy& policy, std::size_t exact_budget) {
  if (horizon < 0) throw Error(Errc::InvalidParams, "horizon must be >= 0");
  const std::size_t n = k.size();
  if (policy.all_starts && n > exact_budget) {
    throw Error(Errc::BudgetExceeded, std::to_string(n) + " vertices exceed the exact budget of " +
                                          std::to_string(exact_budget));
  }
  std::vector<Vertex> starts = policy.starts;
  if (policy.all_starts) {
    starts.resize(n);
    for (Vertex v = 0; v < n; ++v) starts[v] = v;
  }
  if (starts.empty()) throw Error(Errc::InvalidParams, "no start vertices");
  for (Vertex s : starts) {
    if (s >= n) throw Error(Errc::InvalidParams, "start vertex out of range");
  }

  MixingProfile out;
  out.horizon = horizon;
  out.lower_envelope = !policy.all_starts;
  out.laziness = k.laziness;
  out.d.assign(static_cast<std::size_t>(horizon) + 1, -1.0);
  out.argmax.assign(static_cast<std::size_t>(horizon) + 1, 0);

  const std::size_t block = std::max<std::size_t>(1, std::min<std::size_t>(starts.size(), (1u << 24) / n));
  for (std::size_t first = 0; first < starts.size(); first += block) {
    const std::size_t count = std::min(block, starts.size() - first);
    DenseRM rows = DenseRM::Zero(static_cast<long>(count), static_cast<long>(n));
    for (std::size_t i = 0; i < count; ++i) rows(static_cast<long>(i), static_cast<long>(starts[first + i])) = 1.0;
    for (long t = 0; t <= horizon; ++t) {
      if (t > 0) {
        DenseRM next = rows * k.P;
        rows.swap(next);
      }
      long which = 0;
      const double d = worst_row(rows, k.pi, which);
      auto& slot = out.d[static_cast<std::size_t>(t)];
      if (d > slot) {
        slot = d;
        out.argmax[static_cast<std::size_t>(t)] = starts[first + static_cast<std::size_t>(which)];
      }
    }
  }
  if (k.laziness == 0.0 && horizon >= 1) {
    const double last = out.d.back();
    const double prev = out.d[out.d.size() - 2];
    out.periodic_warning = last > 1e-12 && last >= prev - 1e-15;
  }
  return out;
}

long mixing_time(const MixingProfile& profile, double epsilon) {
  check_epsilon(epsilon);
  for (std::size_t t = 0; t < profile.d.size(); ++t) {
    if (profile.d[t] <= epsilon) return static_cast<long>(t);
  }
  throw HorizonTooShort(profile.horizon, profile.d.empty() ? 1.0 : profile.d.back());
}

namespace {

// P^(2^i) for even i plus the current top level; odd levels are rebuilt on demand,
// which roughly halves the memory of the ladder.
class PowerLadder {
 public:
  explicit PowerLadder(DenseRM p) { kept_.emplace(0, std::move(p)); }

  std::size_t top() const noexcept { return top_; }
  const DenseRM& top_power() const { return kept_.at(top_); }

  void push(DenseRM next) {
    if (top_ % 2 == 1) kept_.erase(top_);
    kept_.emplace(++top_, std::move(next));
  }

  const DenseRM& level(std::size_t i, DenseRM& scratch) const {
    if (const auto it = kept_.find(i); it != kept_.end()) return it->second;
    const DenseRM& half = kept_.at(i - 1);
    scratch = half * half;
    return scratch;
  }

 private:
  std::map<std::size_t, DenseRM> kept_;
  std::size_t top_ = 0;
};

// Dense matrices alive with `levels` ladder levels: even levels, top, cur, cand, scratch.
std::size_t matrices_for(std::size_t levels) { return levels / 2 + 5; }

double worst(const DenseRM& m, const Eigen::VectorXd& pi) {
  long which = 0;
  return worst_row(m, pi, which);
}

void guard(std::size_t n, std::size_t matrices, const SquaringOptions& options) {
  if (n > options.max_vertices) {
    throw Error(Errc::BudgetExceeded, std::to_string(n) + " vertices exceed the squaring budget of " +
                                          std::to_string(options.max_vertices));
  }
  const double bytes = static_cast<double>(n) * static_cast<double>(n) * 8.0 * static_cast<double>(matrices);
  if (bytes > options.memory_bytes) throw Error(Errc::BudgetExceeded, "stored matrix powers exceed the memory guard");
}

}  // namespace

std::vector<long> exact_mixing_times(const WalkKernel& k, const std::vector<double>& epsilons,
                                     const SquaringOptions& options) {
  for (double e : epsilons) check_epsilon(e);
  std::vector<long> out(epsilons.size(), 0);
  if (epsilons.empty()) return out;
  const std::size_t n = k.size();
  guard(n, matrices_for(1), options);
  const Eigen::VectorXd& pi = k.pi;

  const double d0 = worst(DenseRM::Identity(static_cast<long>(n), static_cast<long>(n)), pi);
  const double target = *std::min_element(epsilons.begin(), epsilons.end());
  PowerLadder ladder{DenseRM(k.P)};
  std::vector<double> dpow{worst(ladder.top_power(), pi)};
  while (dpow.back() > target) {
    if ((long{1} << (ladder.top() + 1)) > options.max_time) {
      throw HorizonTooShort(long{1} << ladder.top(), dpow.back());
    }
    guard(n, matrices_for(ladder.top() + 2), options);
    DenseRM sq = ladder.top_power() * ladder.top_power();
    ladder.push(std::move(sq));
    dpow.push_back(worst(ladder.top_power(), pi));
  }

  DenseRM scratch;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    const double eps = epsilons[e];
    if (d0 <= eps) {
      out[e] = 0;
      continue;
    }
    // Smallest level with d(2^i) <= eps; then d(2^(i-1)) > eps.
    std::size_t level = 0;
    while (dpow[level] > eps) ++level;
    if (level == 0) {
      out[e] = 1;
      continue;
    }
    // Invariant: d(t) > eps for the accumulated t.
    DenseRM cur = ladder.level(level - 1, scratch);
    long t = long{1} << (level - 1);
    for (std::size_t i = level - 1; i-- > 0;) {
      DenseRM cand = cur * ladder.level(i, scratch);
      if (worst(cand, pi) > eps) {
        cur.swap(cand);
        t += long{1} << i;
      }
    }
    out[e] = t + 1;
  }
  return out;
}

double worst_distance_at(const WalkKernel& k, long t, const SquaringOptions& options) {
  if (t < 0) throw Error(Errc::InvalidParams, "t must be >= 0");
  const std::size_t n = k.size();
  guard(n, 3, options);
  DenseRM result = DenseRM::Identity(static_cast<long>(n), static_cast<long>(n));
  DenseRM base(k.P);
  while (t > 0) {
    if (t & 1) result = (result * base).eval();
    t >>= 1;
    if (t > 0) base = (base * base).eval();
  }
  return worst(result, k.pi);
}

}  // namespace bnmix
