#pragma once

#include <vector>

#include "bnmix/kernel.hpp"

namespace bnmix {

struct StartPolicy {
  bool all_starts = true;
  std::vector<Vertex> starts;

  static StartPolicy all() { return {}; }
  static StartPolicy given(std::vector<Vertex> v) { return {false, std::move(v)}; }
};

/// d(t) = max over starts of ||P^t(x,.) - pi||_TV for t = 0..horizon.
struct MixingProfile {
  std::vector<double> d;
  std::vector<Vertex> argmax;   // maximizing start per t
  long horizon = 0;
  bool lower_envelope = false;  // true for GivenStarts: only a lower bound on the worst case
  bool periodic_warning = false;
  double laziness = 0.0;
};

constexpr std::size_t kDefaultExactBudget = 20000;

/// Iterates one distribution per start against P. Starts are processed in blocks
/// so memory stays at block * |V| doubles.
MixingProfile mixing_profile(const WalkKernel& k, long horizon, const StartPolicy& policy = StartPolicy::all(),
                             std::size_t exact_budget = kDefaultExactBudget);

/// Least t with d(t) <= epsilon; throws HorizonTooShort otherwise.
long mixing_time(const MixingProfile& profile, double epsilon);

struct SquaringOptions {
  std::size_t max_vertices = 6000;
  double memory_bytes = 3.0e9;  // guard on the dense matrices alive at once
  long max_time = long{1} << 40;
};

/// Exact t_mix(epsilon) for each epsilon by repeated squaring of the dense matrix
/// and bisection over t (valid since worst-case d(t) is non-increasing).
/// Only even powers P^(2^i) stay resident; odd ones are recomputed during bisection.
std::vector<long> exact_mixing_times(const WalkKernel& k, const std::vector<double>& epsilons,
                                     const SquaringOptions& options = {});

/// Worst-case d(t) at one time via squaring.
double worst_distance_at(const WalkKernel& k, long t, const SquaringOptions& options = {});

}  // namespace bnmix
