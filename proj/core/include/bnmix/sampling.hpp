#pragma once

#include <vector>

#include "bnmix/graph.hpp"
#include "bnmix/kernel.hpp"
#include "bnmix/stats.hpp"
#include "bnmix/walker.hpp"

namespace bnmix {

// Stream ids keep the samplers' random sequences disjoint under one seed.
enum Stream : std::uint64_t {
  kStreamHitting = 1,
  kStreamL = 2,
  kStreamExcursion = 3,
  kStreamTail = 4,
  kStreamCoupling = 5,
};

/// 100 x E_start(tau_target) when the exact solve fits the budget, else |V|^3.
long default_step_budget(const WalkKernel& k, Vertex start, const std::vector<Vertex>& target,
                         std::size_t exact_budget = 20000);

struct HittingSamples {
  std::vector<long> samples;  // -1 marks a trajectory that ran out of steps
  std::size_t exceeded = 0;
  long step_budget = 0;
  Summary summary;  // over completed trajectories
};

HittingSamples sample_hitting_time(const WalkKernel& k, Vertex start, const std::vector<Vertex>& target,
                                   std::size_t n, const RngConfig& rng, long step_budget = 0);

struct LSamples {
  std::vector<long> samples;
  std::size_t exceeded = 0;
  Summary summary;
  double h_of_z = 0.0;
  double cdf_at_h = 0.0;       // observed P(L <= h(z))
  double claimed_bound = 0.0;  // 1 / h(z), reported side by side
  std::vector<double> cdf;     // cdf[l] = observed P(L <= l)
};

/// Walk from c to the origin, then count entries into T0 (the arrival at tau_0 included)
/// until some copy of z is hit.
LSamples sample_L(const RegionTaggedGraph& g, const WalkKernel& k, std::size_t n, const RngConfig& rng,
                  long step_budget = 0, double h_of_z = 0.0);

struct ExcursionStats {
  std::vector<long> L_samples;
  std::vector<long> theta_samples;
  std::vector<long> lambda_samples;
  std::vector<long> G_samples;
  double zeta_mean = 0.0;  // T0-restricted E_0(tau_dD)
  double xi_mean = 0.0;    // E_dD(tau_0)
  double p_hat = 1.0;      // fraction of T0 excursions from 0 reaching dD before returning
  std::size_t exceeded = 0;
  Summary L, theta, lambda, G;
  double rho = 0.0;  // weight fraction of bottleneck neighbours of 0
  double assembled_bound = 0.0;  // E[L]E[theta] + E[L]E[G]E[lambda] + zeta + xi
};

ExcursionStats sample_excursions(const RegionTaggedGraph& g, const WalkKernel& k, std::size_t n,
                                 const RngConfig& rng, long step_budget = 0);

struct TailEstimate {
  double probability = 0.0;
  double half_width = 0.0;
  std::size_t n = 0;
  bool exact = false;
};

/// P_x(tau_target >= t_prime): Monte Carlo with a Wilson interval, or exact when n == 0.
TailEstimate tail_probability(const WalkKernel& k, Vertex x, const std::vector<Vertex>& target, long t_prime,
                              std::size_t n, const RngConfig& rng);

}  // namespace bnmix
