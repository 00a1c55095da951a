#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bnmix/kernel.hpp"

namespace bnmix {

/// Exact first and second hitting-time moments of a target set.
struct HittingMoments {
  std::vector<Vertex> target;
  Eigen::VectorXd mean;      // E_x(tau_target)
  Eigen::VectorXd variance;  // Var_x(tau_target)
  double residual = 0.0;     // max residual of both solves

  double sd(Vertex x) const;
};

/// First-step analysis: (I - Q) h = 1 and (I - Q) u = 1 + 2 Q h on non-target states.
HittingMoments hitting_moments(const WalkKernel& k, const std::vector<Vertex>& target);

/// max_x |h(x) - 1 - sum_y P(x,y) h(y)| over non-target x.
double recurrence_residual(const WalkKernel& k, const HittingMoments& h);

/// Distribution of tau_target from `start` by absorbing-chain iteration, pmf[t] = P(tau = t),
/// stopped once the unabsorbed mass drops below `tail_mass` or after `max_steps`.
std::vector<double> hitting_time_pmf(const WalkKernel& k, Vertex start, const std::vector<Vertex>& target,
                                     double tail_mass = 1e-13, long max_steps = 100000000);

/// Exact P_start(tau_target >= t_prime) by absorbing-chain iteration.
double hitting_tail_exact(const WalkKernel& k, Vertex start, const std::vector<Vertex>& target, long t_prime);

}  // namespace bnmix
