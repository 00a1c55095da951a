#pragma once

#include <vector>

#include "bnmix/graph.hpp"
#include "bnmix/kernel.hpp"
#include "bnmix/walker.hpp"

namespace bnmix {

struct CouplingResult {
  Vertex start = 0;
  std::vector<double> survival;    // P(tau_couple > t), t = 0..horizon
  std::vector<double> half_width;  // Wilson 95% half-widths
  std::size_t n = 0;
  double outside_D_at_tau0 = 0.0;  // fraction of Y outside T0 u B when X first hits 0
  std::size_t mirrored_steps = 0;
  double marginal_chi2 = 0.0;      // Y's mirrored-phase transitions against P
  int marginal_dof = 0;
  double marginal_p_value = 1.0;
  double marginal_max_abs_z = 0.0;
};

/// X starts at `start`, Y from pi. Phase 1: independent until X hits 0. Phase 2: independent
/// until they meet or stand at equal T0 level (distance to 0 inside T0). Phase 3: when X
/// changes level, Y moves to a neighbour whose level changes the same way (or holds); if X
/// leaves T0 the pair drops back to phase 2. Untagged graphs use independent moves throughout.
CouplingResult coupling_experiment(const RegionTaggedGraph& g, const WalkKernel& k, Vertex start, long horizon,
                                   std::size_t n, const RngConfig& rng);

}  // namespace bnmix
