#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bnmix/kernel.hpp"

namespace bnmix {

struct BottleneckReport {
  std::vector<Vertex> S;
  double pi_S = 0.0;
  Eigen::VectorXd mu_S;  // pi restricted to S and renormalized; zero off S
  double phi_S = 0.0;    // sum_{x in S, y notin S} mu_S(x) P(x,y)
  std::optional<double> t_S;
  std::optional<double> Phi;  // t_S * phi_S
  std::optional<double> A;
  std::optional<double> epsilon;
};

BottleneckReport bottleneck_ratio(const WalkKernel& k, const std::vector<Vertex>& S);

struct RestrictedEvolution {
  std::vector<double> distance;  // ||mu_S P^t - mu_S||_TV
  std::vector<double> bound;     // t * phi_S
  std::vector<long> violations;  // t with distance > bound + tol
  double phi_S = 0.0;
};

RestrictedEvolution restricted_evolution_check(const WalkKernel& k, const std::vector<Vertex>& S, long horizon,
                                               double tolerance = 1e-12);

}  // namespace bnmix
