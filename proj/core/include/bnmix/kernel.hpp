#pragma once

#include <span>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bnmix/graph.hpp"

namespace bnmix {

using SparseRM = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Transition operator of the (lazy) weighted simple random walk and its stationary law.
struct WalkKernel {
  SparseRM P;
  double laziness = 0.0;
  Eigen::VectorXd pi;
  bool potentially_periodic = false;  // non-lazy walk on a bipartite graph
  double row_sum_error = 0.0;         // max |sum_y P(x,y) - 1|
  double stationarity_error = 0.0;    // ||pi P - pi||_inf

  std::size_t size() const noexcept { return static_cast<std::size_t>(pi.size()); }
};

/// P(x,x) = alpha, P(x,y) = (1 - alpha) w(x,y) / w(x); pi(x) = w(x) / sum w.
WalkKernel transition_kernel(const Graph& g, double laziness);
inline WalkKernel transition_kernel(const RegionTaggedGraph& g, double laziness) {
  return transition_kernel(g.graph, laziness);
}

/// ||mu P - mu||_inf for an arbitrary row vector.
double stationarity_error(const WalkKernel& k, const Eigen::VectorXd& mu);

/// Total variation distance, computed as half the L1 distance.
double tv_distance(std::span<const double> mu, std::span<const double> nu);
inline double tv_distance(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
  return tv_distance(std::span<const double>(mu.data(), static_cast<std::size_t>(mu.size())),
                     std::span<const double>(nu.data(), static_cast<std::size_t>(nu.size())));
}

}  // namespace bnmix
