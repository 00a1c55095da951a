#include "bnmix/kernel.hpp"

#include <cmath>
#include <numeric>

#include "bnmix/error.hpp"

namespace bnmix {

WalkKernel transition_kernel(const Graph& g, double laziness) {
  if (!(laziness >= 0.0 && laziness < 1.0)) throw Error(Errc::InvalidParams, "laziness must lie in [0, 1)");
  const std::size_t n = g.vertex_count();
  if (n == 0) throw Error(Errc::DisconnectedGraph, "empty graph");
  if (!is_connected(g)) throw Error(Errc::DisconnectedGraph, "walk kernel needs a connected graph");

  WalkKernel k;
  k.laziness = laziness;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * g.edge_count() + n);
  for (Vertex x = 0; x < n; ++x) {
    const double wx = g.weighted_degree(x);
    if (wx == 0.0) {
      triplets.emplace_back(x, x, 1.0);  // single isolated vertex
      continue;
    }
    if (laziness > 0.0) triplets.emplace_back(x, x, laziness);
    const auto nbrs = g.neighbors(x);
    const auto ws = g.weights(x);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      triplets.emplace_back(x, nbrs[i], (1.0 - laziness) * ws[i] / wx);
    }
  }
  k.P.resize(static_cast<long>(n), static_cast<long>(n));
  k.P.setFromTriplets(triplets.begin(), triplets.end());
  k.P.makeCompressed();

  k.pi.resize(static_cast<long>(n));
  if (n == 1) {
    k.pi(0) = 1.0;
  } else {
    for (Vertex x = 0; x < n; ++x) k.pi(static_cast<long>(x)) = g.weighted_degree(x) / g.total_weight();
  }
  k.potentially_periodic = laziness == 0.0 && n > 1 && is_bipartite(g);

  for (long x = 0; x < k.P.outerSize(); ++x) {
    double sum = 0.0;
    for (SparseRM::InnerIterator it(k.P, x); it; ++it) sum += it.value();
    k.row_sum_error = std::max(k.row_sum_error, std::abs(sum - 1.0));
  }
  k.stationarity_error = stationarity_error(k, k.pi);
  return k;
}

double stationarity_error(const WalkKernel& k, const Eigen::VectorXd& mu) {
  const Eigen::VectorXd next = (mu.transpose() * k.P).transpose();
  return (next - mu).cwiseAbs().maxCoeff();
}

double tv_distance(std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != nu.size()) throw Error(Errc::DimensionMismatch, "distributions differ in length");
  const double smu = std::accumulate(mu.begin(), mu.end(), 0.0);
  const double snu = std::accumulate(nu.begin(), nu.end(), 0.0);
  if (std::abs(smu - 1.0) > 1e-9 || std::abs(snu - 1.0) > 1e-9) {
    throw Error(Errc::InvalidParams, "distributions must sum to 1");
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) l1 += std::abs(mu[i] - nu[i]);
  return 0.5 * l1;
}

}  // namespace bnmix
