#include "bnmix/hitting.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

#include "bnmix/error.hpp"

namespace bnmix {

double HittingMoments::sd(Vertex x) const { return std::sqrt(std::max(0.0, variance(static_cast<long>(x)))); }

namespace {

std::vector<bool> target_mask(std::size_t n, const std::vector<Vertex>& target) {
  if (target.empty()) throw Error(Errc::InvalidParams, "target set is empty");
  std::vector<bool> mask(n, false);
  for (Vertex t : target) {
    if (t >= n) throw Error(Errc::InvalidParams, "target vertex out of range");
    mask[t] = true;
  }
  return mask;
}

}  // namespace

HittingMoments hitting_moments(const WalkKernel& k, const std::vector<Vertex>& target) {
  const std::size_t n = k.size();
  const auto is_target = target_mask(n, target);
  std::vector<long> index(n, -1);
  long free = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (!is_target[x]) index[x] = free++;
  }

  HittingMoments out;
  out.target = target;
  out.mean = Eigen::VectorXd::Zero(static_cast<long>(n));
  out.variance = Eigen::VectorXd::Zero(static_cast<long>(n));
  if (free == 0) return out;

  std::vector<Eigen::Triplet<double>> a_trip, q_trip;
  for (std::size_t x = 0; x < n; ++x) {
    if (is_target[x]) continue;
    const long i = index[x];
    a_trip.emplace_back(i, i, 1.0);
    for (SparseRM::InnerIterator it(k.P, static_cast<long>(x)); it; ++it) {
      const long j = index[static_cast<std::size_t>(it.col())];
      if (j < 0) continue;
      a_trip.emplace_back(i, j, -it.value());
      q_trip.emplace_back(i, j, it.value());
    }
  }
  Eigen::SparseMatrix<double> A(free, free), Q(free, free);
  A.setFromTriplets(a_trip.begin(), a_trip.end());
  Q.setFromTriplets(q_trip.begin(), q_trip.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw Error(Errc::SingularSystem, "I - Q is singular (target unreachable?)");
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(free);
  const Eigen::VectorXd h = lu.solve(ones);
  const Eigen::VectorXd rhs = ones + 2.0 * (Q * h);
  const Eigen::VectorXd u = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !h.allFinite() || !u.allFinite()) {
    throw Error(Errc::SingularSystem, "hitting-time solve failed");
  }
  out.residual = std::max((A * h - ones).cwiseAbs().maxCoeff() / std::max(1.0, h.cwiseAbs().maxCoeff()),
                          (A * u - rhs).cwiseAbs().maxCoeff() / std::max(1.0, u.cwiseAbs().maxCoeff()));
  for (std::size_t x = 0; x < n; ++x) {
    if (index[x] < 0) continue;
    const double m = h(index[x]);
    out.mean(static_cast<long>(x)) = m;
    out.variance(static_cast<long>(x)) = std::max(0.0, u(index[x]) - m * m);
  }
  return out;
}

double recurrence_residual(const WalkKernel& k, const HittingMoments& h) {
  const std::size_t n = k.size();
  const auto is_target = target_mask(n, h.target);
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (is_target[x]) continue;
    double rhs = 1.0;
    for (SparseRM::InnerIterator it(k.P, static_cast<long>(x)); it; ++it) rhs += it.value() * h.mean(it.col());
    worst = std::max(worst, std::abs(h.mean(static_cast<long>(x)) - rhs) / std::max(1.0, rhs));
  }
  return worst;
}

namespace {

// Advances the unabsorbed mass one step; returns the mass absorbed in that step.
double absorb_step(const WalkKernel& k, const std::vector<bool>& is_target, Eigen::VectorXd& mass) {
  Eigen::VectorXd next = (mass.transpose() * k.P).transpose();
  double absorbed = 0.0;
  for (long i = 0; i < next.size(); ++i) {
    if (is_target[static_cast<std::size_t>(i)]) {
      absorbed += next(i);
      next(i) = 0.0;
    }
  }
  mass.swap(next);
  return absorbed;
}

}  // namespace

std::vector<double> hitting_time_pmf(const WalkKernel& k, Vertex start, const std::vector<Vertex>& target,
                                     double tail_mass, long max_steps) {
  const auto is_target = target_mask(k.size(), target);
  if (is_target[start]) return {1.0};
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(static_cast<long>(k.size()));
  mass(static_cast<long>(start)) = 1.0;
  std::vector<double> pmf{0.0};
  double remaining = 1.0;
  for (long t = 1; t <= max_steps && remaining >= tail_mass; ++t) {
    pmf.push_back(absorb_step(k, is_target, mass));
    remaining = mass.sum();
  }
  return pmf;
}

double hitting_tail_exact(const WalkKernel& k, Vertex start, const std::vector<Vertex>& target, long t_prime) {
  if (t_prime <= 0) return 1.0;
  const auto is_target = target_mask(k.size(), target);
  if (is_target[start]) return 0.0;
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(static_cast<long>(k.size()));
  mass(static_cast<long>(start)) = 1.0;
  // P(tau >= t') is the mass still unabsorbed after t' - 1 steps.
  for (long t = 1; t < t_prime; ++t) absorb_step(k, is_target, mass);
  return std::clamp(mass.sum(), 0.0, 1.0);
}

}  // namespace bnmix
