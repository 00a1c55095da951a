#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "bnmix/kernel.hpp"

namespace bnmix {

using Rng = std::mt19937_64;

struct RngConfig {
  std::uint64_t seed = 20240601;
  unsigned threads = 1;  // does not affect results
};

/// Independent generator for trajectory `index` of stream `stream`; depends only on its arguments.
Rng trajectory_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Runs body(i) for i in [0, count) on up to `threads` threads; callers store results by index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Samples transitions from the rows of P via cumulative tables.
class Walker {
 public:
  explicit Walker(const WalkKernel& k);

  Vertex step(Vertex x, Rng& rng) const;
  /// Draws from an arbitrary probability vector (e.g. pi).
  static Vertex sample(const std::vector<double>& cumulative, Rng& rng);
  Vertex sample_stationary(Rng& rng) const { return sample(pi_cumulative_, rng); }

  std::size_t size() const noexcept { return offsets_.size() - 1; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
  std::vector<double> cumulative_;
  std::vector<double> pi_cumulative_;
};

double uniform01(Rng& rng);

}  // namespace bnmix
