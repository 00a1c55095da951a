#include "bnmix/walker.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace bnmix {

Rng trajectory_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

double uniform01(Rng& rng) {
  // 53 random bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Walker::Walker(const WalkKernel& k) {
  const long n = k.P.outerSize();
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (long x = 0; x < n; ++x) {
    double acc = 0.0;
    for (SparseRM::InnerIterator it(k.P, x); it; ++it) {
      if (it.value() <= 0.0) continue;
      acc += it.value();
      targets_.push_back(static_cast<Vertex>(it.col()));
      cumulative_.push_back(acc);
    }
    // Close the row at exactly 1 so rounding never leaves a gap.
    if (!cumulative_.empty()) cumulative_.back() = 1.0;
    offsets_[static_cast<std::size_t>(x) + 1] = targets_.size();
  }
  double acc = 0.0;
  for (long x = 0; x < k.pi.size(); ++x) {
    acc += k.pi(x);
    pi_cumulative_.push_back(acc);
  }
  pi_cumulative_.back() = 1.0;
}

Vertex Walker::step(Vertex x, Rng& rng) const {
  const auto first = cumulative_.begin() + static_cast<long>(offsets_[x]);
  const auto last = cumulative_.begin() + static_cast<long>(offsets_[x + 1]);
  const double u = uniform01(rng);
  auto it = std::upper_bound(first, last, u);
  if (it == last) --it;
  return targets_[static_cast<std::size_t>(it - cumulative_.begin())];
}

Vertex Walker::sample(const std::vector<double>& cumulative, Rng& rng) {
  const double u = uniform01(rng);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<Vertex>(it - cumulative.begin());
}

}  // namespace bnmix
