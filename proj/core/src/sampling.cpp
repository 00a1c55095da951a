#include "bnmix/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "bnmix/error.hpp"
#include "bnmix/hitting.hpp"

namespace bnmix {

namespace {

std::vector<bool> as_mask(std::size_t n, const std::vector<Vertex>& set) {
  std::vector<bool> mask(n, false);
  for (Vertex v : set) mask.at(v) = true;
  return mask;
}

// Steps until the walk enters `stop`; -1 when the budget runs out.
long run_until(const Walker& w, Vertex x, const std::vector<bool>& stop, long budget, Rng& rng) {
  long t = 0;
  while (!stop[x]) {
    if (t >= budget) return -1;
    x = w.step(x, rng);
    ++t;
  }
  return t;
}

std::vector<long> completed(const std::vector<long>& v) {
  std::vector<long> out;
  for (long s : v) {
    if (s >= 0) out.push_back(s);
  }
  return out;
}

constexpr long kMaxRejections = 1000000;

}  // namespace

long default_step_budget(const WalkKernel& k, Vertex start, const std::vector<Vertex>& target,
                         std::size_t exact_budget) {
  const double n = static_cast<double>(k.size());
  double budget = n * n * n;
  if (k.size() <= exact_budget) {
    const auto h = hitting_moments(k, target);
    budget = 100.0 * std::max(1.0, h.mean(static_cast<long>(start)));
  }
  return static_cast<long>(std::min(budget, 1e15));
}

HittingSamples sample_hitting_time(const WalkKernel& k, Vertex start, const std::vector<Vertex>& target,
                                   std::size_t n, const RngConfig& cfg, long step_budget) {
  if (target.empty()) throw Error(Errc::InvalidParams, "target set is empty");
  if (n == 0) throw Error(Errc::InvalidParams, "need at least one trajectory");
  const Walker w(k);
  const auto stop = as_mask(k.size(), target);
  HittingSamples out;
  out.step_budget = step_budget > 0 ? step_budget : default_step_budget(k, start, target);
  out.samples.assign(n, 0);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    Rng rng = trajectory_rng(cfg.seed, kStreamHitting, i);
    out.samples[i] = run_until(w, start, stop, out.step_budget, rng);
  });
  out.exceeded = static_cast<std::size_t>(std::count(out.samples.begin(), out.samples.end(), -1L));
  out.summary = summarize(completed(out.samples));
  return out;
}

LSamples sample_L(const RegionTaggedGraph& g, const WalkKernel& k, std::size_t n, const RngConfig& cfg,
                  long step_budget, double h_of_z) {
  const auto& layer = g.layer();
  const auto& marks = layer.marks;
  const auto in_t0 = g.mask_of(Region::T0);
  const auto is_z = as_mask(g.vertex_count(), marks.z_set);
  const Walker w(k);
  const long budget = step_budget > 0 ? step_budget
                                      : default_step_budget(k, marks.c, {marks.origin}) +
                                            default_step_budget(k, marks.origin, marks.z_set);
  LSamples out;
  out.samples.assign(n, 0);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    Rng rng = trajectory_rng(cfg.seed, kStreamL, i);
    Vertex x = marks.c;
    long t = 0;
    while (x != marks.origin) {
      if (++t > budget) {
        out.samples[i] = -1;
        return;
      }
      x = w.step(x, rng);
    }
    long entries = 1;
    while (!is_z[x]) {
      if (++t > budget) {
        out.samples[i] = -1;
        return;
      }
      const Vertex y = w.step(x, rng);
      if (in_t0[y] && !in_t0[x]) ++entries;
      x = y;
    }
    out.samples[i] = entries;
  });
  out.exceeded = static_cast<std::size_t>(std::count(out.samples.begin(), out.samples.end(), -1L));
  const auto done = completed(out.samples);
  out.summary = summarize(done);
  out.h_of_z = h_of_z > 0.0 ? h_of_z : static_cast<double>(g.z_distance());
  out.claimed_bound = 1.0 / out.h_of_z;
  long max_l = 0;
  for (long l : done) max_l = std::max(max_l, l);
  out.cdf.assign(static_cast<std::size_t>(max_l) + 1, 0.0);
  for (long l : done) out.cdf[static_cast<std::size_t>(l)] += 1.0;
  double acc = 0.0;
  for (auto& c : out.cdf) {
    acc += c;
    c = done.empty() ? 0.0 : acc / static_cast<double>(done.size());
  }
  std::size_t below = 0;
  for (long l : done) below += static_cast<double>(l) <= out.h_of_z ? 1 : 0;
  out.cdf_at_h = done.empty() ? 0.0 : static_cast<double>(below) / static_cast<double>(done.size());
  return out;
}

ExcursionStats sample_excursions(const RegionTaggedGraph& g, const WalkKernel& k, std::size_t n,
                                 const RngConfig& cfg, long step_budget) {
  if (n == 0) throw Error(Errc::InvalidParams, "need at least one sample");
  const auto& marks = g.layer().marks;
  const Vertex o = marks.origin;
  const auto in_t0 = g.mask_of(Region::T0);
  const auto in_b = g.mask_of(Region::Bottleneck);
  const auto is_z = as_mask(g.vertex_count(), marks.z_set);
  const auto in_dd = as_mask(g.vertex_count(), marks.boundary);
  const Walker w(k);

  ExcursionStats out;
  const long budget = step_budget > 0 ? step_budget : default_step_budget(k, marks.boundary.front(), {o});

  // Which first moves out of 0 can start a valid excursion.
  double w_b = 0.0, w_all = 0.0;
  bool theta_possible = false, lambda_possible = false;
  {
    const auto nbrs = g.graph.neighbors(o);
    const auto ws = g.graph.weights(o);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      w_all += ws[i];
      if (in_b[nbrs[i]]) {
        w_b += ws[i];
        theta_possible = theta_possible || !is_z[nbrs[i]];
      }
      if (in_t0[nbrs[i]] && !in_dd[nbrs[i]]) lambda_possible = true;
    }
  }
  out.rho = w_all > 0.0 ? w_b / w_all : 0.0;

  out.L_samples = sample_L(g, k, n, cfg, 0).samples;
  out.theta_samples.assign(theta_possible ? n : 0, 0);
  out.lambda_samples.assign(n, 0);
  out.G_samples.assign(n, 0);
  std::vector<long> zeta(n, 0), xi(n, 0);
  std::vector<long> lambda_attempts(n, 0), lambda_hits(n, 0);

  // T0-restricted walk for zeta.
  std::vector<bool> keep = in_t0;
  const auto [t0_graph, t0_index] = induced_subgraph(g.graph, keep);
  const bool zeta_trivial = in_dd[o] || t0_graph.vertex_count() < 2;
  std::optional<WalkKernel> t0_kernel;
  std::optional<Walker> t0_walker;
  std::vector<bool> t0_dd(t0_graph.vertex_count(), false);
  if (!zeta_trivial) {
    t0_kernel = transition_kernel(t0_graph, k.laziness);
    t0_walker.emplace(*t0_kernel);
    for (Vertex b : marks.boundary) t0_dd[static_cast<std::size_t>(t0_index[b])] = true;
  }

  parallel_for(n, cfg.threads, [&](std::size_t i) {
    Rng rng = trajectory_rng(cfg.seed, kStreamExcursion, i);
    bool over = false;
    // theta: a bottleneck excursion from 0 that returns without touching z.
    if (theta_possible) {
      long value = -1;
      for (long attempt = 0; attempt < kMaxRejections && value < 0 && !over; ++attempt) {
        Vertex x = w.step(o, rng);
        if (!in_b[x] || is_z[x]) continue;
        long t = 1;
        while (x != o && !is_z[x]) {
          if (++t > budget) {
            over = true;
            break;
          }
          x = w.step(x, rng);
        }
        if (!over && x == o) value = t;
      }
      out.theta_samples[i] = value;
    }
    // lambda: a T0 excursion from 0 that returns without touching dD; misses feed p_hat.
    long lam = lambda_possible ? -1 : 0;
    for (long attempt = 0; lambda_possible && attempt < kMaxRejections && lam < 0 && !over; ++attempt) {
      Vertex x = w.step(o, rng);
      if (!in_t0[x] || x == o) continue;
      ++lambda_attempts[i];
      long t = 1;
      while (x != o && !in_dd[x]) {
        if (++t > budget) {
          over = true;
          break;
        }
        x = w.step(x, rng);
      }
      if (over) break;
      if (x == o) {
        lam = t;
      } else {
        ++lambda_hits[i];
      }
    }
    out.lambda_samples[i] = lam;
    // G: choices of a T0 neighbour at 0 before the first bottleneck neighbour.
    long gcount = 0;
    if (out.rho > 0.0) {
      for (;;) {
        const Vertex x = w.step(o, rng);
        if (x == o) continue;
        if (in_b[x]) break;
        ++gcount;
      }
    }
    out.G_samples[i] = gcount;
    if (!zeta_trivial) {
      zeta[i] = run_until(*t0_walker, static_cast<Vertex>(t0_index[o]), t0_dd, budget, rng);
    }
    xi[i] = run_until(w, marks.boundary.front(), as_mask(g.vertex_count(), {o}), budget, rng);
    if (over) out.lambda_samples[i] = -1;
  });

  auto count_bad = [](const std::vector<long>& v) {
    return static_cast<std::size_t>(std::count(v.begin(), v.end(), -1L));
  };
  out.exceeded = count_bad(out.L_samples) + count_bad(out.theta_samples) + count_bad(out.lambda_samples) +
                 count_bad(zeta) + count_bad(xi);
  out.L = summarize(completed(out.L_samples));
  out.theta = summarize(completed(out.theta_samples));
  out.lambda = summarize(completed(out.lambda_samples));
  out.G = summarize(out.G_samples);
  out.zeta_mean = summarize(completed(zeta)).mean;
  out.xi_mean = summarize(completed(xi)).mean;
  long attempts = 0, hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    attempts += lambda_attempts[i];
    hits += lambda_hits[i];
  }
  out.p_hat = attempts > 0 ? static_cast<double>(hits) / static_cast<double>(attempts) : 1.0;
  out.assembled_bound = out.L.mean * out.theta.mean + out.L.mean * out.G.mean * out.lambda.mean + out.zeta_mean +
                        out.xi_mean;
  return out;
}

TailEstimate tail_probability(const WalkKernel& k, Vertex x, const std::vector<Vertex>& target, long t_prime,
                              std::size_t n, const RngConfig& cfg) {
  TailEstimate out;
  if (n == 0) {
    out.exact = true;
    out.probability = hitting_tail_exact(k, x, target, t_prime);
    return out;
  }
  const auto stop = as_mask(k.size(), target);
  const Walker w(k);
  std::vector<char> survived(n, 0);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    if (t_prime <= 0) {
      survived[i] = 1;
      return;
    }
    Rng rng = trajectory_rng(cfg.seed, kStreamTail, i);
    // tau >= t' iff the target is not reached within t' - 1 steps.
    survived[i] = run_until(w, x, stop, t_prime - 1, rng) < 0 ? 1 : 0;
  });
  const auto successes = static_cast<std::size_t>(std::count(survived.begin(), survived.end(), 1));
  const auto p = wilson(successes, n);
  out.probability = p.estimate;
  out.half_width = p.half_width;
  out.n = n;
  return out;
}

}  // namespace bnmix
