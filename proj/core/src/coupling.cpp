#include "bnmix/coupling.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <map>

#include "bnmix/error.hpp"
#include "bnmix/sampling.hpp"
#include "bnmix/stats.hpp"

namespace bnmix {

namespace {

struct Transition {
  Vertex from;
  Vertex to;
};

}  // namespace

CouplingResult coupling_experiment(const RegionTaggedGraph& g, const WalkKernel& k, Vertex start, long horizon,
                                   std::size_t n, const RngConfig& cfg) {
  if (horizon < 0) throw Error(Errc::InvalidParams, "horizon must be >= 0");
  if (n == 0) throw Error(Errc::InvalidParams, "need at least one trajectory");
  const std::size_t nv = g.vertex_count();
  if (start >= nv) throw Error(Errc::InvalidParams, "start vertex out of range");
  const Walker w(k);

  const bool tagged = g.tagged();
  std::vector<long> level(nv, -1);
  std::vector<bool> in_d(nv, true);
  Vertex origin = 0;
  if (tagged) {
    origin = g.layer().marks.origin;
    level = bfs_distances(g.graph, origin, g.mask_of(Region::T0));
    for (Vertex v = 0; v < nv; ++v) in_d[v] = g.layer().region_of[v] != Region::S;
  }

  std::vector<long> tau(n, 0);
  std::vector<char> outside(n, 0);
  std::vector<std::vector<Transition>> mirrored(n);

  parallel_for(n, cfg.threads, [&](std::size_t i) {
    Rng rng = trajectory_rng(cfg.seed, kStreamCoupling, i);
    Vertex x = start;
    Vertex y = w.sample_stationary(rng);
    int phase = tagged ? 1 : 2;
    if (tagged && x == origin) {
      outside[i] = in_d[y] ? 0 : 1;
      phase = 2;
    }
    long t = 0;
    while (x != y && t <= horizon) {
      if (phase == 2 && tagged && level[x] >= 0 && level[x] == level[y]) phase = 3;
      if (phase == 3) {
        const Vertex nx = w.step(x, rng);
        if (level[nx] < 0) {
          // X left T0: Y moves on its own this step and the pair resumes phase 2.
          y = w.step(y, rng);
          phase = 2;
        } else {
          const long delta = level[nx] - level[x];
          Vertex ny = y;
          if (delta != 0) {
            const auto nbrs = g.graph.neighbors(y);
            const auto ws = g.graph.weights(y);
            double total = 0.0;
            for (std::size_t j = 0; j < nbrs.size(); ++j) {
              if (level[nbrs[j]] >= 0 && level[nbrs[j]] == level[y] + delta) total += ws[j];
            }
            if (total > 0.0) {
              double u = uniform01(rng) * total;
              for (std::size_t j = 0; j < nbrs.size(); ++j) {
                if (level[nbrs[j]] < 0 || level[nbrs[j]] != level[y] + delta) continue;
                ny = nbrs[j];
                u -= ws[j];
                if (u < 0.0) break;
              }
            }
          }
          mirrored[i].push_back({y, ny});
          x = nx;
          y = ny;
        }
      } else {
        x = w.step(x, rng);
        y = w.step(y, rng);
        if (phase == 1 && x == origin) {
          outside[i] = in_d[y] ? 0 : 1;
          phase = 2;
        }
      }
      ++t;
    }
    tau[i] = x == y ? t : horizon + 1;
  });

  CouplingResult out;
  out.start = start;
  out.n = n;
  std::vector<std::size_t> alive(static_cast<std::size_t>(horizon) + 1, 0);
  for (long tt : tau) {
    for (long t = 0; t < std::min(tt, horizon + 1); ++t) ++alive[static_cast<std::size_t>(t)];
  }
  for (std::size_t t = 0; t < alive.size(); ++t) {
    const auto p = wilson(alive[t], n);
    out.survival.push_back(p.estimate);
    out.half_width.push_back(p.half_width);
  }
  std::size_t out_count = 0;
  for (char c : outside) out_count += static_cast<std::size_t>(c);
  out.outside_D_at_tau0 = static_cast<double>(out_count) / static_cast<double>(n);

  // Marginal check: pooled per-source transition counts of Y in phase 3 against rows of P.
  std::map<Vertex, std::map<Vertex, double>> counts;
  for (const auto& traj : mirrored) {
    for (const auto& tr : traj) {
      counts[tr.from][tr.to] += 1.0;
      ++out.mirrored_steps;
    }
  }
  for (const auto& [from, row] : counts) {
    double total = 0.0;
    for (const auto& [to, c] : row) total += c;
    if (total < 50.0) continue;
    std::vector<double> observed, probs;
    for (SparseRM::InnerIterator it(k.P, static_cast<long>(from)); it; ++it) {
      const auto found = row.find(static_cast<Vertex>(it.col()));
      observed.push_back(found == row.end() ? 0.0 : found->second);
      probs.push_back(it.value());
      const double e = total * it.value();
      const double z = (observed.back() - e) / std::sqrt(std::max(e * (1.0 - it.value()), 1e-300));
      out.marginal_max_abs_z = std::max(out.marginal_max_abs_z, std::abs(z));
    }
    double seen = 0.0;
    for (double o : observed) seen += o;
    if (seen < total) {
      // Transitions to a non-neighbour cannot come from P at all.
      out.marginal_max_abs_z = std::numeric_limits<double>::infinity();
    }
    const auto gof = chi_square_gof(observed, probs);
    out.marginal_chi2 += gof.statistic;
    out.marginal_dof += gof.dof;
  }
  out.marginal_p_value = chi_square_sf(out.marginal_chi2, out.marginal_dof);
  return out;
}

}  // namespace bnmix
