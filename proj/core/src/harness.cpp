#include "bnmix/harness.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "bnmix/error.hpp"
#include "bnmix/stats.hpp"

namespace bnmix {

AnalysisParams analysis_for_k(double k, double p, double t, double s) {
  AnalysisParams a;
  a.gamma = std::pow(k, p);
  a.delta = std::pow(k, t);
  a.s_exp = s;
  return a;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Theorem1: return "Theorem1";
    case Verdict::Theorem0: return "Theorem0";
    case Verdict::Theorem0b: return "Theorem0b";
    case Verdict::None: return "None";
  }
  return "None";
}

std::string to_string(BoundMode m) { return m == BoundMode::Theorem1 ? "Theorem1" : "Theorem0"; }

namespace {

// One representative component per subtree index; copies are isomorphic.
std::vector<KeyMoments::SubtreeHit> subtree_hits(const RegionTaggedGraph& g, const WalkKernel& k) {
  const auto& layer = g.layer();
  const std::size_t n = g.vertex_count();
  std::vector<KeyMoments::SubtreeHit> out;
  if (layer.subtree_of.size() != n) return out;
  std::vector<bool> done_index;
  std::vector<bool> visited(n, false);
  for (Vertex root = 0; root < n; ++root) {
    const int idx = layer.subtree_of[root];
    if (idx < 0 || visited[root]) continue;
    if (static_cast<std::size_t>(idx) >= done_index.size()) done_index.resize(static_cast<std::size_t>(idx) + 1, false);
    std::vector<Vertex> comp{root};
    visited[root] = true;
    std::optional<Vertex> attach;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (Vertex w : g.graph.neighbors(comp[i])) {
        if (layer.subtree_of[w] == idx) {
          if (!visited[w]) {
            visited[w] = true;
            comp.push_back(w);
          }
        } else if (!attach) {
          attach = w;
        }
      }
    }
    if (done_index[static_cast<std::size_t>(idx)] || !attach) continue;
    done_index[static_cast<std::size_t>(idx)] = true;
    std::vector<bool> allowed(n, false);
    for (Vertex v : comp) allowed[v] = true;
    allowed[*attach] = true;
    const auto dist = bfs_distances(g.graph, *attach, allowed);
    Vertex leaf = comp.front();
    for (Vertex v : comp) {
      if (dist[v] > dist[leaf]) leaf = v;
    }
    const auto h = hitting_moments(k, {*attach});
    out.push_back({idx, leaf, *attach, h.mean(static_cast<long>(leaf))});
  }
  return out;
}

}  // namespace

KeyMoments key_moments(const RegionTaggedGraph& g, const WalkKernel& k) {
  if (!g.tagged()) throw Error(Errc::MissingInput, "conditions need a region-tagged graph");
  const auto& marks = g.layer().marks;
  KeyMoments m;
  m.to_origin = hitting_moments(k, {marks.origin});
  m.E_c = m.to_origin.mean(static_cast<long>(marks.c));
  m.Var_c = m.to_origin.variance(static_cast<long>(marks.c));
  m.sd_c = std::sqrt(m.Var_c);
  m.dD_vertex = marks.boundary.front();
  for (Vertex b : marks.boundary) {
    if (m.to_origin.mean(static_cast<long>(b)) > m.to_origin.mean(static_cast<long>(m.dD_vertex))) m.dD_vertex = b;
  }
  m.E_dD = m.to_origin.mean(static_cast<long>(m.dD_vertex));
  m.Var_dD = m.to_origin.variance(static_cast<long>(m.dD_vertex));
  m.sd_dD = std::sqrt(m.Var_dD);

  const auto in_t0 = g.mask_of(Region::T0);
  const auto [t0, index] = induced_subgraph(g.graph, in_t0);
  bool origin_on_boundary = false;
  for (Vertex b : marks.boundary) origin_on_boundary = origin_on_boundary || b == marks.origin;
  if (!origin_on_boundary && t0.vertex_count() >= 2) {
    const auto kt = transition_kernel(t0, k.laziness);
    std::vector<Vertex> target;
    for (Vertex b : marks.boundary) target.push_back(static_cast<Vertex>(index[b]));
    m.zeta = hitting_moments(kt, target).mean(index[marks.origin]);
  }
  m.subtrees = subtree_hits(g, k);
  return m;
}

double compute_A(double phi, double pi_S, double epsilon) {
  if (!(phi >= 0.0)) throw Error(Errc::InvalidParams, "Phi must be non-negative (t_S <= 0)");
  if (!(phi < 1.0)) throw Error(Errc::PhiTooLarge, "Phi = " + std::to_string(phi) + " is not below 1");
  if (!(epsilon > 0.0 && epsilon < 1.0 - pi_S - phi)) {
    throw Error(Errc::EpsilonOutOfRange, "epsilon must lie in (0, 1 - pi(S) - Phi)");
  }
  return phi / (1.0 - pi_S - epsilon);
}

HConditions check_H1_H2(const KeyMoments& m, const AnalysisParams& p, double A) {
  HConditions h;
  h.A = A;
  h.h1_lhs = m.E_c + 0.5 * p.gamma * m.sd_c;
  h.h1_rhs = m.E_dD + p.delta * m.sd_dD;
  h.h1_margin = h.h1_lhs - h.h1_rhs;
  h.h1_holds = h.h1_margin >= 0.0;
  h.h2_left_lhs = h.h1_lhs / A;
  h.h2_mid = h.h1_rhs;
  h.h2_right = h.h1_lhs;
  h.h2_left_margin = h.h2_left_lhs - h.h2_mid;
  h.h2_right_margin = h.h2_mid - h.h2_right;
  h.h2_left_holds = A > 0.0 && A <= 1.0 && h.h2_left_margin >= 0.0;
  h.h2_holds = h.h2_left_holds && h.h2_right_margin >= 0.0;
  return h;
}

std::pair<double, double> bound_sandwich(const KeyMoments& m, const AnalysisParams& p, BoundMode mode, double A) {
  const double lower = m.E_c - p.gamma * m.sd_c;
  const double upper = m.E_c + p.gamma * m.sd_c;
  if (mode == BoundMode::Theorem1) return {lower, upper};
  if (!(A > 0.0)) throw Error(Errc::InvalidParams, "A must be positive");
  return {lower / A, upper / A};
}

Verdict theorem_verdict(const VerdictFlags& f) {
  const bool c = f.c1 && f.c3;
  if (f.h1 && c && f.h_a && f.h_b_theorem1) return Verdict::Theorem1;
  if (f.A_defined && f.h2 && c && f.h_a && f.h_b_theorem0) return Verdict::Theorem0;
  if (f.A_defined && c && f.h_a && f.h_b_theorem0 && f.t0b_prec && f.t0b_chain) return Verdict::Theorem0b;
  return Verdict::None;
}

TheoremReport check_conditions(const RegionTaggedGraph& g, const WalkKernel& k, const AnalysisParams& p,
                               const HarnessOptions& options) {
  if (!g.tagged()) throw Error(Errc::MissingInput, "conditions need a region-tagged graph");
  if (k.size() != g.vertex_count()) throw Error(Errc::MissingInput, "kernel and graph differ in size");
  TheoremReport r;
  r.graph = g.name;
  r.laziness = k.laziness;
  r.params = p;

  const auto S = g.vertices_in(Region::S);
  const auto br = bottleneck_ratio(k, S);
  r.pi_S = br.pi_S;
  r.phi_S = br.phi_S;
  r.moments = key_moments(g, k);
  const auto& m = r.moments;
  r.t_S = m.E_c - p.gamma * m.sd_c;
  r.Phi = r.t_S * r.phi_S;
  r.epsilon = p.epsilon ? *p.epsilon : 0.5 * (1.0 - r.pi_S - std::max(r.Phi, 0.0));

  if (r.t_S <= 0.0) {
    r.A_note = "t_S <= 0, so Phi <= 0 and A is undefined";
  } else {
    try {
      r.A = compute_A(r.Phi, r.pi_S, r.epsilon);
    } catch (const Error& e) {
      r.A_note = e.what();
    }
  }

  double t0_mass = 0.0;
  const auto in_t0 = g.mask_of(Region::T0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (in_t0[v]) t0_mass += k.pi(static_cast<long>(v));
  }
  r.c1_value = 1.0 - t0_mass;

  r.c3_first = m.zeta <= m.E_dD * (1.0 + 1e-12);
  r.c3_second = true;
  for (const auto& s : m.subtrees) r.c3_second = r.c3_second && s.mean <= m.E_dD;

  r.h_a_ratio = m.E_c > 0.0 ? p.gamma * m.sd_c / m.E_c : std::numeric_limits<double>::infinity();
  const double h_of_z = p.h_of_z > 0.0 ? p.h_of_z : static_cast<double>(g.z_distance());
  r.c2_claimed = 1.0 / h_of_z;
  if (options.mc_samples > 0) {
    r.excursions = sample_excursions(g, k, options.mc_samples, options.rng);
    const auto& ex = *r.excursions;
    std::size_t below = 0, done = 0;
    for (long l : ex.L_samples) {
      if (l < 0) continue;
      ++done;
      below += static_cast<double>(l) <= h_of_z ? 1 : 0;
    }
    r.c2_observed = done ? static_cast<double>(below) / static_cast<double>(done) : 0.0;
    r.h_b_value = m.E_dD + ex.L.mean * (ex.lambda.mean + ex.theta.mean);
    const double scale = p.gamma * m.sd_c;
    r.h_b_ratio_theorem1 = scale > 0.0 ? *r.h_b_value / scale : std::numeric_limits<double>::infinity();
    if (r.A) r.h_b_ratio_theorem0 = scale > 0.0 ? *r.h_b_value * *r.A / scale : std::numeric_limits<double>::infinity();
  }
  r.t0b_prec_ratio = m.sd_dD > 0.0 ? m.E_dD / (p.delta * m.sd_dD) : std::numeric_limits<double>::infinity();
  r.h = check_H1_H2(m, p, r.A.value_or(1.0));

  r.sandwich_theorem1 = bound_sandwich(m, p, BoundMode::Theorem1);
  if (r.A && *r.A > 0.0) r.sandwich_theorem0 = bound_sandwich(m, p, BoundMode::Theorem0, *r.A);

  auto& f = r.flags;
  f.h1 = r.h.h1_holds;
  f.A_defined = r.A.has_value() && *r.A > 0.0;
  f.h2 = f.A_defined && r.h.h2_holds;
  f.c1 = r.c1_value <= p.prec_ratio;
  f.c3 = r.c3_first && r.c3_second;
  f.h_a = r.h_a_ratio <= p.prec_ratio;
  f.h_b_theorem1 = r.h_b_ratio_theorem1 && *r.h_b_ratio_theorem1 <= p.prec_ratio;
  f.h_b_theorem0 = r.h_b_ratio_theorem0 && *r.h_b_ratio_theorem0 <= p.prec_ratio;
  f.t0b_prec = r.t0b_prec_ratio <= p.prec_ratio;
  f.t0b_chain = f.A_defined && m.E_c <= p.delta * m.sd_dD && p.delta * m.sd_dD <= m.E_c / *r.A;
  r.verdict = theorem_verdict(f);

  std::ostringstream implied;
  if (r.verdict == Verdict::Theorem1) {
    implied << "t_mix(eps) ~ E_c(tau_0) = " << m.E_c;
  } else if (r.verdict != Verdict::None) {
    implied << "t_mix(eps) ~ E_c(tau_0) / A = " << m.E_c / *r.A;
  }
  r.implied = implied.str();

  r.restriction_lower = r.phi_S > 0.0 ? (1.0 - r.pi_S - r.epsilon) / r.phi_S : std::numeric_limits<double>::infinity();
  const bool eps_ok = r.epsilon > 0.0 && r.epsilon < 1.0;
  if (options.exact_tmix && eps_ok && k.size() <= options.squaring.max_vertices) {
    r.t_mix_exact = exact_mixing_times(k, {r.epsilon}, options.squaring).front();
    r.lower_ok = r.restriction_lower <= static_cast<double>(*r.t_mix_exact);
    if (r.verdict != Verdict::None) {
      const double upper = r.verdict == Verdict::Theorem1 ? r.sandwich_theorem1.second : r.sandwich_theorem0->second;
      r.upper_within_slack = static_cast<double>(*r.t_mix_exact) <= p.upper_slack * upper;
    }
  }
  return r;
}

double cutoff_epsilon(const RegionTaggedGraph& g, const WalkKernel& k, double gamma, double fraction) {
  const auto& marks = g.layer().marks;
  const auto br = bottleneck_ratio(k, g.vertices_in(Region::S));
  const auto h = hitting_moments(k, {marks.origin});
  const long c = static_cast<long>(marks.c);
  const double t_S = h.mean(c) - gamma * std::sqrt(h.variance(c));
  return fraction * (1.0 - br.pi_S - std::max(0.0, t_S * br.phi_S));
}

CutoffReport cutoff_diagnostic(const std::vector<CutoffInstance>& family, const SquaringOptions& options) {
  CutoffReport out;
  std::vector<double> ratios;
  for (const auto& inst : family) {
    if (!inst.kernel) throw Error(Errc::MissingInput, "cutoff instance without a kernel");
    const auto t = exact_mixing_times(*inst.kernel, {inst.epsilon, 1.0 - inst.epsilon}, options);
    CutoffRow row;
    row.k = inst.k;
    row.epsilon = inst.epsilon;
    row.t_mix_eps = t[0];
    row.t_mix_1m_eps = t[1];
    // t_mix(1 - eps) = 0 only when the chain starts within 1 - eps of pi everywhere.
    row.ratio = static_cast<double>(t[0]) / static_cast<double>(std::max(t[1], 1L));
    out.all_at_least_one = out.all_at_least_one && row.ratio >= 1.0;
    if (!ratios.empty() && row.ratio > ratios.back() + 1e-12) out.non_increasing = false;
    ratios.push_back(row.ratio);
    out.rows.push_back(row);
  }
  out.kendall_tau = kendall_tau(ratios);
  return out;
}

}  // namespace bnmix
