#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bnmix/bottleneck.hpp"
#include "bnmix/graph.hpp"
#include "bnmix/hitting.hpp"
#include "bnmix/kernel.hpp"
#include "bnmix/mixing.hpp"
#include "bnmix/sampling.hpp"

namespace bnmix {

struct AnalysisParams {
  std::optional<double> epsilon;  // default (1 - pi(S) - max(Phi, 0)) / 2
  double gamma = 1.0;
  double delta = 1.0;
  double h_of_z = 0.0;  // 0 means use the graph distance of z
  double s_exp = 1.0;
  double prec_ratio = 0.5;   // "a much smaller than b" passes when a / b <= prec_ratio
  double upper_slack = 2.0;  // t_mix <= slack * upper is reported, not asserted
};

/// gamma = k^p, delta = k^t.
AnalysisParams analysis_for_k(double k, double p = 0.25, double t = 1.0, double s = 1.0);

/// Hitting-time moments the conditions are phrased in.
struct KeyMoments {
  double E_c = 0.0, Var_c = 0.0, sd_c = 0.0;
  double E_dD = 0.0, Var_dD = 0.0, sd_dD = 0.0;
  Vertex dD_vertex = 0;  // boundary vertex with the largest mean
  double zeta = 0.0;     // E_0(tau_dD) for the walk kept inside T0
  struct SubtreeHit {
    int index = -1;
    Vertex leaf = 0;
    Vertex attach = 0;
    double mean = 0.0;  // E_leaf(tau_attach)
  };
  std::vector<SubtreeHit> subtrees;
  HittingMoments to_origin;
};

KeyMoments key_moments(const RegionTaggedGraph& g, const WalkKernel& k);

/// A = Phi / (1 - pi_S - epsilon). Needs 0 <= Phi < 1 and 0 < epsilon < 1 - pi_S - Phi.
double compute_A(double phi, double pi_S, double epsilon);

struct HConditions {
  double h1_lhs = 0.0, h1_rhs = 0.0, h1_margin = 0.0;
  bool h1_holds = false;
  // H2: (E_c + gamma/2 sd_c) / A >= E_dD + delta sd_dD >= E_c + gamma/2 sd_c
  double h2_left_lhs = 0.0, h2_mid = 0.0, h2_right = 0.0;
  double h2_left_margin = 0.0, h2_right_margin = 0.0;
  bool h2_left_holds = false, h2_holds = false;
  double A = 1.0;
};

HConditions check_H1_H2(const KeyMoments& m, const AnalysisParams& p, double A);

enum class BoundMode { Theorem1, Theorem0 };
enum class Verdict { Theorem1, Theorem0, Theorem0b, None };
std::string to_string(Verdict v);
std::string to_string(BoundMode m);

/// (t_S, E_c + gamma sd_c), both divided by A in Theorem0 mode.
std::pair<double, double> bound_sandwich(const KeyMoments& m, const AnalysisParams& p, BoundMode mode, double A = 1.0);

/// Flag pattern a verdict is a pure function of.
struct VerdictFlags {
  bool h1 = false;
  bool h2 = false;
  bool c1 = false;
  bool c3 = false;
  bool h_a = false;
  bool h_b_theorem1 = false;
  bool h_b_theorem0 = false;
  bool A_defined = false;  // t_S > 0 and compute_A preconditions hold
  bool t0b_prec = false;   // E_dD much smaller than delta sd_dD
  bool t0b_chain = false;  // E_c <= delta sd_dD <= E_c / A
};

Verdict theorem_verdict(const VerdictFlags& f);

struct TheoremReport {
  std::string graph;
  double laziness = 0.0;
  AnalysisParams params;
  KeyMoments moments;
  double pi_S = 0.0;
  double phi_S = 0.0;
  double t_S = 0.0;
  double Phi = 0.0;
  double epsilon = 0.0;
  std::optional<double> A;
  std::string A_note;
  double c1_value = 0.0;
  std::optional<double> c2_observed;  // P(L <= h(z))
  double c2_claimed = 0.0;            // 1 / h(z)
  bool c3_first = false, c3_second = false;
  double h_a_ratio = 0.0;             // gamma sd_c / E_c
  std::optional<double> h_b_value;    // E_dD + E[L] E[lambda + theta]
  std::optional<double> h_b_ratio_theorem1, h_b_ratio_theorem0;
  double t0b_prec_ratio = 0.0;        // E_dD / (delta sd_dD)
  HConditions h;
  std::optional<ExcursionStats> excursions;
  std::pair<double, double> sandwich_theorem1{0.0, 0.0};
  std::optional<std::pair<double, double>> sandwich_theorem0;
  std::optional<long> t_mix_exact;
  double restriction_lower = 0.0;  // (1 - pi_S - eps) / phi_S, equal to t_S / A when A is defined
  std::optional<bool> lower_ok;    // restriction_lower <= t_mix
  std::optional<bool> upper_within_slack;
  VerdictFlags flags;
  Verdict verdict = Verdict::None;
  std::string implied;
};

struct HarnessOptions {
  std::size_t mc_samples = 10000;  // 0 skips the Monte Carlo inputs
  RngConfig rng;
  bool exact_tmix = true;
  SquaringOptions squaring;
};

TheoremReport check_conditions(const RegionTaggedGraph& g, const WalkKernel& k, const AnalysisParams& p,
                               const HarnessOptions& options = {});

struct CutoffInstance {
  double k = 0.0;
  const WalkKernel* kernel = nullptr;
  double epsilon = 0.1;
};

struct CutoffRow {
  double k = 0.0;
  double epsilon = 0.0;
  long t_mix_eps = 0;
  long t_mix_1m_eps = 0;
  double ratio = 0.0;
};

struct CutoffReport {
  std::vector<CutoffRow> rows;
  bool all_at_least_one = true;
  bool non_increasing = true;
  double kendall_tau = 0.0;
};

CutoffReport cutoff_diagnostic(const std::vector<CutoffInstance>& family, const SquaringOptions& options = {});

/// epsilon = fraction * (1 - pi(S) - max(Phi, 0)) with Phi = t_S phi_S.
double cutoff_epsilon(const RegionTaggedGraph& g, const WalkKernel& k, double gamma, double fraction = 0.1);

}  // namespace bnmix
