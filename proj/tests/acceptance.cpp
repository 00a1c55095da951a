// Acceptance run: one PASS/FAIL line per criterion, details in <out>/acceptance.json.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bnmix/bottleneck.hpp"
#include "bnmix/builders.hpp"
#include "bnmix/config.hpp"
#include "bnmix/coupling.hpp"
#include "bnmix/error.hpp"
#include "bnmix/experiment.hpp"
#include "bnmix/fixtures.hpp"
#include "bnmix/harness.hpp"
#include "bnmix/hitting.hpp"
#include "bnmix/kernel.hpp"
#include "bnmix/mixing.hpp"
#include "bnmix/sampling.hpp"
#include "bnmix/stats.hpp"

using namespace bnmix;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
  json detail = json::object();
};

RngConfig rng_with(std::uint64_t seed) {
  RngConfig c;
  c.seed = seed;
  return c;
}

std::string fmt(double x, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

// Scaled family member: one graph copy (as in the paradigm2-scaled fixture) and q
// line copies chosen so T0 carries four times the mass of B u S.
RegionTaggedGraph paradigm2_ratio4(int k) {
  ParadigmParams p;
  p.k = k;
  p.r = 1;
  p.t0_mass_ratio = 4.0;
  p.lump_copies = true;
  return build_paradigm2(p);
}

RegionTaggedGraph paradigm2_default(int k) {
  ParadigmParams p;
  p.k = k;
  p.lump_copies = true;
  return build_paradigm2(p);
}

// Every graph the stationarity and lower-bound checks sweep.
std::vector<RegionTaggedGraph> sweep_graphs() {
  std::vector<RegionTaggedGraph> out;
  for (const auto& f : list_fixtures()) out.push_back(make_fixture(f.name));
  out.push_back(complete_graph(12));
  for (int k : {2, 3}) out.push_back(paradigm2_default(k));
  for (int k : {2, 3, 4}) out.push_back(paradigm2_ratio4(k));
  {
    ParadigmParams p;
    p.k = 3;
    out.push_back(build_paradigm1(p));
  }
  {
    ParadigmParams p;
    p.k = 2;
    p.lump_copies = true;
    out.push_back(build_paradigm3(p));
  }
  return out;
}

Outcome stationarity() {
  Outcome o;
  double worst = 0.0;
  std::size_t kernels = 0;
  for (const auto& g : sweep_graphs()) {
    if (g.vertex_count() > 20000) continue;
    for (double a : {0.0, 0.5}) {
      const auto k = transition_kernel(g, a);
      o.detail[g.name + "@" + fmt(a)] = k.stationarity_error;
      worst = std::max(worst, k.stationarity_error);
      ++kernels;
    }
  }
  o.pass = worst < 1e-12;
  o.summary = std::to_string(kernels) + " kernels, max ||pi P - pi||_inf = " + fmt(worst);
  return o;
}

Outcome path_moments() {
  Outcome o;
  double worst_mean = 0.0, worst_oracle = 0.0, min_ratio = 1e300, max_ratio = 0.0;
  for (std::size_t m = 2; m <= 20; ++m) {
    const auto k = transition_kernel(path_fixture(m), 0.0);
    const auto h = hitting_moments(k, {0});
    const double mm = static_cast<double>(m);
    const double mean = h.mean(static_cast<long>(m));
    const double var = h.variance(static_cast<long>(m));
    const auto pmf = hitting_time_pmf(k, m, {0}, 1e-16);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t t = 0; t < pmf.size(); ++t) {
      const double tt = static_cast<double>(t);
      m1 += tt * pmf[t];
      m2 += tt * tt * pmf[t];
    }
    const double ratio = var / (mm * mm * mm * mm);
    worst_mean = std::max(worst_mean, std::abs(mean / (mm * mm) - 1.0));
    worst_oracle = std::max(worst_oracle, std::abs((m2 - m1 * m1) / var - 1.0));
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    o.detail[std::to_string(m)] = {{"mean", mean}, {"variance", var}, {"oracle_variance", m2 - m1 * m1}};
  }
  o.pass = worst_mean <= 1e-9 && worst_oracle <= 1e-8 && min_ratio >= 0.1 && max_ratio <= 10.0;
  o.summary = "max rel err mean " + fmt(worst_mean) + ", variance vs oracle " + fmt(worst_oracle) +
              ", Var/m^4 in [" + fmt(min_ratio) + ", " + fmt(max_ratio) + "]";
  return o;
}

Outcome triangle() {
  Outcome o;
  const auto k = transition_kernel(make_fixture("triangle"), 0.0);
  const auto p = mixing_profile(k, 40);
  double worst = 0.0;
  for (std::size_t t = 0; t < p.d.size(); ++t) {
    worst = std::max(worst, std::abs(p.d[t] - (2.0 / 3.0) * std::pow(0.5, static_cast<double>(t))));
  }
  const long tm = mixing_time(p, 0.25);
  o.pass = worst <= 1e-12 && tm == 2;
  o.summary = "max |d(t) - (2/3)2^-t| = " + fmt(worst) + ", t_mix(1/4) = " + std::to_string(tm);
  return o;
}

Outcome restriction() {
  Outcome o;
  std::size_t violations = 0, checked = 0;
  struct Case {
    const char* name;
    long horizon;
  };
  for (const Case c : {Case{"dumbbell", 500}, Case{"paradigm2-scaled", 5000}}) {
    const auto g = make_fixture(c.name);
    for (double a : {0.0, 0.5}) {
      const auto r = restricted_evolution_check(transition_kernel(g, a), g.vertices_in(Region::S), c.horizon);
      violations += r.violations.size();
      checked += r.distance.size();
      o.detail[std::string(c.name) + "@" + fmt(a)] = {{"phi_S", r.phi_S}, {"violations", r.violations.size()}};
    }
  }
  o.pass = violations == 0;
  o.summary = std::to_string(checked) + " (graph, alpha, t) points, " + std::to_string(violations) + " violations";
  return o;
}

Outcome lower_bound() {
  Outcome o;
  std::size_t tested = 0, violations = 0;
  HarnessOptions opts;
  opts.mc_samples = 0;
  for (const auto& g : sweep_graphs()) {
    if (!g.tagged() || g.vertex_count() > opts.squaring.max_vertices) continue;
    const auto k = transition_kernel(g, 0.5);
    const auto r = check_conditions(g, k, analysis_for_k(2), opts);
    if (!(r.Phi < 1.0) || !r.t_mix_exact) continue;
    ++tested;
    const bool ok = r.lower_ok.value_or(false);
    if (!ok) ++violations;
    o.detail[g.name] = {{"epsilon", r.epsilon},
                        {"Phi", r.Phi},
                        {"t_S", r.t_S},
                        {"lower", r.restriction_lower},
                        {"t_mix", *r.t_mix_exact},
                        {"ok", ok}};
  }
  o.pass = tested > 0 && violations == 0;
  o.summary = std::to_string(tested) + " fixtures, " + std::to_string(violations) + " with t_mix(eps) < t_S/A";
  return o;
}

Outcome mc_agreement() {
  Outcome o;
  struct Case {
    std::string name;
    RegionTaggedGraph g;
    Vertex start;
    Vertex target;
  };
  std::vector<Case> cases;
  cases.push_back({"K2", make_fixture("K2"), 1, 0});
  cases.push_back({"triangle", make_fixture("triangle"), 2, 0});
  for (const char* name : {"dumbbell", "path-m", "paradigm1-scaled", "paradigm2-scaled", "paradigm3-scaled"}) {
    auto g = make_fixture(name);
    const auto& mk = g.layer().marks;
    cases.push_back({name, g, mk.c, mk.origin});
  }
  std::size_t agree = 0;
  for (const auto& c : cases) {
    const auto k = transition_kernel(c.g, 0.5);
    const auto h = hitting_moments(k, {c.target});
    const auto s = sample_hitting_time(k, c.start, {c.target}, 100000, rng_with(606));
    const double exact = h.mean(static_cast<long>(c.start));
    const double z = s.summary.se_mean > 0 ? (s.summary.mean - exact) / s.summary.se_mean
                                           : (s.summary.mean == exact ? 0.0 : 1e9);
    const bool ok = std::abs(z) <= 3.0 && s.exceeded == 0;
    agree += ok ? 1 : 0;
    o.detail[c.name] = {{"exact", exact}, {"mc_mean", s.summary.mean}, {"se", s.summary.se_mean}, {"z", z},
                        {"exceeded", s.exceeded}};
  }
  o.pass = agree == cases.size() && agree >= 5;
  o.summary = std::to_string(agree) + "/" + std::to_string(cases.size()) + " fixtures within 3 SE (n = 1e5)";
  return o;
}

Outcome coupling() {
  Outcome o;
  const auto g = make_fixture("paradigm2-scaled");
  const auto k = transition_kernel(g, 0.5);
  const long horizon = 2000;
  const auto prof = mixing_profile(k, horizon);
  std::map<Vertex, CouplingResult> runs;
  for (long t = 1; t <= horizon; ++t) {
    const Vertex x = prof.argmax[static_cast<std::size_t>(t)];
    if (!runs.count(x)) runs.emplace(x, coupling_experiment(g, k, x, horizon, 10000, rng_with(707)));
  }
  long failures = 0, first_fail = -1;
  double min_slack = 1e300;
  for (long t = 1; t <= horizon; ++t) {
    const auto i = static_cast<std::size_t>(t);
    const auto& r = runs.at(prof.argmax[i]);
    const double slack = r.survival[i] + 2.0 * r.half_width[i] - prof.d[i];
    min_slack = std::min(min_slack, slack);
    if (slack < 0) {
      ++failures;
      if (first_fail < 0) first_fail = t;
    }
  }
  for (const auto& [x, r] : runs) {
    o.detail["start_" + std::to_string(x)] = {{"marginal_chi2", r.marginal_chi2},
                                              {"marginal_dof", r.marginal_dof},
                                              {"marginal_p_value", r.marginal_p_value},
                                              {"mirrored_steps", r.mirrored_steps},
                                              {"outside_D_at_tau0", r.outside_D_at_tau0}};
  }
  o.pass = failures == 0;
  o.summary = std::to_string(runs.size()) + " worst starts, t = 1.." + std::to_string(horizon) +
              ", min(P(tau>t) + 2CI - d(t)) = " + fmt(min_slack) + ", failures " + std::to_string(failures) +
              (first_fail > 0 ? " (first at t = " + std::to_string(first_fail) + ")" : "");
  return o;
}

Outcome tail_lemma() {
  Outcome o;
  const auto g = make_fixture("paradigm1-scaled");
  const auto k = transition_kernel(g, 0.5);
  const auto m = key_moments(g, k);
  AnalysisParams p;
  p.gamma = p.delta = 4.0;
  const double A = 1.0;
  const auto h = check_H1_H2(m, p, A);
  const double t_prime_real = (m.E_c + 0.5 * p.gamma * m.sd_c) / A;
  const long t_prime = static_cast<long>(std::ceil(t_prime_real));
  const Vertex origin = g.layer().marks.origin;

  // One absorbing-chain sweep gives P_x(tau_0 >= t') for every x at once.
  Eigen::VectorXd alive = Eigen::VectorXd::Ones(static_cast<long>(g.vertex_count()));
  alive(static_cast<long>(origin)) = 0.0;
  for (long s = 1; s < t_prime; ++s) {
    alive = k.P * alive;
    alive(static_cast<long>(origin)) = 0.0;
  }
  std::map<std::string, double> by_class;
  const auto& L = g.layer();
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    std::string cls = to_string(L.region_of[x]);
    if (L.subtree_of[x] >= 0) cls += "/T" + std::to_string(L.subtree_of[x]);
    double& v = by_class[cls];
    v = std::max(v, alive(static_cast<long>(x)));
  }
  const double bound = 16.0 / (p.gamma * p.gamma) + 1.0 / (p.delta * p.delta) + 0.02;
  double worst = 0.0;
  for (const auto& [cls, v] : by_class) {
    worst = std::max(worst, v);
    o.detail["classes"][cls] = v;
  }
  const auto mc = tail_probability(k, L.marks.c, {origin}, t_prime, 10000, rng_with(808));
  o.detail["t_prime"] = t_prime;
  o.detail["A"] = A;
  o.detail["h2_left_margin"] = h.h2_left_margin;
  o.detail["mc_at_c"] = {{"p", mc.probability}, {"half_width", mc.half_width}};
  o.detail["chebyshev_at_c"] = 4.0 / (p.gamma * p.gamma);
  const bool fixture_ok = h.h2_left_holds;
  o.pass = fixture_ok && worst <= bound && mc.probability <= bound;
  o.summary = "paradigm1-scaled, A = 1, gamma = delta = 4, H2 left margin " + fmt(h.h2_left_margin) +
              ", max_x P_x(tau_0 >= " + std::to_string(t_prime) + ") = " + fmt(worst) + " (MC at c " +
              fmt(mc.probability) + ") vs bound " + fmt(bound);
  return o;
}

Outcome geometric_L() {
  Outcome o;
  const auto g = make_fixture("paradigm2-scaled");
  const auto k = transition_kernel(g, 0.5);
  const int kk = 2;
  const double n_h = static_cast<double>(growth_value(Growth::Scaled, first_tree_index(kk)));
  const auto s = sample_L(g, k, 10000, rng_with(909), 0, n_h);
  const auto fit = geometric_gof(s.samples, 1.0 / n_h, 1);
  o.detail = {{"n_h", n_h},
              {"mean", s.summary.mean},
              {"expected_mean", n_h},
              {"chi2", fit.statistic},
              {"dof", fit.dof},
              {"p_value", fit.p_value},
              {"exceeded", s.exceeded},
              {"cdf_at_h", s.cdf_at_h},
              {"claimed_bound", s.claimed_bound}};
  o.pass = s.exceeded == 0 && fit.p_value >= 0.01;
  o.summary = "Geometric(1/" + fmt(n_h) + "): mean " + fmt(s.summary.mean) + ", chi2 " + fmt(fit.statistic) +
              " on " + std::to_string(fit.dof) + " dof, p = " + fmt(fit.p_value);
  return o;
}

Outcome cutoff_trend() {
  Outcome o;
  std::vector<RegionTaggedGraph> graphs;
  std::vector<WalkKernel> kernels;
  std::vector<CutoffInstance> fam;
  for (int kk : {2, 3, 4}) {
    graphs.push_back(paradigm2_ratio4(kk));
    kernels.push_back(transition_kernel(graphs.back(), 0.5));
  }
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const double kk = static_cast<double>(i + 2);
    fam.push_back({kk, &kernels[i], cutoff_epsilon(graphs[i], kernels[i], std::pow(kk, 0.25), 0.1)});
  }
  const auto rep = cutoff_diagnostic(fam);
  std::string ratios;
  for (const auto& r : rep.rows) {
    ratios += (ratios.empty() ? "" : ", ") + fmt(r.ratio, 4);
    o.detail[fmt(r.k)] = {{"vertices", kernels[static_cast<std::size_t>(r.k) - 2].size()},
                          {"epsilon", r.epsilon},
                          {"t_mix_eps", r.t_mix_eps},
                          {"t_mix_1m_eps", r.t_mix_1m_eps},
                          {"ratio", r.ratio}};
  }
  o.pass = rep.rows.size() == 3 && rep.all_at_least_one && rep.non_increasing;
  o.summary = "k = 2,3,4 ratios " + ratios + ", Kendall tau " + fmt(rep.kendall_tau, 3);
  return o;
}

Outcome paradigm_conditions() {
  Outcome o;
  HarnessOptions opts;
  opts.mc_samples = 10000;
  opts.rng = rng_with(1111);
  const auto g1 = make_fixture("paradigm1-scaled");
  const auto r1 = check_conditions(g1, transition_kernel(g1, 0.5), analysis_for_k(2), opts);
  const auto g2 = paradigm2_default(2);
  const auto r2 = check_conditions(g2, transition_kernel(g2, 0.5), analysis_for_k(2), opts);
  const bool a_below_one = r2.A && *r2.A < 1.0;
  o.detail = {{"paradigm1", {{"h1", r1.h.h1_holds}, {"h1_margin", r1.h.h1_margin}, {"verdict", to_string(r1.verdict)}}},
              {"paradigm2",
               {{"m", g2.provenance.get("m").value_or(0.0)},
                {"N", g2.provenance.get("N").value_or(0.0)},
                {"h1", r2.h.h1_holds},
                {"h1_margin", r2.h.h1_margin},
                {"t_S", r2.t_S},
                {"A", r2.A ? json(*r2.A) : json(nullptr)},
                {"A_note", r2.A_note},
                {"verdict", to_string(r2.verdict)}}}};
  o.pass = r1.h.h1_holds && !r2.h.h1_holds && r2.verdict == Verdict::Theorem0b && a_below_one;
  o.summary = "P1 H1 = " + std::string(r1.h.h1_holds ? "true" : "false") +
              "; P2 (m^2 ~ 6Nk) H1 = " + (r2.h.h1_holds ? "true" : "false") + ", verdict " +
              to_string(r2.verdict) + ", A " + (r2.A ? fmt(*r2.A) : "undefined (t_S = " + fmt(r2.t_S) + ")");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility(const fs::path& out) {
  Outcome o;
  const std::string text =
      "[paradigm]\nfixture = paradigm2-scaled\n[walk]\nhorizon = 300\n[mc]\nn = 2000\nseed = 4242\n"
      "coupling_horizon = 100\n";
  std::vector<fs::path> dirs;
  for (int run : {1, 2}) {
    for (int threads : {1, 4}) {
      const auto dir = out / ("repro_run" + std::to_string(run) + "_threads" + std::to_string(threads));
      fs::remove_all(dir);
      run_experiment(parse_config(text, {"output.dir=" + dir.string(), "mc.threads=" + std::to_string(threads)}));
      dirs.push_back(dir);
    }
  }
  std::set<std::string> names;
  for (const auto& d : dirs) {
    for (const auto& e : fs::directory_iterator(d)) names.insert(e.path().filename().string());
  }
  names.erase("manifest.json");
  std::size_t mismatches = 0;
  for (const auto& n : names) {
    const auto ref = fs::exists(dirs[0] / n) ? slurp(dirs[0] / n) : std::string("\x01missing");
    for (std::size_t i = 1; i < dirs.size(); ++i) {
      const auto other = fs::exists(dirs[i] / n) ? slurp(dirs[i] / n) : std::string("\x02missing");
      if (other != ref) {
        ++mismatches;
        o.detail["mismatch"].push_back(n + " in " + dirs[i].filename().string());
      }
    }
  }
  o.detail["files"] = names;
  o.pass = mismatches == 0 && names.size() >= 8;
  o.summary = std::to_string(names.size()) + " files x 4 runs (2 repeats x threads {1,4}), " +
              std::to_string(mismatches) + " mismatches";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = "acceptance_runs";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      out = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::istringstream s(argv[++i]);
      for (std::string item; std::getline(s, item, ',');) only.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: %s [--out DIR] [--only 1,2,...]\n", argv[0]);
      return 2;
    }
  }
  fs::create_directories(out);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"stationarity", stationarity},
      {"path hitting moments", path_moments},
      {"triangle mixing", triangle},
      {"restriction bound", restriction},
      {"lower bound t_S/A", lower_bound},
      {"MC/exact agreement", mc_agreement},
      {"coupling dominates TV", coupling},
      {"hitting tail lemma", tail_lemma},
      {"geometric L", geometric_L},
      {"cutoff trend", cutoff_trend},
      {"paradigm conditions", paradigm_conditions},
      {"reproducibility", [&] { return reproducibility(out); }},
  };

  json report = json::object();
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.summary.c_str(), secs);
    std::fflush(stdout);
    report[std::to_string(id)] = {{"name", criteria[i].first},
                                  {"pass", o.pass},
                                  {"summary", o.summary},
                                  {"seconds", secs},
                                  {"detail", o.detail}};
  }
  std::ofstream(out / "acceptance.json") << report.dump(2) << "\n";
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
