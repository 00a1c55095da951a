#include "bnmix/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "bnmix/builders.hpp"
#include "bnmix/coupling.hpp"
#include "bnmix/error.hpp"
#include "bnmix/fixtures.hpp"
#include "bnmix/graph_io.hpp"
#include "bnmix/hitting.hpp"
#include "bnmix/kernel.hpp"
#include "bnmix/mixing.hpp"
#include "bnmix/report.hpp"
#include "bnmix/sampling.hpp"

#ifndef BNMIX_VERSION
#define BNMIX_VERSION "dev"
#endif

namespace bnmix {

std::string toolkit_version() { return BNMIX_VERSION; }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json t = nlohmann::json::array();
  for (const auto& [stage, seconds] : timings) t.push_back({{"stage", stage}, {"seconds", seconds}});
  return {{"config_hash", config_hash}, {"version", version},   {"timings", t},
          {"outputs", outputs},         {"overrides", overrides}, {"partial", partial},
          {"error", error},             {"bound_violated", bound_violated}};
}

namespace {

int paradigm_of(const std::string& source) {
  if (source == "paradigm1") return 1;
  if (source == "paradigm2") return 2;
  if (source == "paradigm3") return 3;
  return 0;
}

int analysis_k(const ExperimentConfig& c) {
  if (paradigm_of(c.source) > 0) return c.params.k;
  if (c.fixture.find("-scaled") != std::string::npos) return 2;
  return 1;
}

class Stages {
 public:
  Stages(const ExperimentConfig& c, RunManifest& m) : c_(c), m_(m) {}

  template <class F>
  void run(const std::string& name, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      m_.partial = true;
      m_.error = name + ": " + e.what();
      finish(name, start);
      write_manifest();
      throw;
    }
    finish(name, start);
  }

  std::string path(const std::string& file) {
    m_.outputs.push_back(file);
    return (std::filesystem::path(c_.dir) / file).string();
  }

  void write_manifest() { write_json((std::filesystem::path(c_.dir) / "manifest.json").string(), m_.to_json()); }

 private:
  void finish(const std::string& name, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    m_.timings.emplace_back(name, dt.count());
  }

  const ExperimentConfig& c_;
  RunManifest& m_;
};

RngConfig rng_of(const ExperimentConfig& c) { return {c.seed, c.threads}; }

SquaringOptions squaring_of(const ExperimentConfig& c) {
  SquaringOptions s;
  s.max_vertices = c.squaring_max_vertices;
  return s;
}

}  // namespace

RegionTaggedGraph config_graph(const ExperimentConfig& c) {
  const int paradigm = paradigm_of(c.source);
  if (paradigm == 0) return make_fixture(c.fixture);
  return build_paradigm(paradigm, c.params);
}

AnalysisParams config_analysis(const ExperimentConfig& c, int k) {
  auto a = analysis_for_k(k, c.params.p_exp, c.params.t_exp, c.params.s_exp);
  if (c.gamma) a.gamma = *c.gamma;
  if (c.delta) a.delta = *c.delta;
  a.epsilon = c.epsilon;
  a.h_of_z = c.h_of_z;
  a.prec_ratio = c.prec_ratio;
  a.upper_slack = c.upper_slack;
  return a;
}

RunManifest run_experiment(const ExperimentConfig& c, RunMode mode) {
  std::filesystem::create_directories(c.dir);
  RunManifest m;
  m.config_hash = config_hash(c);
  m.version = toolkit_version();
  m.overrides = c.overrides;
  Stages stages(c, m);
  const auto stamp = [&m](nlohmann::json j) {
    j["config_hash"] = m.config_hash;
    return j;
  };

  if (mode == RunMode::Family) {
    stages.run("family", [&] {
      const int paradigm = paradigm_of(c.source);
      if (paradigm == 0) throw ConfigError("paradigm.source", "the family stage needs a paradigm source");
      if (c.family.empty()) throw ConfigError("paradigm.family", "the family stage needs k values");
      std::vector<RegionTaggedGraph> graphs;
      std::vector<WalkKernel> kernels;
      for (int k : c.family) {
        auto params = c.params;
        params.k = k;
        graphs.push_back(build_paradigm(paradigm, params));
        kernels.push_back(transition_kernel(graphs.back(), c.laziness));
      }
      std::vector<CutoffInstance> family;
      nlohmann::json members = nlohmann::json::array();
      CsvTable sandwich({"k", "lower", "upper", "t_mix"});
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        const auto a = config_analysis(c, c.family[i]);
        family.push_back({static_cast<double>(c.family[i]), &kernels[i],
                          cutoff_epsilon(graphs[i], kernels[i], a.gamma, c.cutoff_fraction)});
      }
      const auto cutoff = cutoff_diagnostic(family, squaring_of(c));
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        const auto a = config_analysis(c, c.family[i]);
        HarnessOptions opts;
        opts.mc_samples = c.harness ? c.n : 0;
        opts.rng = rng_of(c);
        opts.exact_tmix = false;
        const auto report = check_conditions(graphs[i], kernels[i], a, opts);
        sandwich.row({cell(c.family[i]), cell(report.sandwich_theorem1.first), cell(report.sandwich_theorem1.second),
                      cell(cutoff.rows[i].t_mix_eps)});
        members.push_back({{"k", c.family[i]},
                           {"vertices", graphs[i].vertex_count()},
                           {"provenance", to_json(graphs[i].provenance)},
                           {"c1_value", report.c1_value},
                           {"verdict", to_string(report.verdict)},
                           {"report", to_json(report)}});
      }
      std::vector<double> c1;
      for (const auto& mem : members) c1.push_back(mem["c1_value"].get<double>());
      cutoff_csv(cutoff).write(stages.path("cutoff.csv"));
      sandwich.write(stages.path("sandwich.csv"));
      nlohmann::json fam = {{"members", members},
                            {"cutoff", to_json(cutoff)},
                            {"c1_kendall_tau", kendall_tau(c1)},
                            {"laziness", c.laziness}};
      write_json(stages.path("family.json"), stamp(fam));
    });
    stages.write_manifest();
    return m;
  }

  RegionTaggedGraph g;
  stages.run("build", [&] {
    g = config_graph(c);
    save_graph(g, stages.path("graph.edges"), (std::filesystem::path(c.dir) / "graph.regions").string());
    if (g.tagged()) m.outputs.push_back("graph.regions");
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : validate_regions(g)) violations.push_back({{"code", v.code}, {"message", v.message}});
    write_json(stages.path("graph.json"), stamp({{"name", g.name},
                                                 {"vertices", g.vertex_count()},
                                                 {"edges", g.graph.edge_count()},
                                                 {"tagged", g.tagged()},
                                                 {"violations", violations},
                                                 {"provenance", to_json(g.provenance)}}));
  });
  if (mode == RunMode::Build) {
    stages.write_manifest();
    return m;
  }

  WalkKernel kernel;
  stages.run("kernel", [&] { kernel = transition_kernel(g, c.laziness); });
  const bool tagged = g.tagged();
  const Vertex origin = tagged ? g.layer().marks.origin : 0;
  const Vertex start = tagged ? g.layer().marks.c : g.vertex_count() - 1;

  const bool do_exact = mode == RunMode::Analyze || ((mode == RunMode::All || mode == RunMode::Harness) && c.exact);
  if (do_exact) {
    stages.run("exact", [&] {
      const auto profile = mixing_profile(kernel, c.horizon, StartPolicy::all(), c.exact_budget);
      profile_csv(profile).write(stages.path("profile.csv"));
      nlohmann::json j = {{"graph", g.name},
                          {"laziness", c.laziness},
                          {"row_sum_error", kernel.row_sum_error},
                          {"stationarity_error", kernel.stationarity_error},
                          {"potentially_periodic", kernel.potentially_periodic},
                          {"horizon", profile.horizon},
                          {"periodic_warning", profile.periodic_warning},
                          {"lower_envelope", profile.lower_envelope}};
      const auto moments = hitting_moments(kernel, {origin});
      moments_csv(moments).write(stages.path("moments.csv"));
      j["moments_target"] = origin;
      j["moments_residual"] = moments.residual;
      if (tagged) {
        const auto S = g.vertices_in(Region::S);
        const auto restricted = restricted_evolution_check(kernel, S, c.horizon);
        restricted_csv(restricted).write(stages.path("restricted.csv"));
        j["phi_S"] = restricted.phi_S;
        j["restricted_violations"] = restricted.violations;
        if (!restricted.violations.empty()) m.bound_violated = true;
      }
      write_json(stages.path("exact.json"), stamp(j));
    });
  }

  const bool do_mc = mode == RunMode::Mc || ((mode == RunMode::All || mode == RunMode::Harness) && c.mc);
  if (do_mc) {
    stages.run("mc", [&] {
      const auto rng = rng_of(c);
      const auto hs = sample_hitting_time(kernel, start, {origin}, c.n, rng, c.step_budget);
      CsvTable samples({"trajectory", "steps"});
      for (std::size_t i = 0; i < hs.samples.size(); ++i) samples.row({cell(i), cell(hs.samples[i])});
      samples.write(stages.path("hitting_samples.csv"));
      nlohmann::json j = {{"start", start},
                          {"target", origin},
                          {"seed", c.seed},
                          {"n", c.n},
                          {"step_budget", hs.step_budget},
                          {"exceeded", hs.exceeded},
                          {"hitting", to_json(hs.summary)}};
      if (tagged) {
        const auto ex = sample_excursions(g, kernel, c.n, rng, c.step_budget);
        CsvTable ls({"trajectory", "L"});
        for (std::size_t i = 0; i < ex.L_samples.size(); ++i) ls.row({cell(i), cell(ex.L_samples[i])});
        ls.write(stages.path("L_samples.csv"));
        j["excursions"] = to_json(ex);
        const auto coupling = coupling_experiment(g, kernel, start, c.coupling_horizon, c.n, rng);
        survival_csv(coupling).write(stages.path("survival.csv"));
        j["coupling"] = {{"start", coupling.start},
                         {"outside_D_at_tau0", coupling.outside_D_at_tau0},
                         {"mirrored_steps", coupling.mirrored_steps},
                         {"marginal_p_value", coupling.marginal_p_value},
                         {"marginal_max_abs_z", format_double(coupling.marginal_max_abs_z)}};
      }
      write_json(stages.path("mc.json"), stamp(j));
    });
  }

  const bool do_harness = mode == RunMode::Harness || (mode == RunMode::All && c.harness);
  if (do_harness && tagged) {
    stages.run("harness", [&] {
      HarnessOptions opts;
      opts.mc_samples = c.n;
      opts.rng = rng_of(c);
      opts.squaring = squaring_of(c);
      const auto report = check_conditions(g, kernel, config_analysis(c, analysis_k(c)), opts);
      write_json(stages.path("theorem_report.json"), stamp(to_json(report)));
      CsvTable sandwich({"k", "lower", "upper", "t_mix"});
      sandwich.row({cell(analysis_k(c)), cell(report.sandwich_theorem1.first), cell(report.sandwich_theorem1.second),
                    report.t_mix_exact ? cell(*report.t_mix_exact) : std::string("nan")});
      sandwich.write(stages.path("sandwich.csv"));
      if (report.lower_ok && !*report.lower_ok) m.bound_violated = true;
    });
  }
  stages.write_manifest();
  return m;
}

}  // namespace bnmix
