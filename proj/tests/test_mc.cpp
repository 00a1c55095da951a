#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bnmix/builders.hpp"
#include "bnmix/coupling.hpp"
#include "bnmix/error.hpp"
#include "bnmix/fixtures.hpp"
#include "bnmix/hitting.hpp"
#include "bnmix/kernel.hpp"
#include "bnmix/mixing.hpp"
#include "bnmix/sampling.hpp"
#include "bnmix/stats.hpp"
#include "bnmix/walker.hpp"

using namespace bnmix;

namespace {

// T0 = {0}, B = {1} = z, S = {2}.
RegionTaggedGraph tiny_case() {
  CaseSpec s;
  s.name = "tiny";
  s.vertex_count = 3;
  s.edges = {{0, 1}, {1, 2}};
  s.region_of = {Region::T0, Region::Bottleneck, Region::S};
  s.origin = 0;
  s.z = 1;
  s.c = 2;
  s.boundary = {0};
  return build_case_graph(s);
}

RngConfig cfg(std::uint64_t seed, unsigned threads = 1) {
  RngConfig c;
  c.seed = seed;
  c.threads = threads;
  return c;
}

}  // namespace

TEST(Walker, StreamsAreReproducible) {
  Rng a = trajectory_rng(7, 1, 3), b = trajectory_rng(7, 1, 3), c = trajectory_rng(7, 2, 3);
  EXPECT_EQ(a(), b());
  EXPECT_NE(trajectory_rng(7, 1, 3)(), c());
}

TEST(Walker, StepFrequenciesMatchRow) {
  const auto g = dumbbell_fixture();
  const auto k = transition_kernel(g, 0.5);
  const Walker w(k);
  Rng rng = trajectory_rng(1, 99, 0);
  std::vector<double> counts(g.vertex_count(), 0.0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) counts[w.step(3, rng)] += 1.0;
  const Eigen::MatrixXd P(k.P);
  std::vector<double> probs;
  for (long j = 0; j < P.cols(); ++j) probs.push_back(P(3, j));
  std::vector<double> obs, ps;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] > 0) {
      obs.push_back(counts[j]);
      ps.push_back(probs[j]);
    } else {
      EXPECT_EQ(counts[j], 0.0);
    }
  }
  EXPECT_GT(chi_square_gof(obs, ps).p_value, 1e-4);
}

TEST(Hitting, K2AlwaysOne) {
  const auto k = transition_kernel(make_fixture("K2"), 0.0);
  const auto s = sample_hitting_time(k, 1, {0}, 1000, cfg(1));
  for (long v : s.samples) EXPECT_EQ(v, 1);
  EXPECT_EQ(s.summary.variance, 0.0);
}

TEST(Hitting, PathMeanWithinThreeSe) {
  const auto k = transition_kernel(path_fixture(5), 0.0);
  const auto s = sample_hitting_time(k, 5, {0}, 100000, cfg(11));
  EXPECT_EQ(s.exceeded, 0u);
  EXPECT_LE(std::abs(s.summary.mean - 25.0), 3.0 * s.summary.se_mean);
}

TEST(Hitting, MomentsAgreeWithExactOnFixtures) {
  struct Case {
    const char* name;
    Vertex start;
  };
  for (const Case c : {Case{"triangle", 2}, Case{"dumbbell", 5}, Case{"path-m", 7}, Case{"K2", 1}}) {
    const auto g = make_fixture(c.name);
    const auto k = transition_kernel(g, 0.5);
    const auto exact = hitting_moments(k, {0});
    const auto s = sample_hitting_time(k, c.start, {0}, 20000, cfg(5));
    EXPECT_LE(std::abs(s.summary.mean - exact.mean(static_cast<long>(c.start))), 3.0 * s.summary.se_mean) << c.name;
    EXPECT_LE(std::abs(s.summary.variance - exact.variance(static_cast<long>(c.start))),
              3.0 * s.summary.se_variance + 1e-12)
        << c.name;
  }
}

TEST(Hitting, BudgetExceededIsReported) {
  // Six steps are the least that can reach 0.
  const auto k = transition_kernel(path_fixture(6), 0.0);
  const auto s = sample_hitting_time(k, 6, {0}, 500, cfg(2), 5);
  EXPECT_EQ(s.exceeded, 500u);
  for (long v : s.samples) EXPECT_EQ(v, -1);
  EXPECT_EQ(s.step_budget, 5);
}

TEST(Hitting, ThreadCountDoesNotChangeSamples) {
  const auto k = transition_kernel(make_fixture("paradigm2-scaled"), 0.5);
  const auto a = sample_hitting_time(k, 3, {0}, 300, cfg(9, 1));
  const auto b = sample_hitting_time(k, 3, {0}, 300, cfg(9, 4));
  EXPECT_EQ(a.samples, b.samples);
}

TEST(LSample, DegenerateWhenZNextToOrigin) {
  const auto g = tiny_case();
  const auto k = transition_kernel(g, 0.0);
  const auto s = sample_L(g, k, 200, cfg(3));
  for (long v : s.samples) EXPECT_EQ(v, 1);
  EXPECT_DOUBLE_EQ(s.cdf.at(1), 1.0);
}

TEST(LSample, NonNegativeIntegers) {
  const auto g = make_fixture("paradigm2-scaled");
  const auto k = transition_kernel(g, 0.5);
  const auto s = sample_L(g, k, 500, cfg(4), 0, 4.0);
  EXPECT_EQ(s.exceeded, 0u);
  for (long v : s.samples) EXPECT_GE(v, 1);
  EXPECT_DOUBLE_EQ(s.claimed_bound, 0.25);
}

TEST(Excursions, DegenerateT0) {
  const auto g = tiny_case();
  const auto ex = sample_excursions(g, transition_kernel(g, 0.0), 200, cfg(8));
  for (long v : ex.lambda_samples) EXPECT_EQ(v, 0);
  EXPECT_EQ(ex.zeta_mean, 0.0);
  EXPECT_EQ(ex.xi_mean, 0.0);
  EXPECT_GE(ex.p_hat, 0.0);
  EXPECT_LE(ex.p_hat, 1.0);
}

TEST(Excursions, ParadigmTwoIngredients) {
  const auto g = make_fixture("paradigm2-scaled");
  const auto k = transition_kernel(g, 0.5);
  const auto ex = sample_excursions(g, k, 4000, cfg(21));
  EXPECT_EQ(ex.exceeded, 0u);
  // rho by direct degree count at vertex 0.
  const Vertex o = g.layer().marks.origin;
  double in_b = 0.0, all = 0.0;
  for (Vertex y : g.graph.neighbors(o)) {
    all += 1.0;
    if (g.layer().region_of[y] == Region::Bottleneck) in_b += 1.0;
  }
  const double rho = in_b / all;
  EXPECT_DOUBLE_EQ(ex.rho, rho);
  EXPECT_LE(std::abs(ex.G.mean - (1.0 - rho) / rho), 3.0 * ex.G.se_mean);
  EXPECT_LE(ex.theta.mean, ex.lambda.mean + 3.0 * (ex.theta.se_mean + ex.lambda.se_mean));
  for (const auto* v : {&ex.L_samples, &ex.theta_samples, &ex.lambda_samples, &ex.G_samples}) {
    for (long x : *v) EXPECT_GE(x, 0);
  }
  EXPECT_GE(ex.p_hat, 0.0);
  EXPECT_LE(ex.p_hat, 1.0);
  EXPECT_GT(ex.assembled_bound, 0.0);
}

TEST(Tail, TrivialCases) {
  const auto k = transition_kernel(path_fixture(3), 0.5);
  EXPECT_EQ(tail_probability(k, 3, {0}, 0, 100, cfg(1)).probability, 1.0);
  EXPECT_EQ(tail_probability(k, 0, {0}, 5, 100, cfg(1)).probability, 0.0);
  EXPECT_EQ(tail_probability(k, 0, {0}, 5, 0, cfg(1)).probability, 0.0);
  const auto exact = tail_probability(k, 3, {0}, 10, 0, cfg(1));
  EXPECT_TRUE(exact.exact);
  const auto mc = tail_probability(k, 3, {0}, 10, 20000, cfg(1));
  EXPECT_LE(std::abs(mc.probability - exact.probability), mc.half_width);
}

TEST(Tail, ChebyshevAtFarStart) {
  const auto g = make_fixture("paradigm2-scaled");
  const auto k = transition_kernel(g, 0.5);
  const Vertex c = g.layer().marks.c;
  const auto h = hitting_moments(k, {g.layer().marks.origin});
  const double gamma = std::pow(2.0, 0.25);
  const long t_prime = static_cast<long>(std::ceil(h.mean(static_cast<long>(c)) + 0.5 * gamma * h.sd(c)));
  const auto est = tail_probability(k, c, {g.layer().marks.origin}, t_prime, 10000, cfg(13));
  EXPECT_LE(est.probability, 4.0 / (gamma * gamma) + est.half_width);
}

TEST(Coupling, TrivialCases) {
  const auto one = make_plain_graph("one", 1, {});
  const auto k1 = transition_kernel(one, 0.0);
  const auto r1 = coupling_experiment(one, k1, 0, 5, 100, cfg(1));
  for (double s : r1.survival) EXPECT_EQ(s, 0.0);

  const auto g = make_fixture("paradigm2-scaled");
  const auto k = transition_kernel(g, 0.5);
  const Vertex c = g.layer().marks.c;
  const auto r = coupling_experiment(g, k, c, 0, 4000, cfg(2));
  // At t = 0 the pair is uncoupled unless Y0 happens to equal X0.
  EXPECT_LE(std::abs(r.survival[0] - (1.0 - k.pi(static_cast<long>(c)))), r.half_width[0] + 1e-12);
}

TEST(Coupling, DominatesStartDistance) {
  const auto g = make_fixture("paradigm2-scaled");
  const auto k = transition_kernel(g, 0.5);
  const Vertex c = g.layer().marks.c;
  const long horizon = 400;
  const auto prof = mixing_profile(k, horizon, StartPolicy::given({c}));
  const auto r = coupling_experiment(g, k, c, horizon, 3000, cfg(17));
  for (long t = 1; t <= horizon; ++t) {
    const auto i = static_cast<std::size_t>(t);
    EXPECT_GE(r.survival[i] + 2.0 * r.half_width[i], prof.d[i]) << "t=" << t;
  }
  EXPECT_GE(r.outside_D_at_tau0, 0.0);
  EXPECT_LE(r.outside_D_at_tau0, 1.0);
}

TEST(Coupling, MirroredMovesKeepTheMarginal) {
  ParadigmParams pp;
  pp.k = 2;
  pp.r = 1;
  pp.q = 3;
  pp.m = 6;
  for (const auto& g : {make_fixture("paradigm3-scaled"), build_paradigm2(pp)}) {
    const auto k = transition_kernel(g, 0.5);
    const auto r = coupling_experiment(g, k, g.layer().marks.c, 3000, 2000, cfg(31));
    EXPECT_GT(r.mirrored_steps, 1000u) << g.name;
    EXPECT_GT(r.marginal_dof, 0) << g.name;
    EXPECT_GT(r.marginal_p_value, 1e-3) << g.name << " chi2 " << r.marginal_chi2;
    EXPECT_LT(r.marginal_max_abs_z, 4.0) << g.name;
  }
}

TEST(Stats, SummaryAndWilson) {
  const auto s = summarize(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
  const auto p = wilson(0, 100);
  EXPECT_EQ(p.estimate, 0.0);
  EXPECT_GT(p.upper, 0.0);
  EXPECT_GE(p.half_width, 0.0);
  const auto q = wilson(50, 100);
  EXPECT_NEAR(q.lower + q.upper, 1.0, 1e-12);
}

TEST(Stats, GeometricFitAndMisfit) {
  std::mt19937_64 rng(5);
  std::geometric_distribution<long> geo(0.25);
  std::vector<long> x;
  for (int i = 0; i < 10000; ++i) x.push_back(geo(rng) + 1);
  EXPECT_GT(geometric_gof(x, 0.25).p_value, 0.01);
  EXPECT_LT(geometric_gof(x, 0.4).p_value, 1e-6);
}

TEST(Stats, Kendall) {
  EXPECT_DOUBLE_EQ(kendall_tau({3.0, 2.0, 1.0}), -1.0);
  EXPECT_DOUBLE_EQ(kendall_tau({1.0, 2.0, 3.0}), 1.0);
  EXPECT_NEAR(chi_square_sf(3.841458820694124, 1), 0.05, 1e-9);
}
