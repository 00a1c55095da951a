#include <gtest/gtest.h>

#include <cmath>

#include "bnmix/bottleneck.hpp"
#include "bnmix/builders.hpp"
#include "bnmix/error.hpp"
#include "bnmix/fixtures.hpp"
#include "bnmix/hitting.hpp"
#include "bnmix/kernel.hpp"
#include "bnmix/mixing.hpp"

using namespace bnmix;

namespace {

std::vector<RegionTaggedGraph> all_fixtures() {
  std::vector<RegionTaggedGraph> out;
  for (const auto& f : list_fixtures()) out.push_back(make_fixture(f.name));
  return out;
}

Eigen::MatrixXd dense(const WalkKernel& k) { return Eigen::MatrixXd(k.P); }

// Worst-case TV at each t by explicit matrix powers.
std::vector<double> power_oracle(const WalkKernel& k, long horizon) {
  const Eigen::MatrixXd P = dense(k);
  Eigen::MatrixXd Pt = Eigen::MatrixXd::Identity(P.rows(), P.cols());
  std::vector<double> d;
  for (long t = 0; t <= horizon; ++t) {
    double worst = 0.0;
    for (long x = 0; x < P.rows(); ++x) {
      worst = std::max(worst, 0.5 * (Pt.row(x).transpose() - k.pi).cwiseAbs().sum());
    }
    d.push_back(worst);
    Pt = Pt * P;
  }
  return d;
}

}  // namespace

TEST(Kernel, K2NonLazy) {
  const auto k = transition_kernel(make_fixture("K2"), 0.0);
  const Eigen::MatrixXd P = dense(k);
  EXPECT_EQ(P(0, 0), 0.0);
  EXPECT_EQ(P(0, 1), 1.0);
  EXPECT_EQ(P(1, 0), 1.0);
  EXPECT_EQ(k.pi(0), 0.5);
  EXPECT_TRUE(k.potentially_periodic);
}

TEST(Kernel, TriangleUniform) {
  const auto k = transition_kernel(make_fixture("triangle"), 0.0);
  for (long i = 0; i < 3; ++i) EXPECT_NEAR(k.pi(i), 1.0 / 3.0, 1e-15);
  EXPECT_FALSE(k.potentially_periodic);
}

TEST(Kernel, DumbbellBridgeMass) {
  const auto k = transition_kernel(dumbbell_fixture(), 0.0);
  EXPECT_NEAR(k.pi(2), 3.0 / 14.0, 1e-15);
  EXPECT_NEAR(k.pi(3), 3.0 / 14.0, 1e-15);
}

TEST(Kernel, RowsAndStationarity) {
  for (const auto& g : all_fixtures()) {
    for (double a : {0.0, 0.5}) {
      const auto k = transition_kernel(g, a);
      EXPECT_LT(k.row_sum_error, 1e-12) << g.name;
      EXPECT_LT(k.stationarity_error, 1e-12) << g.name;
      EXPECT_GE(k.P.coeffs().minCoeff(), 0.0);
    }
  }
}

TEST(Kernel, RejectsBadInput) {
  EXPECT_THROW(transition_kernel(make_fixture("triangle"), 1.0), Error);
  try {
    transition_kernel(make_plain_graph("split", 3, {{0, 1}}), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DisconnectedGraph);
  }
}

TEST(Tv, Examples) {
  const std::vector<double> a{0.5, 0.5}, b{0.75, 0.25}, c{1.0, 0.0}, d{0.0, 1.0};
  EXPECT_EQ(tv_distance(a, a), 0.0);
  EXPECT_EQ(tv_distance(c, d), 1.0);
  EXPECT_DOUBLE_EQ(tv_distance(a, b), 0.25);
  const std::vector<double> three{0.2, 0.3, 0.5};
  try {
    tv_distance(a, three);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(Hitting, PathMeanIsMSquared) {
  for (std::size_t m = 2; m <= 20; ++m) {
    const auto g = path_fixture(m);
    const auto k = transition_kernel(g, 0.0);
    const auto h = hitting_moments(k, {0});
    const double mm = static_cast<double>(m);
    EXPECT_NEAR(h.mean(static_cast<long>(m)) / (mm * mm), 1.0, 1e-9) << m;
    const double ratio = h.variance(static_cast<long>(m)) / (mm * mm * mm * mm);
    EXPECT_GE(ratio, 0.1);
    EXPECT_LE(ratio, 10.0);
  }
}

TEST(Hitting, PathVarianceMatchesAbsorbingChain) {
  for (std::size_t m : {2u, 3u, 7u, 12u}) {
    const auto k = transition_kernel(path_fixture(m), 0.0);
    const auto h = hitting_moments(k, {0});
    const auto pmf = hitting_time_pmf(k, m, {0}, 1e-15);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t t = 0; t < pmf.size(); ++t) {
      m1 += static_cast<double>(t) * pmf[t];
      m2 += static_cast<double>(t * t) * pmf[t];
    }
    const double var = m2 - m1 * m1;
    EXPECT_NEAR(m1 / h.mean(static_cast<long>(m)), 1.0, 1e-8);
    EXPECT_NEAR(var / h.variance(static_cast<long>(m)), 1.0, 1e-8) << m;
  }
}

TEST(Hitting, K2IsDeterministic) {
  const auto k = transition_kernel(make_fixture("K2"), 0.0);
  const auto h = hitting_moments(k, {0});
  EXPECT_EQ(h.mean(0), 0.0);
  EXPECT_NEAR(h.mean(1), 1.0, 1e-14);
  EXPECT_NEAR(h.variance(1), 0.0, 1e-12);
}

TEST(Hitting, RecurrenceAndLazyDoubling) {
  for (const auto& g : all_fixtures()) {
    const Vertex target = g.tagged() ? g.layer().marks.origin : 0;
    const auto k0 = transition_kernel(g, 0.0);
    const auto k1 = transition_kernel(g, 0.5);
    const auto h0 = hitting_moments(k0, {target});
    const auto h1 = hitting_moments(k1, {target});
    EXPECT_LT(recurrence_residual(k0, h0), 1e-9) << g.name;
    EXPECT_LT(recurrence_residual(k1, h1), 1e-9) << g.name;
    for (long x = 0; x < h0.mean.size(); ++x) {
      EXPECT_GE(h0.variance(x), 0.0);
      if (static_cast<Vertex>(x) == target) {
        EXPECT_EQ(h0.mean(x), 0.0);
        continue;
      }
      EXPECT_GT(h0.mean(x), 0.0);
      EXPECT_NEAR(h1.mean(x) / (2.0 * h0.mean(x)), 1.0, 1e-9) << g.name << " x=" << x;
    }
  }
}

TEST(Hitting, TailMatchesPmf) {
  const auto k = transition_kernel(path_fixture(4), 0.5);
  const auto pmf = hitting_time_pmf(k, 4, {0});
  for (long t : {0L, 1L, 5L, 20L, 60L}) {
    double tail = 0.0;
    for (std::size_t s = static_cast<std::size_t>(t); s < pmf.size(); ++s) tail += pmf[s];
    EXPECT_NEAR(hitting_tail_exact(k, 4, {0}, t), tail, 1e-12);
  }
  EXPECT_EQ(hitting_tail_exact(k, 0, {0}, 3), 0.0);
}

TEST(Mixing, SingleVertex) {
  const auto k = transition_kernel(make_plain_graph("one", 1, {}), 0.0);
  const auto p = mixing_profile(k, 5);
  for (double d : p.d) EXPECT_EQ(d, 0.0);
}

TEST(Mixing, TriangleClosedForm) {
  const auto k = transition_kernel(make_fixture("triangle"), 0.0);
  const auto p = mixing_profile(k, 30);
  for (long t = 0; t <= 30; ++t) {
    EXPECT_NEAR(p.d[static_cast<std::size_t>(t)], (2.0 / 3.0) * std::pow(0.5, t), 1e-12);
  }
  EXPECT_EQ(mixing_time(p, 0.25), 2);
  EXPECT_EQ(exact_mixing_times(k, {0.25}).front(), 2);
  EXPECT_EQ(mixing_time(p, 0.7), 0);
}

TEST(Mixing, K2Cases) {
  const auto k0 = transition_kernel(make_fixture("K2"), 0.0);
  const auto p0 = mixing_profile(k0, 10);
  EXPECT_TRUE(p0.periodic_warning);
  const auto k1 = transition_kernel(make_fixture("K2"), 0.5);
  const auto p1 = mixing_profile(k1, 10);
  EXPECT_FALSE(p1.periodic_warning);
  EXPECT_EQ(mixing_time(p1, 0.25), 1);
}

TEST(Mixing, HorizonTooShortCarriesDistance) {
  const auto k = transition_kernel(make_fixture("paradigm2-scaled"), 0.5);
  const auto p = mixing_profile(k, 10);
  try {
    mixing_time(p, 0.01);
    FAIL();
  } catch (const HorizonTooShort& e) {
    EXPECT_EQ(e.horizon(), 10);
    EXPECT_DOUBLE_EQ(e.d_at_horizon(), p.d.back());
  }
}

TEST(Mixing, BudgetGuard) {
  const auto k = transition_kernel(make_fixture("dumbbell"), 0.5);
  try {
    mixing_profile(k, 3, StartPolicy::all(), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
  }
  const auto given = mixing_profile(k, 3, StartPolicy::given({0}), 5);
  EXPECT_TRUE(given.lower_envelope);
}

TEST(Mixing, ProfileMatchesMatrixPowers) {
  for (const char* name : {"dumbbell", "path-m", "paradigm2-scaled"}) {
    const auto k = transition_kernel(make_fixture(name), 0.5);
    const auto p = mixing_profile(k, 60);
    const auto oracle = power_oracle(k, 60);
    for (std::size_t t = 0; t < oracle.size(); ++t) EXPECT_NEAR(p.d[t], oracle[t], 1e-12) << name;
  }
}

TEST(Mixing, MonotoneAndBounded) {
  for (const auto& g : all_fixtures()) {
    const auto k = transition_kernel(g, 0.5);
    const auto p = mixing_profile(k, 200);
    for (std::size_t t = 0; t < p.d.size(); ++t) {
      EXPECT_GE(p.d[t], 0.0);
      EXPECT_LE(p.d[t], 1.0);
      if (t > 0) { EXPECT_LE(p.d[t], p.d[t - 1] + 1e-15) << g.name; }
    }
  }
}

TEST(Mixing, SquaringAgreesWithProfile) {
  for (const char* name : {"dumbbell", "path-m", "paradigm2-scaled", "paradigm1-scaled"}) {
    const auto k = transition_kernel(make_fixture(name), 0.5);
    const std::vector<double> eps{0.05, 0.1, 0.25, 0.5, 0.9};
    const auto sq = exact_mixing_times(k, eps);
    const auto p = mixing_profile(k, sq.front() + 1);
    long prev = std::numeric_limits<long>::max();
    for (std::size_t i = 0; i < eps.size(); ++i) {
      EXPECT_EQ(sq[i], mixing_time(p, eps[i])) << name << " eps " << eps[i];
      EXPECT_LE(sq[i], prev);
      prev = sq[i];
    }
  }
}

TEST(Mixing, LumpingIsExact) {
  ParadigmParams p;
  p.k = 2;
  p.r = 3;
  p.q = 3;
  p.m = 6;
  const auto full = build_paradigm2(p);
  p.lump_copies = true;
  const auto lumped = build_paradigm2(p);
  ASSERT_LT(lumped.vertex_count(), full.vertex_count());
  const auto kf = transition_kernel(full, 0.5);
  const auto kl = transition_kernel(lumped, 0.5);
  const std::vector<double> eps{0.05, 0.2, 0.6, 0.95};
  EXPECT_EQ(exact_mixing_times(kf, eps), exact_mixing_times(kl, eps));
  const auto hf = hitting_moments(kf, {full.layer().marks.origin});
  const auto hl = hitting_moments(kl, {lumped.layer().marks.origin});
  const auto cf = static_cast<long>(full.layer().marks.c), cl = static_cast<long>(lumped.layer().marks.c);
  EXPECT_NEAR(hf.mean(cf), hl.mean(cl), 1e-8 * hf.mean(cf));
  EXPECT_NEAR(hf.variance(cf), hl.variance(cl), 1e-8 * hf.variance(cf));
}

TEST(Bottleneck, DumbbellFarTriangle) {
  const auto g = dumbbell_fixture();
  const auto k = transition_kernel(g, 0.0);
  const auto S = g.vertices_in(Region::S);
  // Boundary-edge enumeration: only 3 -> 2 leaves S, mu_S(3) = 3/7, P(3,2) = 1/3.
  const auto r = bottleneck_ratio(k, S);
  EXPECT_NEAR(r.phi_S, 1.0 / 7.0, 1e-15);
  EXPECT_NEAR(r.mu_S.sum(), 1.0, 1e-15);
  const auto lazy = bottleneck_ratio(transition_kernel(g, 0.5), S);
  EXPECT_NEAR(lazy.phi_S, 0.5 * r.phi_S, 1e-15);
}

TEST(Bottleneck, K2AndErrors) {
  const auto k = transition_kernel(make_fixture("K2"), 0.0);
  EXPECT_DOUBLE_EQ(bottleneck_ratio(k, {1}).phi_S, 1.0);
  try {
    bottleneck_ratio(k, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyS);
  }
  try {
    bottleneck_ratio(k, {0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FullS);
  }
}

TEST(Bottleneck, RestrictedEvolutionBound) {
  const auto d = dumbbell_fixture();
  const auto kd = transition_kernel(d, 0.0);
  const auto rd = restricted_evolution_check(kd, d.vertices_in(Region::S), 50);
  EXPECT_EQ(rd.distance.front(), 0.0);
  EXPECT_TRUE(rd.violations.empty());
  EXPECT_NEAR(rd.bound[7], 1.0, 1e-12);
  const auto p2 = make_fixture("paradigm2-scaled");
  for (double a : {0.0, 0.5}) {
    const auto r = restricted_evolution_check(transition_kernel(p2, a), p2.vertices_in(Region::S), 200);
    EXPECT_TRUE(r.violations.empty());
  }
}
