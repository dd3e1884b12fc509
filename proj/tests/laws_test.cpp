// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gwgen/laws.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace gwgen {
namespace {

const OffspringSpec kYule = OffspringSpec::birth_death(0, 1);
const OffspringSpec kCritical = OffspringSpec::finite_pmf({0.5, 0, 0.5});
const OffspringSpec kSuper = OffspringSpec::birth_death(0.25, 0.75);
const OffspringSpec kGeom = OffspringSpec::geometric(0.6);
const OffspringSpec kTernary = OffspringSpec::parse("pmf:0:0.25,1:0.25,3:0.5");

LawQuery query(const OffspringSpec& spec, double T, int k, Mesh mesh, const std::string& chain,
               Orientation o = Orientation::kBreaking) {
  return LawQuery{spec, T, k, std::move(mesh), parse_chain(chain, k, o)};
}

TEST(FddProbability, SumsOverChainsToTheTailMass) {
  for (const auto* spec : {&kYule, &kCritical, &kGeom, &kTernary}) {
    for (int k : {2, 3}) {
      const double T = 1.5;
      const Mesh mesh{0.4, 1.1};
      double total = 0;
      for (const auto& c : enumerate_chains(k, 2)) total += fdd_probability({*spec, T, k, mesh, c}).value;
      EXPECT_NEAR(total, population_pmf(*spec, T, k).at_least(k), 1e-6) << spec->to_string() << " k=" << k;
    }
  }
}

TEST(FddProbability, SingleBlockIsTheMrcaTail) {
  for (const auto* spec : {&kYule, &kGeom}) {
    const double lam = lambert_tail(*spec, 0.5, 1).value;
    EXPECT_NEAR(fdd_probability(query(*spec, 1, 2, {0.5}, "1,2")).value, lam, 1e-10);
    EXPECT_NEAR(kmrca_tail(*spec, 2, 0.5, 1).value, lam, 1e-10);
    EXPECT_NEAR(fdd_probability(query(*spec, 2, 3, {0.7}, "1,2,3")).value, kmrca_tail(*spec, 3, 0.7, 2).value,
                1e-10);
  }
}

TEST(FddProbability, ChainValuesAreNonnegativeAndExchangeable) {
  const double a = fdd_probability(query(kTernary, 2, 3, {1.0}, "1,2|3")).value;
  const double b = fdd_probability(query(kTernary, 2, 3, {1.0}, "1,3|2")).value;
  const double c = fdd_probability(query(kTernary, 2, 3, {1.0}, "1|2,3")).value;
  EXPECT_GT(a, 0);
  EXPECT_NEAR(a, b, 1e-12);
  EXPECT_NEAR(a, c, 1e-12);
}

TEST(FddProbability, RejectsInconsistentQueries) {
  EXPECT_THROW(fdd_probability(query(kYule, 1, 2, {1.5}, "1|2")), PreconditionError);
  EXPECT_THROW(fdd_probability(query(kYule, 1, 2, {0.5, 0.4}, "1,2;1|2")), PreconditionError);
  EXPECT_THROW(fdd_probability(query(kYule, 1, 2, {0.3, 0.6}, "1|2")), PreconditionError);
  EXPECT_THROW(fdd_probability(query(kYule, 1, 2, {0.5}, "1|2", Orientation::kMerging)), PreconditionError);
}

TEST(LambertTail, Endpoints) {
  for (const auto* spec : {&kYule, &kSuper, &kGeom}) {
    EXPECT_NEAR(lambert_tail(*spec, 0, 1.3).value, prob_at_least(*spec, 1.3, 2), 1e-8);
    EXPECT_EQ(lambert_tail(*spec, 1.3, 1.3).value, 0);
  }
  EXPECT_THROW(lambert_tail(kYule, 2, 1), PreconditionError);
}

TEST(KmrcaTail, AtZeroIsTheTailMass) {
  for (int k : {2, 3, 4}) EXPECT_NEAR(kmrca_tail(kSuper, k, 0, 2).value, prob_at_least(kSuper, 2, k), 1e-8);
}

TEST(SplitDensity, VanishesForUnreachableSplitSizes) {
  const MaximalChain ternary = parse_maximal_chain("1,2,3;1|2|3", 3);
  EXPECT_EQ(split_density(kYule, 1, 3, ternary, {0.5}), 0);
  EXPECT_GT(split_density(kTernary, 1, 3, ternary, {0.5}), 0);
}

TEST(SplitDensity, IntegratesToTheTailMassForBirthDeathPairs) {
  const MaximalChain m = parse_maximal_chain("1,2;1|2", 2);
  for (const auto* spec : {&kYule, &kSuper}) {
    const double T = 1.2;
    QuadratureOptions opt;
    opt.abs_tol = 1e-10;
    const double integral =
        integrate([&](double u) { return split_density(*spec, T, 2, m, {u}); }, 1e-12, T - 1e-12, opt).value;
    EXPECT_NEAR(integral, prob_at_least(*spec, T, 2), 1e-6);
  }
}

TEST(SplitDensity, RejectsUnorderedTimes) {
  const MaximalChain m = parse_maximal_chain("1,2,3;1,2|3;1|2|3", 3);
  EXPECT_THROW(split_density(kYule, 1, 3, m, {0.6, 0.4}), PreconditionError);
  EXPECT_THROW(split_density(kYule, 1, 3, m, {0.4}), PreconditionError);
}

TEST(SplitWindows, FullSimplexTimesTopologiesIsTheTailMass) {
  const double T = 2;
  double total = 0;
  for (const auto& m : enumerate_maximal_chains(3, true)) total += split_simplex_probability(kSuper, T, 3, m);
  EXPECT_NEAR(total, prob_at_least(kSuper, T, 3), 1e-3);
  EXPECT_EQ(enumerate_maximal_chains(3, true).size(), 3u);
}

TEST(SplitWindows, ZeroWidthWindowIsZero) {
  const MaximalChain m = parse_maximal_chain("1,2,3;1,2|3;1|2|3", 3);
  EXPECT_EQ(split_window_probability(kYule, 1, 3, m, {{0.2, 0.2}, {0.5, 0.7}}).value, 0);
}

TEST(SplitWindows, PairWindowApproachesLambertTail) {
  const MaximalChain m = parse_maximal_chain("1,2;1|2", 2);
  const double lam = lambert_tail(kYule, 0.3, 1).value;
  double prev_gap = 1;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const double w = split_window_probability(kYule, 1, 2, m, {{0.3, 1 - eps}}).value;
    const double gap = std::abs(w - lam);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 1e-4);
}

TEST(SplitWindows, TwoWindowsMatchIteratedDensityIntegral) {
  const MaximalChain m = parse_maximal_chain("1,2,3;1,2|3;1|2|3", 3);
  const double T = 1.5;
  const double win = split_window_probability(kSuper, T, 3, m, {{0.1, 0.6}, {0.8, 1.4}}).value;
  QuadratureOptions opt;
  opt.abs_tol = 1e-10;
  const double iter = integrate(
                          [&](double u1) {
                            return integrate([&](double u2) { return split_density(kSuper, T, 3, m, {u1, u2}); }, 0.8,
                                             1.4, opt)
                                .value;
                          },
                          0.1, 0.6, opt)
                          .value;
  EXPECT_NEAR(win, iter, 1e-7);
}

TEST(SplitFirstMarginal, BinsAddUpToTheSimplex) {
  const MaximalChain m = parse_maximal_chain("1,2,3;1|2,3;1|2|3", 3);
  const auto bins = split_first_marginal(kSuper, 2, 3, m, {0, 0.5, 1, 1.5, 2});
  double total = 0;
  for (double b : bins) total += b;
  EXPECT_NEAR(total, split_simplex_probability(kSuper, 2, 3, m), 1e-9);
}

TEST(SplitFirstMarginal, PairBinsAreSingleWindows) {
  const MaximalChain m = parse_maximal_chain("1,2;1|2", 2);
  const std::vector<double> edges{0, 0.25, 0.6, 1};
  const auto bins = split_first_marginal(kGeom, 1, 2, m, edges);
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    EXPECT_NEAR(bins[b], split_window_probability(kGeom, 1, 2, m, {{edges[b], edges[b + 1]}}).value, 1e-8);
  }
}

TEST(MixtureDensity, IsAProbabilityDensity) {
  for (const auto* spec : {&kYule, &kGeom, &kCritical}) {
    for (int k : {2, 3}) {
      QuadratureOptions opt;
      opt.abs_tol = 1e-10;
      const double total = integrate([&](double s) { return mixture_density(*spec, 1, k, s); }, 0, 1, opt).value;
      EXPECT_NEAR(total, 1, 1e-6) << spec->to_string() << " k=" << k;
      EXPECT_EQ(mixture_density(*spec, 1, k, 1), 0);
    }
  }
  for (int i = 0; i <= 20; ++i) EXPECT_GE(mixture_density(kYule, 1, 2, i / 20.0), 0);
}

TEST(MarkovTransition, RowsSumToOne) {
  const Partition gamma = parse_partition("1,2,3|4", 4);
  const Block G{1, 2, 3};
  for (const auto* spec : {&kYule, &kGeom, &kTernary}) {
    for (double s : {0.0, 0.4, 0.9}) {
      double total = 0;
      for (const auto& d : enumerate_partitions(G)) {
        auto p = markov_transition(*spec, 2, s, gamma, G, d, 0.3, 1.1);
        ASSERT_TRUE(p.has_value());
        EXPECT_GE(*p, 0);
        total += *p;
      }
      EXPECT_NEAR(total, 1, 1e-8) << spec->to_string() << " s=" << s;
    }
  }
}

TEST(MarkovTransition, EqualTimesAndSingletons) {
  const Partition gamma = parse_partition("1,2|3", 3);
  EXPECT_NEAR(*markov_transition(kGeom, 2, 0.5, gamma, {1, 2}, Partition::single_block(Block{1, 2}), 0.7, 0.7), 1, 1e-12);
  EXPECT_NEAR(*markov_transition(kGeom, 2, 0.5, gamma, {1, 2}, Partition::singletons(Block{1, 2}), 0.7, 0.7), 0, 1e-12);
  EXPECT_NEAR(*markov_transition(kGeom, 2, 0.5, gamma, {3}, Partition::single_block(Block{3}), 0.2, 0.9), 1, 1e-12);
}

TEST(MarkovTransition, RejectsABlockOutsideGamma) {
  const Partition gamma = parse_partition("1,2,3", 3);
  EXPECT_THROW(markov_transition(kYule, 1, 0.5, gamma, {1, 2}, Partition::singletons(Block{1, 2}), 0.2, 0.4), PreconditionError);
  EXPECT_THROW(markov_transition(kYule, 1, 0.5, gamma, {1, 2, 3}, Partition::singletons(Block{1, 2}), 0.2, 0.4),
               PreconditionError);
  EXPECT_THROW(markov_transition(kYule, 1, 0.5, gamma, {1, 2, 3}, Partition::single_block(Block{1, 2, 3}), 0.4, 0.2),
               PreconditionError);
}

TEST(MarkovMixture, ReproducesTheFdd) {
  for (const std::string c : {"1,2|3;1|2|3", "1,2,3;1|2,3", "1|2|3;1|2|3"}) {
    const LawQuery q = query(kGeom, 2, 3, {0.5, 1.5}, c);
    EXPECT_NEAR(markov_mixture_fdd(q).value, fdd_probability(q).value, 1e-7) << c;
  }
}

TEST(Projection, ZeroIsTheFdd) {
  for (const auto& c : enumerate_chains(3, 1)) {
    const LawQuery q{kTernary, 1.5, 3, {0.8}, c};
    EXPECT_NEAR(projection_fdd(q, 0).value, fdd_probability(q).value, 1e-10);
  }
}

TEST(Projection, OneExtraParticleIsTheSumOverExtensions) {
  const Mesh mesh{0.5};
  for (const auto* spec : {&kYule, &kGeom}) {
    for (const auto& c : enumerate_chains(2, 1)) {
      double ext = 0;
      for (const auto& e : enumerate_chains(3, 1)) {
        if (project(e.parts()[0], {1, 2}) == c.parts()[0]) ext += fdd_probability({*spec, 1, 3, mesh, e}).value;
      }
      EXPECT_NEAR(projection_fdd({*spec, 1, 2, mesh, c}, 1).value, ext, 1e-6) << c.to_string();
    }
  }
}

TEST(Projection, ExactSizeIsTheDifferenceAndNonnegative) {
  for (const auto& c : enumerate_chains(2, 2)) {
    const LawQuery q{kGeom, 1.2, 2, {0.3, 0.9}, c};
    for (int j = 0; j <= 2; ++j) {
      const double diff = projection_fdd(q, j).value - projection_fdd(q, j + 1).value;
      const double exact = exact_size_fdd(q, j);
      EXPECT_GE(exact, -1e-14);
      EXPECT_NEAR(exact, diff, 1e-7) << c.to_string() << " j=" << j;
    }
  }
}

TEST(FaaDiBruno, ChainSumMatchesDerivative) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0, 1);
  for (const auto* spec : {&kYule, &kCritical, &kGeom}) {
    for (int k = 1; k <= 4; ++k) {
      for (int n = 1; n <= 2; ++n) {
        for (int trial = 0; trial < 3; ++trial) {
          const double T = 0.5 + 2 * u(rng);
          Mesh mesh;
          for (int i = 0; i < n; ++i) mesh.push_back(T * u(rng));
          std::sort(mesh.begin(), mesh.end());
          const IdentityGap g = faa_di_bruno_check(*spec, T, k, mesh, u(rng));
          EXPECT_LE(g.gap, 1e-8) << spec->to_string() << " k=" << k;
          if (k == 1) {
            EXPECT_NEAR(g.lhs, g.rhs, 1e-12 * g.lhs);
          }
        }
      }
    }
  }
}

TEST(BetaInversion, Examples) {
  const IdentityGap three = beta_inversion_check(2, {0, 0, 0, 1});
  EXPECT_NEAR(three.lhs, 1, 1e-12);
  EXPECT_EQ(three.rhs, 1);
  const IdentityGap one = beta_inversion_check(2, {0, 1});
  EXPECT_EQ(one.lhs, 0);
  EXPECT_EQ(one.rhs, 0);
  OdeOptions opt;
  opt.max_order = 40;
  const PopulationPmf p = population_pmf(kYule, 1, 40, opt);
  for (int k : {1, 2, 3, 5}) EXPECT_LE(beta_inversion_check(k, p.p).gap, 1e-6);
}

TEST(ReversedFdd, IsTheForwardLawAtMirroredTimes) {
  const double T = 2;
  for (const std::string c : {"1,2|3;1,2,3", "1|2|3;1,3|2", "1|2|3;1,2,3"}) {
    const LawQuery rq = query(kGeom, T, 3, {0.4, 1.5}, c, Orientation::kMerging);
    const LawQuery fq{kGeom, T, 3, {T - 1.5, T - 0.4}, rq.chain.reversed()};
    EXPECT_NEAR(reversed_fdd(rq).value, fdd_probability(fq).value, 1e-9) << c;
  }
  EXPECT_THROW(reversed_fdd(query(kGeom, T, 2, {0.5}, "1|2")), PreconditionError);
}

}  // namespace
}  // namespace gwgen
