// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gwgen/treesim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "gwgen/laws.hpp"

namespace gwgen {
namespace {

const OffspringSpec kYule = OffspringSpec::birth_death(0, 1);

std::string event_log(const Genealogy& g) {
  std::ostringstream os;
  write_event_log(os, 0, g);
  return os.str();
}

TEST(SimulateTree, YuleMeanPopulation) {
  const int reps = 10000;
  double sum = 0, sum2 = 0;
  for (int r = 0; r < reps; ++r) {
    const double n = static_cast<double>(simulate_tree(kYule, 2, static_cast<std::uint64_t>(r)).alive.size());
    sum += n;
    sum2 += n * n;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
  EXPECT_NEAR(mean, std::exp(2.0), 3 * se);
}

TEST(SimulateTree, IsDeterministicGivenTheSeed) {
  const OffspringSpec spec = OffspringSpec::finite_pmf({0.2, 0.3, 0.3, 0.2});
  const Genealogy a = simulate_tree(spec, 3, 99), b = simulate_tree(spec, 3, 99);
  EXPECT_EQ(event_log(a), event_log(b));
  EXPECT_EQ(a.alive, b.alive);
  EXPECT_NE(event_log(a), event_log(simulate_tree(spec, 3, 100)));
}

TEST(SimulateTree, GenealogyIsConsistent) {
  const Genealogy g = simulate_tree(OffspringSpec::finite_pmf({0.25, 0, 0.5, 0.25}), 2.5, 3);
  for (std::size_t i = 1; i < g.size(); ++i) {
    const auto p = static_cast<std::size_t>(g.parent[i]);
    EXPECT_LT(g.parent[i], static_cast<int>(i));
    EXPECT_EQ(g.birth[i], g.death[p]);
    EXPECT_GT(g.death[i], g.birth[i]);
  }
  for (int id : g.alive) EXPECT_GE(g.death[static_cast<std::size_t>(id)], g.T);
  EXPECT_EQ(g.population_at(g.T), static_cast<long>(g.alive.size()));
  EXPECT_EQ(g.population_at(0), 1);
}

TEST(SimulateTree, ParticleCapIsEnforced) {
  EXPECT_THROW(simulate_tree(OffspringSpec::finite_pmf({0, 0, 0, 1}), 20, 1, 1000), SimulationError);
}

TEST(SamplePartitionPath, NoneWhenTooFewParticles) {
  const OffspringSpec die = OffspringSpec::birth_death(0.95, 0.05);
  const Genealogy g = simulate_tree(die, 200, 7);
  EXPECT_TRUE(g.alive.empty());
  EXPECT_FALSE(sample_partition_path(g, 1, 1).has_value());
  const Genealogy root = simulate_tree(kYule, 1e-12, 7);
  ASSERT_EQ(root.alive.size(), 1u);
  EXPECT_FALSE(sample_partition_path(root, 2, 1).has_value());
}

TEST(SamplePartitionPath, BoundaryValues) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Genealogy g = simulate_tree(OffspringSpec::finite_pmf({0.2, 0, 0.5, 0.3}), 2, seed);
    const auto p = sample_partition_path(g, 3, seed);
    if (!p) continue;
    ++checked;
    EXPECT_EQ(p->at(0), Partition::single_block(3));
    EXPECT_EQ(p->at(2), Partition::singletons(3));
  }
  EXPECT_GT(checked, 10);
}

// Latest common ancestor of two particles by walking parent pointers.
int brute_mrca(const Genealogy& g, int a, int b) {
  std::set<int> up;
  for (int x = a; x >= 0; x = g.parent[static_cast<std::size_t>(x)]) up.insert(x);
  for (int x = b; x >= 0; x = g.parent[static_cast<std::size_t>(x)]) {
    if (up.count(x)) return x;
  }
  return -1;
}

TEST(PartitionPathOf, PairJumpsOnceAtTheMrcaDeath) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Genealogy g = simulate_tree(kYule, 1.5, seed);
    if (g.alive.size() < 2) continue;
    const int a = g.alive.front(), b = g.alive.back();
    const PartitionPath p = partition_path_of(g, {a, b});
    ASSERT_EQ(p.jumps().size(), 1u);
    EXPECT_EQ(p.jumps()[0].first, g.death[static_cast<std::size_t>(brute_mrca(g, a, b))]);
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(ReversePath, IsAnInvolutionAndMirrorsJumpTimes) {
  const PartitionPath p(3, 2.0, Orientation::kBreaking, Partition::single_block(3),
                        {{0.5, parse_partition("1,3|2", 3)}, {1.2, Partition::singletons(3)}});
  const PartitionPath r = reverse_path(p);
  EXPECT_EQ(r.orientation(), Orientation::kMerging);
  EXPECT_EQ(r.initial(), Partition::singletons(3));
  ASSERT_EQ(r.jumps().size(), 2u);
  EXPECT_DOUBLE_EQ(r.jumps()[0].first, 0.8);
  EXPECT_DOUBLE_EQ(r.jumps()[1].first, 1.5);
  // rho_t = pi_{(T-t)-}.
  EXPECT_EQ(r.at(1.0), p.at(0.9));
  EXPECT_EQ(r.at(0.8), parse_partition("1,3|2", 3));
  const PartitionPath rr = reverse_path(r);
  EXPECT_EQ(rr.initial(), p.initial());
  ASSERT_EQ(rr.jumps().size(), p.jumps().size());
  for (std::size_t i = 0; i < p.jumps().size(); ++i) {
    EXPECT_NEAR(rr.jumps()[i].first, p.jumps()[i].first, 1e-15);
    EXPECT_EQ(rr.jumps()[i].second, p.jumps()[i].second);
  }
}

TEST(PartitionPathCtor, RejectsInvalidPaths) {
  const Partition top = Partition::single_block(2), bottom = Partition::singletons(2);
  EXPECT_THROW(PartitionPath(2, 1, Orientation::kBreaking, top, {{0.5, bottom}, {0.4, bottom}}), PreconditionError);
  EXPECT_THROW(PartitionPath(2, 1, Orientation::kBreaking, top, {{1.5, bottom}}), PreconditionError);
  EXPECT_THROW(PartitionPath(2, 1, Orientation::kBreaking, bottom, {{0.5, top}}), PreconditionError);
  EXPECT_THROW(PartitionPath(2, 1, Orientation::kBreaking, top, {{0.5, top}}), PreconditionError);
}

TEST(ConditionedEnsemble, YuleAcceptanceRate) {
  const Ensemble e = conditioned_ensemble(kYule, 1, 2, 20000, 5);
  ASSERT_EQ(e.paths.size(), 20000u);
  const double p = 1 - std::exp(-1.0);
  const double sd = std::sqrt(p * (1 - p) / static_cast<double>(e.attempts));
  EXPECT_NEAR(e.acceptance_rate(), p, 3 * sd);
}

TEST(ConditionedEnsemble, EmptyAndWorkerIndependent) {
  EXPECT_TRUE(conditioned_ensemble(kYule, 1, 2, 0, 5).paths.empty());
  EnsembleOptions two;
  two.workers = 2;
  const Ensemble a = conditioned_ensemble(kYule, 1, 3, 500, 8);
  const Ensemble b = conditioned_ensemble(kYule, 1, 3, 500, 8, two);
  ASSERT_EQ(a.paths.size(), b.paths.size());
  EXPECT_EQ(a.attempts, b.attempts);
  for (std::size_t i = 0; i < a.paths.size(); ++i) EXPECT_EQ(a.paths[i].jump_times(), b.paths[i].jump_times());
}

TEST(ConditionedEnsemble, DeepSubcriticalAbortsAtTheFloor) {
  EXPECT_THROW(conditioned_ensemble(OffspringSpec::birth_death(0.95, 0.05), 30, 2, 10, 1), SimulationError);
}

TEST(EmpiricalFdd, FrequenciesSumToOneAndEarlyMassIsOnTheRoot) {
  const Ensemble e = conditioned_ensemble(kYule, 1, 3, 2000, 4);
  const ChainTable t = empirical_fdd(e.paths, {0.3, 0.7});
  double total = 0;
  for (const auto& [c, n] : t.counts) total += t.frequency(c);
  EXPECT_NEAR(total, 1, 1e-12);
  const ChainTable early = empirical_fdd(e.paths, {1e-9});
  EXPECT_EQ(early.frequency(Chain(3, {Partition::single_block(3)})), 1.0);
}

TEST(EmpiricalFdd, YulePairMatchesTheLambertLaw) {
  const Ensemble e = conditioned_ensemble(kYule, 1, 2, 100000, 42);
  const ChainTable t = empirical_fdd(e.paths, {0.5});
  const double p = lambert_tail(kYule, 0.5, 1).value / prob_at_least(kYule, 1, 2);
  const double sd = std::sqrt(p * (1 - p) / 100000);
  EXPECT_NEAR(t.frequency(Chain(2, {Partition::single_block(2)})), p, 3 * sd);
}

TEST(SplitTimeHistogram, BirthDeathPathsAreBinary) {
  const Ensemble e = conditioned_ensemble(OffspringSpec::birth_death(0.25, 0.75), 2, 3, 2000, 6);
  const SplitHistogram h = split_time_histogram(e.paths, {0, 0.5, 1, 1.5, 2});
  EXPECT_EQ(h.binary_fraction(), 1.0);
  long total = 0;
  for (long c : h.all) total += c;
  EXPECT_EQ(total, 2 * h.binary_paths);
}

TEST(SplitTimeHistogram, TernaryOffspringBreaksBinarity) {
  const Ensemble e = conditioned_ensemble(OffspringSpec::finite_pmf({0.3, 0, 0.3, 0.4}), 1.5, 3, 3000, 6);
  const SplitHistogram h = split_time_histogram(e.paths, {0, 0.75, 1.5});
  EXPECT_LT(h.binary_fraction(), 1.0);
  EXPECT_GT(h.binary_fraction(), 0.0);
  long total = 0;
  for (long c : h.all) total += c;
  EXPECT_EQ(total, 2 * h.binary_paths);
  EXPECT_THROW(split_time_histogram(e.paths, {0.0}), PreconditionError);
}

}  // namespace
}  // namespace gwgen
