// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gwgen/partitions.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <vector>

namespace gwgen {
namespace {

// Block labels of element 1..k in canonical restricted-growth form.
using Labels = std::vector<int>;

Labels canonical(const Labels& raw) {
  std::map<int, int> rename;
  Labels out;
  for (int x : raw) {
    auto it = rename.find(x);
    if (it == rename.end()) it = rename.emplace(x, static_cast<int>(rename.size())).first;
    out.push_back(it->second);
  }
  return out;
}

// Every partition of {1..k} by brute force over all maps {1..k} -> {1..k}.
std::set<Labels> brute_partitions(int k) {
  std::set<Labels> out;
  Labels raw(static_cast<std::size_t>(k), 0);
  while (true) {
    out.insert(canonical(raw));
    int i = 0;
    while (i < k && ++raw[static_cast<std::size_t>(i)] == k) raw[static_cast<std::size_t>(i++)] = 0;
    if (i == k) break;
  }
  return out;
}

// alpha can break into beta iff beta's labels determine alpha's.
bool brute_refines(const Labels& alpha, const Labels& beta) {
  std::map<int, int> home;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    auto [it, fresh] = home.emplace(beta[i], alpha[i]);
    if (!fresh && it->second != alpha[i]) return false;
  }
  return true;
}

Labels labels_of(const Partition& p, int k) {
  Labels l;
  for (int e = 1; e <= k; ++e) l.push_back(p.block_of(e));
  return canonical(l);
}

// Ranked binary merge histories: merge one pair of the j current lineages,
// j = k, ..., 2.
std::uint64_t brute_merge_histories(int lineages) {
  if (lineages <= 1) return 1;
  std::uint64_t pairs = 0;
  for (int a = 0; a < lineages; ++a) {
    for (int b = a + 1; b < lineages; ++b) ++pairs;
  }
  return pairs * brute_merge_histories(lineages - 1);
}

TEST(ParsePartition, ReadsCanonicalText) {
  const Partition p = parse_partition("1,3|2", 3);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], (Block{1, 3}));
  EXPECT_EQ(p[1], (Block{2}));
  EXPECT_EQ(p.to_string(), "1,3|2");
}

TEST(ParsePartition, CanonicalizesBlockOrder) {
  EXPECT_EQ(parse_partition("2|1,3", 3), parse_partition("1,3|2", 3));
  EXPECT_EQ(parse_partition("3,1|2", 3).to_string(), "1,3|2");
}

TEST(ParsePartition, RejectsMalformedInput) {
  EXPECT_THROW(parse_partition("1|1", 2), PreconditionError);
  EXPECT_THROW(parse_partition("1|3", 2), PreconditionError);
  EXPECT_THROW(parse_partition("1", 2), PreconditionError);
  EXPECT_THROW(parse_partition("1||2", 2), PreconditionError);
  EXPECT_THROW(parse_partition("1,x", 2), PreconditionError);
}

TEST(Refines, MatchesExamples) {
  EXPECT_TRUE(refines(parse_partition("1,2,4|3", 4), parse_partition("1|2,4|3", 4)));
  const Partition a = parse_partition("1,2|3", 3);
  EXPECT_TRUE(refines(a, a));
  EXPECT_FALSE(refines(parse_partition("1|2", 2), parse_partition("1,2", 2)));
}

TEST(Refines, AgreesWithBruteForceOnAllPairs) {
  for (int k = 1; k <= 4; ++k) {
    const auto all = enumerate_partitions(k);
    for (const auto& a : all) {
      for (const auto& b : all) {
        EXPECT_EQ(refines(a, b), brute_refines(labels_of(a, k), labels_of(b, k)))
            << a.to_string() << " vs " << b.to_string();
      }
    }
  }
}

TEST(Project, MatchesExamples) {
  EXPECT_EQ(project(parse_partition("1,3|2", 3), {1, 2}).to_string(), "1|2");
  const Partition a = parse_partition("1,4|2|3", 4);
  EXPECT_EQ(project(a, {1, 2, 3, 4}), a);
  EXPECT_EQ(project(parse_partition("1,2,3", 3), {2, 3}).to_string(), "2,3");
  EXPECT_THROW(project(a, {}), PreconditionError);
  EXPECT_THROW(project(a, {5}), PreconditionError);
}

TEST(EnumeratePartitions, CountsAreBellNumbers) {
  EXPECT_EQ(enumerate_partitions(1).size(), 1u);
  EXPECT_EQ(enumerate_partitions(3).size(), 5u);
  EXPECT_EQ(enumerate_partitions(4).size(), 15u);
  for (int k = 1; k <= 6; ++k) {
    const auto brute = brute_partitions(k);
    const auto all = enumerate_partitions(k);
    ASSERT_EQ(all.size(), brute.size()) << "k=" << k;
    std::set<Labels> seen;
    for (const auto& p : all) seen.insert(labels_of(p, k));
    EXPECT_EQ(seen, brute);
  }
  EXPECT_THROW(enumerate_partitions(0), PreconditionError);
  EXPECT_THROW(enumerate_partitions(11), PreconditionError);
}

TEST(EnumerateChains, MatchesExamples) {
  const auto c = enumerate_chains(2, 1);
  ASSERT_EQ(c.size(), 2u);
  std::set<std::string> texts{c[0].to_string(), c[1].to_string()};
  EXPECT_EQ(texts, (std::set<std::string>{"1,2", "1|2"}));
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(enumerate_chains(1, n).size(), 1u);
  EXPECT_EQ(enumerate_chains(3, 1).size(), 5u);
}

TEST(EnumerateChains, CountsMatchBruteForceOverTuples) {
  for (int k = 1; k <= 4; ++k) {
    const auto parts = brute_partitions(k);
    const std::vector<Labels> pv(parts.begin(), parts.end());
    const Labels top(static_cast<std::size_t>(k), 0);
    for (int n = 1; n <= 3; ++n) {
      std::size_t count = 0;
      std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
      while (true) {
        bool ok = brute_refines(top, pv[idx[0]]);
        for (int i = 1; i < n && ok; ++i) ok = brute_refines(pv[idx[i - 1]], pv[idx[i]]);
        count += ok;
        int i = 0;
        while (i < n && ++idx[static_cast<std::size_t>(i)] == pv.size()) idx[static_cast<std::size_t>(i++)] = 0;
        if (i == n) break;
      }
      EXPECT_EQ(enumerate_chains(k, n).size(), count) << "k=" << k << " n=" << n;
    }
  }
}

TEST(ParseChain, RoundTripsAndValidates) {
  const Chain c = parse_chain("1,2|3;1|2|3", 3);
  EXPECT_EQ(c.length(), 2);
  EXPECT_EQ(c.to_string(), "1,2|3;1|2|3");
  EXPECT_EQ(parse_chain(c.to_string(), 3), c);
  EXPECT_THROW(parse_chain("1|2|3;1,2|3", 3), PreconditionError);
  EXPECT_NO_THROW(parse_chain("1|2|3;1,2|3", 3, Orientation::kMerging));
  EXPECT_NO_THROW(parse_chain("1,2|3;1,2|3", 3));
}

TEST(BreakageNumbers, MatchesExamples) {
  const auto b = breakage_numbers(parse_chain("1,2|3", 3));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], (std::vector<int>{2}));
  EXPECT_EQ(b[1], (std::vector<int>{2, 1}));
  const auto b2 = breakage_numbers(parse_chain("1,2", 2));
  EXPECT_EQ(b2[0], (std::vector<int>{1}));
  EXPECT_EQ(b2[1], (std::vector<int>{2}));
}

TEST(BreakageNumbers, TelescopeToKMinusOne) {
  for (int k = 1; k <= 4; ++k) {
    for (int n = 1; n <= 3; ++n) {
      for (const auto& c : enumerate_chains(k, n)) {
        int total = 0;
        for (const auto& row : breakage_numbers(c)) {
          for (int b : row) total += b - 1;
        }
        EXPECT_EQ(total, k - 1) << c.to_string();
      }
    }
  }
}

TEST(MergerNumbers, MatchesExamples) {
  const auto m = merger_numbers(parse_chain("1|2", 2, Orientation::kMerging));
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[1], (std::vector<int>{1, 1}));
  EXPECT_EQ(m[2], (std::vector<int>{2}));
  const auto m3 = merger_numbers(parse_chain("1,2|3", 3, Orientation::kMerging));
  EXPECT_EQ(m3[1], (std::vector<int>{2, 1}));
}

TEST(MergerNumbers, MirrorBreakageNumbersOfTheReversedChain) {
  std::mt19937_64 rng(11);
  const auto chains = enumerate_chains(4, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const Chain& c = chains[rng() % chains.size()];
    const auto b = breakage_numbers(c);
    const auto m = merger_numbers(c.reversed());
    ASSERT_EQ(b.size() + 1, m.size());
    EXPECT_TRUE(m[0].empty());
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
      auto lhs = b[i], rhs = m[n - i];
      std::sort(lhs.begin(), lhs.end());
      std::sort(rhs.begin(), rhs.end());
      EXPECT_EQ(lhs, rhs) << c.to_string() << " level " << i;
    }
  }
}

TEST(IsMaximal, MatchesExamples) {
  const auto a = is_maximal({parse_partition("1,2,3", 3), parse_partition("1,2|3", 3), parse_partition("1|2|3", 3)});
  EXPECT_TRUE(a.maximal);
  EXPECT_EQ(a.q, (std::vector<int>{2, 2}));
  const auto b = is_maximal({parse_partition("1,2,3", 3), parse_partition("1|2|3", 3)});
  EXPECT_TRUE(b.maximal);
  EXPECT_EQ(b.q, (std::vector<int>{3}));
  const auto c = is_maximal({parse_partition("1,2|3,4", 4), parse_partition("1|2|3|4", 4)});
  EXPECT_FALSE(c.maximal);
}

TEST(RankedBinaryCount, MatchesMergeHistoryEnumeration) {
  EXPECT_EQ(ranked_binary_count(2), 1u);
  EXPECT_EQ(ranked_binary_count(3), 3u);
  EXPECT_EQ(ranked_binary_count(4), 18u);
  for (int k = 2; k <= 7; ++k) {
    EXPECT_EQ(ranked_binary_count(k), brute_merge_histories(k)) << "k=" << k;
    EXPECT_EQ(enumerate_maximal_chains(k, true).size(), brute_merge_histories(k)) << "k=" << k;
  }
}

TEST(MaximalChains, AllAreMaximalAndDistinct) {
  for (int k = 2; k <= 5; ++k) {
    const auto all = enumerate_maximal_chains(k);
    std::set<std::string> seen;
    for (const auto& c : all) {
      EXPECT_TRUE(is_maximal(c.steps()).maximal);
      EXPECT_TRUE(seen.insert(c.to_string()).second);
      int sum = 0;
      for (int q : c.q()) sum += q - 1;
      EXPECT_EQ(sum, k - 1);
    }
  }
  const MaximalChain m = parse_maximal_chain("1,2,3;1|2,3;1|2|3", 3);
  EXPECT_TRUE(m.binary());
  EXPECT_THROW(parse_maximal_chain("1,2,3;1,2|3", 3), PreconditionError);
}

}  // namespace
}  // namespace gwgen
