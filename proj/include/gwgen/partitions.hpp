// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Set partitions of a finite ground set, refinement chains, breakage and
// merger numbers, maximal chains.
//
// Text format: blocks separated by '|', elements by ',' ("1,3|2"); chains
// are partitions separated by ';' ("1,2|3;1|2|3").

#ifndef GWGEN_PARTITIONS_HPP_
#define GWGEN_PARTITIONS_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gwgen/error.hpp"

namespace gwgen {

inline constexpr int kMaxGroundSet = 10;
inline constexpr int kMaxChainLength = 6;

// Sorted ascending, non-empty.
using Block = std::vector<int>;

class Partition {
 public:
  Partition() = default;

  // Blocks must be non-empty and pairwise disjoint; the ground set is their
  // union. Canonicalizes (elements ascending, blocks by least element).
  explicit Partition(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
    require(!blocks_.empty(), "non-empty-partition", "no blocks");
    for (auto& b : blocks_) {
      require(!b.empty(), "non-empty-block", "empty block");
      std::sort(b.begin(), b.end());
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const Block& a, const Block& b) { return a.front() < b.front(); });
    Block all = ground();
    for (std::size_t i = 1; i < all.size(); ++i) {
      require(all[i] != all[i - 1], "disjoint-blocks",
              "duplicate element " + std::to_string(all[i]));
    }
    require(all.front() >= 1, "positive-elements", "elements must be >= 1");
  }

  // Partition whose ground set must be exactly {1..k}.
  static Partition on(int k, std::vector<Block> blocks) {
    Partition p(std::move(blocks));
    Block all = p.ground();
    for (int e : all) {
      require(e <= k, "element-in-range",
              "element " + std::to_string(e) + " > k=" + std::to_string(k));
    }
    require(static_cast<int>(all.size()) == k, "covers-ground-set",
            "missing element(s) of {1.." + std::to_string(k) + "}");
    return p;
  }

  static Partition single_block(const Block& ground) { return Partition({ground}); }
  static Partition single_block(int k) { return single_block(range(k)); }

  static Partition singletons(const Block& ground) {
    std::vector<Block> bs;
    for (int e : ground) bs.push_back({e});
    return Partition(std::move(bs));
  }
  static Partition singletons(int k) { return singletons(range(k)); }

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  const Block& operator[](std::size_t i) const { return blocks_[i]; }

  Block ground() const {
    Block all;
    for (const auto& b : blocks_) all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    return all;
  }
  int ground_size() const {
    int n = 0;
    for (const auto& b : blocks_) n += static_cast<int>(b.size());
    return n;
  }

  // Index of the block holding `e`, or -1.
  int block_of(int e) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), e)) {
        return static_cast<int>(i);
      }
    }
    return -1;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (i) out += '|';
      for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
        if (j) out += ',';
        out += std::to_string(blocks_[i][j]);
      }
    }
    return out;
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.blocks_ == b.blocks_; }
  friend bool operator<(const Partition& a, const Partition& b) { return a.blocks_ < b.blocks_; }

  static Block range(int k) {
    Block r(static_cast<std::size_t>(k));
    std::iota(r.begin(), r.end(), 1);
    return r;
  }

 private:
  std::vector<Block> blocks_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline int parse_int(const std::string& s) {
  require(!s.empty(), "integer-syntax", "empty integer");
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size(), "integer-syntax", "bad integer '" + s + "'");
  return v;
}

// Restricted-growth enumeration of all partitions of `ground`.
inline void for_each_partition(const Block& ground,
                               const std::function<void(std::vector<Block>&&)>& visit) {
  const int n = static_cast<int>(ground.size());
  std::vector<int> rgs(n, 0), maxes(n, 0);
  while (true) {
    int nblocks = n ? *std::max_element(rgs.begin(), rgs.end()) + 1 : 0;
    std::vector<Block> bs(nblocks);
    for (int i = 0; i < n; ++i) bs[rgs[i]].push_back(ground[i]);
    visit(std::move(bs));
    int i = n - 1;
    while (i > 0 && rgs[i] > maxes[i - 1]) --i;
    if (i <= 0) break;
    ++rgs[i];
    maxes[i] = std::max(maxes[i - 1], rgs[i]);
    for (int j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      maxes[j] = maxes[i];
    }
  }
}

}  // namespace detail

inline Partition parse_partition(std::string_view text, int k) {
  require(k >= 1, "k-positive", "k must be >= 1");
  std::vector<Block> blocks;
  std::vector<bool> seen(static_cast<std::size_t>(k) + 1, false);
  for (const auto& btxt : detail::split(text, '|')) {
    require(!btxt.empty(), "non-empty-block", "empty block in '" + std::string(text) + "'");
    Block b;
    for (const auto& etxt : detail::split(btxt, ',')) {
      int e = detail::parse_int(etxt);
      require(e >= 1 && e <= k, "element-in-range",
              "element " + etxt + " outside {1.." + std::to_string(k) + "}");
      require(!seen[e], "duplicate-element", "element " + etxt + " repeated");
      seen[e] = true;
      b.push_back(e);
    }
    blocks.push_back(std::move(b));
  }
  return Partition::on(k, std::move(blocks));
}

// True iff every block of `alpha` is a union of blocks of `beta`
// (alpha can break into beta).
inline bool refines(const Partition& alpha, const Partition& beta) {
  require(alpha.ground() == beta.ground(), "same-ground-set", "partitions on different sets");
  for (const auto& b : beta.blocks()) {
    int home = alpha.block_of(b.front());
    for (int e : b) {
      if (alpha.block_of(e) != home) return false;
    }
  }
  return true;
}

inline Partition project(const Partition& alpha, const Block& subset) {
  Block b = subset;
  std::sort(b.begin(), b.end());
  require(!b.empty(), "non-empty-subset", "projection onto empty set");
  require(std::adjacent_find(b.begin(), b.end()) == b.end(), "subset-distinct", "repeated element");
  std::vector<Block> out(alpha.size());
  for (int e : b) {
    int i = alpha.block_of(e);
    require(i >= 0, "subset-of-ground", "element " + std::to_string(e) + " not in ground set");
    out[i].push_back(e);
  }
  std::erase_if(out, [](const Block& x) { return x.empty(); });
  return Partition(std::move(out));
}

inline std::vector<Partition> enumerate_partitions(const Block& ground) {
  require(!ground.empty() && static_cast<int>(ground.size()) <= kMaxGroundSet, "ground-set-cap",
          "ground set size must be in [1," + std::to_string(kMaxGroundSet) + "]");
  std::vector<Partition> out;
  detail::for_each_partition(ground, [&](std::vector<Block>&& bs) { out.emplace_back(std::move(bs)); });
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Partition> enumerate_partitions(int k) {
  require(k >= 1 && k <= kMaxGroundSet, "ground-set-cap",
          "k must be in [1," + std::to_string(kMaxGroundSet) + "]");
  return enumerate_partitions(Partition::range(k));
}

// All beta with refines(alpha, beta).
inline std::vector<Partition> refinements(const Partition& alpha) {
  std::vector<std::vector<Partition>> per_block;
  for (const auto& b : alpha.blocks()) per_block.push_back(enumerate_partitions(b));
  std::vector<Partition> out;
  std::vector<std::size_t> idx(per_block.size(), 0);
  while (true) {
    std::vector<Block> bs;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto& p = per_block[i][idx[i]].blocks();
      bs.insert(bs.end(), p.begin(), p.end());
    }
    out.emplace_back(std::move(bs));
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == per_block[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

enum class Orientation {
  kBreaking,  // gamma_i refines into gamma_{i+1}; gamma_0 = one block, gamma_{n+1} = singletons
  kMerging,   // reversed; gamma_0 = singletons, gamma_{n+1} = one block
};

// (gamma_1..gamma_n) on {1..k}; the endpoints gamma_0 and gamma_{n+1} are
// implicit and depend on the orientation. Consecutive parts may be equal.
class Chain {
 public:
  Chain(int k, std::vector<Partition> parts, Orientation o = Orientation::kBreaking)
      : k_(k), parts_(std::move(parts)), orientation_(o) {
    require(k >= 1 && k <= kMaxGroundSet, "ground-set-cap", "k out of range");
    require(!parts_.empty() && static_cast<int>(parts_.size()) <= kMaxChainLength, "chain-length-cap",
            "chain length must be in [1," + std::to_string(kMaxChainLength) + "]");
    const Block ground = Partition::range(k);
    for (const auto& p : parts_) {
      require(p.ground() == ground, "chain-ground-set", "part " + p.to_string() + " is not on {1..k}");
    }
    for (int i = 0; i <= length(); ++i) {
      bool ok = o == Orientation::kBreaking ? refines(level(i), level(i + 1))
                                            : refines(level(i + 1), level(i));
      require(ok, "chain-refinement",
              "level " + std::to_string(i) + " -> " + std::to_string(i + 1) + " is not a " +
                  (o == Orientation::kBreaking ? "breakage" : "merger"));
    }
  }

  int k() const { return k_; }
  int length() const { return static_cast<int>(parts_.size()); }
  Orientation orientation() const { return orientation_; }
  const std::vector<Partition>& parts() const { return parts_; }

  // Level i in 0..n+1, endpoints included.
  Partition level(int i) const {
    const bool first = (i == 0), last = (i == length() + 1);
    if (!first && !last) return parts_[static_cast<std::size_t>(i - 1)];
    const bool coarse = (orientation_ == Orientation::kBreaking) == first;
    return coarse ? Partition::single_block(k_) : Partition::singletons(k_);
  }

  Chain reversed() const {
    std::vector<Partition> r(parts_.rbegin(), parts_.rend());
    return Chain(k_, std::move(r),
                 orientation_ == Orientation::kBreaking ? Orientation::kMerging : Orientation::kBreaking);
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) out += ';';
      out += parts_[i].to_string();
    }
    return out;
  }

  friend bool operator==(const Chain& a, const Chain& b) {
    return a.k_ == b.k_ && a.orientation_ == b.orientation_ && a.parts_ == b.parts_;
  }
  friend bool operator<(const Chain& a, const Chain& b) {
    if (a.k_ != b.k_) return a.k_ < b.k_;
    if (a.orientation_ != b.orientation_) return a.orientation_ < b.orientation_;
    return a.parts_ < b.parts_;
  }

 private:
  int k_;
  std::vector<Partition> parts_;
  Orientation orientation_;
};

inline Chain parse_chain(std::string_view text, int k, Orientation o = Orientation::kBreaking) {
  std::vector<Partition> parts;
  for (const auto& p : detail::split(text, ';')) parts.push_back(parse_partition(p, k));
  return Chain(k, std::move(parts), o);
}

inline std::vector<Chain> enumerate_chains(int k, int n) {
  require(n >= 1 && n <= kMaxChainLength, "chain-length-cap", "n out of range");
  std::vector<Chain> out;
  std::vector<Partition> cur;
  std::function<void(const Partition&)> grow = [&](const Partition& prev) {
    if (static_cast<int>(cur.size()) == n) {
      out.emplace_back(k, cur);
      return;
    }
    for (auto& next : refinements(prev)) {
      cur.push_back(next);
      grow(next);
      cur.pop_back();
    }
  };
  grow(Partition::single_block(k));
  return out;
}

// Row i (0..n) lists b_i(Gamma) for the blocks Gamma of level i in canonical
// order: the number of blocks of level i+1 inside Gamma.
using LevelTable = std::vector<std::vector<int>>;

inline LevelTable breakage_numbers(const Chain& c) {
  require(c.orientation() == Orientation::kBreaking, "breaking-chain", "breakage numbers need a breaking chain");
  LevelTable t;
  for (int i = 0; i <= c.length(); ++i) {
    Partition here = c.level(i), next = c.level(i + 1);
    std::vector<int> row(here.size(), 0);
    for (const auto& b : next.blocks()) ++row[static_cast<std::size_t>(here.block_of(b.front()))];
    t.push_back(std::move(row));
  }
  return t;
}

// Row i (1..n+1) lists m_i(Gamma) for the blocks Gamma of level i: the number
// of blocks of level i-1 whose union is Gamma. Row 0 is empty.
inline LevelTable merger_numbers(const Chain& c) {
  require(c.orientation() == Orientation::kMerging, "merging-chain", "merger numbers need a merging chain");
  LevelTable t(1);
  for (int i = 1; i <= c.length() + 1; ++i) {
    Partition here = c.level(i), prev = c.level(i - 1);
    std::vector<int> row(here.size(), 0);
    for (const auto& b : prev.blocks()) ++row[static_cast<std::size_t>(here.block_of(b.front()))];
    t.push_back(std::move(row));
  }
  return t;
}

struct Maximality {
  bool maximal = false;
  std::vector<int> q;  // q_i = 1 + |eta_i| - |eta_{i-1}|
};

// `eta` lists eta_0 = {{1..k}}, ..., eta_n = singletons explicitly.
inline Maximality is_maximal(const std::vector<Partition>& eta) {
  Maximality r;
  if (eta.size() < 2) return r;
  const Block ground = eta.front().ground();
  if (eta.front().size() != 1 || eta.back().size() != ground.size()) return r;
  for (std::size_t i = 1; i < eta.size(); ++i) {
    if (eta[i].ground() != ground || !refines(eta[i - 1], eta[i])) return r;
    // Exactly one block of eta_{i-1} is not itself a block of eta_i.
    int broken = 0;
    for (const auto& b : eta[i - 1].blocks()) {
      if (std::find(eta[i].blocks().begin(), eta[i].blocks().end(), b) == eta[i].blocks().end()) {
        ++broken;
      }
    }
    if (broken != 1) return r;
    r.q.push_back(1 + static_cast<int>(eta[i].size()) - static_cast<int>(eta[i - 1].size()));
  }
  r.maximal = true;
  return r;
}

class MaximalChain {
 public:
  explicit MaximalChain(std::vector<Partition> eta) : eta_(std::move(eta)) {
    Maximality m = is_maximal(eta_);
    require(m.maximal, "maximal-chain", "chain is not maximal");
    q_ = std::move(m.q);
  }
  int k() const { return eta_.front().ground_size(); }
  int splits() const { return static_cast<int>(q_.size()); }
  const std::vector<int>& q() const { return q_; }
  const std::vector<Partition>& steps() const { return eta_; }
  bool binary() const {
    return std::all_of(q_.begin(), q_.end(), [](int x) { return x == 2; });
  }
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < eta_.size(); ++i) {
      if (i) out += ';';
      out += eta_[i].to_string();
    }
    return out;
  }

 private:
  std::vector<Partition> eta_;
  std::vector<int> q_;
};

// Endpoints must be written out: "1,2,3;1,2|3;1|2|3".
inline MaximalChain parse_maximal_chain(std::string_view text, int k) {
  std::vector<Partition> eta;
  for (const auto& p : detail::split(text, ';')) eta.push_back(parse_partition(p, k));
  return MaximalChain(std::move(eta));
}

inline std::vector<MaximalChain> enumerate_maximal_chains(int k, bool binary_only = false) {
  require(k >= 1 && k <= kMaxGroundSet, "ground-set-cap", "k out of range");
  std::vector<MaximalChain> out;
  std::vector<Partition> cur{Partition::single_block(k)};
  std::function<void()> grow = [&]() {
    const Partition p = cur.back();
    if (static_cast<int>(p.size()) == k) {
      out.emplace_back(cur);
      return;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i].size() < 2) continue;
      for (const auto& sub : enumerate_partitions(p[i])) {
        if (sub.size() < 2 || (binary_only && sub.size() != 2)) continue;
        std::vector<Block> bs;
        for (std::size_t j = 0; j < p.size(); ++j) {
          if (j != i) bs.push_back(p[j]);
        }
        bs.insert(bs.end(), sub.blocks().begin(), sub.blocks().end());
        cur.emplace_back(std::move(bs));
        grow();
        cur.pop_back();
      }
    }
  };
  if (k == 1) return out;
  grow();
  return out;
}

// Ranked binary trees with k labelled leaves: k!(k-1)!/2^{k-1}.
inline std::uint64_t ranked_binary_count(int k) {
  require(k >= 2 && k <= kMaxGroundSet, "k-at-least-2", "ranked_binary_count needs 2 <= k <= 10");
  // Product over merge steps of C(j,2), j = 2..k.
  std::uint64_t n = 1;
  for (std::uint64_t j = 2; j <= static_cast<std::uint64_t>(k); ++j) n *= j * (j - 1) / 2;
  return n;
}

}  // namespace gwgen

#endif  // GWGEN_PARTITIONS_HPP_
