// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Exact simulation of continuous-time Galton-Watson trees (Exp(1) lifetimes),
// uniform sampling of k particles alive at T, and their partition paths.
//
// Random numbers: std::mt19937_64, one stream per replicate, seeded with
// splitmix64(master seed, replicate counter); lifetimes by the Boost.Random
// ziggurat exponential. Results do not depend on the number of worker threads.

#ifndef GWGEN_TREESIM_HPP_
#define GWGEN_TREESIM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/random/exponential_distribution.hpp>

#include "gwgen/error.hpp"
#include "gwgen/offspring.hpp"
#include "gwgen/partitions.hpp"

namespace gwgen {

inline constexpr const char* kGeneratorName = "mt19937_64/splitmix64/ziggurat-exp";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the stream for replicate `counter` under `master`.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t counter) {
  return splitmix64(splitmix64(master) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

// Draws L from an offspring law.
class OffspringSampler {
 public:
  explicit OffspringSampler(const OffspringSpec& spec) : geometric_(spec.kind() == OffspringKind::kGeometric) {
    if (geometric_) {
      geom_ = std::geometric_distribution<int>(spec.geometric_p());
      return;
    }
    const auto& p = spec.pmf_table();
    cdf_.resize(p.size());
    std::partial_sum(p.begin(), p.end(), cdf_.begin());
    cdf_.back() = 1.0;
    if (std::count_if(p.begin(), p.end(), [](double x) { return x > 0; }) == 1) {
      constant_ = static_cast<int>(std::find_if(p.begin(), p.end(), [](double x) { return x > 0; }) - p.begin());
    }
  }
  int operator()(Rng& rng) {
    if (geometric_) return geom_(rng);
    if (constant_ >= 0) return constant_;
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    int j = 0;
    while (cdf_[static_cast<std::size_t>(j)] <= u) ++j;
    return j;
  }

 private:
  bool geometric_;
  int constant_ = -1;
  std::geometric_distribution<int> geom_;
  std::vector<double> cdf_;
};

// Every particle ever born before T. Particle 0 is the root; the children of
// a particle have consecutive ids. death >= T means alive at T.
struct Genealogy {
  double T = 0;
  std::vector<int> parent;
  std::vector<double> birth, death;
  std::vector<int> first_child, n_children;
  std::vector<int> alive;  // ids alive at T, ascending

  struct Event {
    double time;
    int parent;
    std::vector<int> children;
  };

  std::size_t size() const { return parent.size(); }
  bool alive_at(int id, double t) const {
    return birth[static_cast<std::size_t>(id)] <= t && t < death[static_cast<std::size_t>(id)];
  }
  long population_at(double t) const {
    require(t >= 0 && t <= T, "time-in-horizon", "t must lie in [0,T]");
    if (t == T) return static_cast<long>(alive.size());
    long n = 0;
    for (std::size_t i = 0; i < size(); ++i) n += alive_at(static_cast<int>(i), t);
    return n;
  }
  // Deaths before T in time order, with the children they produce.
  std::vector<Event> events() const {
    std::vector<Event> out;
    for (std::size_t i = 0; i < size(); ++i) {
      if (death[i] >= T) continue;
      Event e{death[i], static_cast<int>(i), {}};
      for (int c = 0; c < n_children[i]; ++c) e.children.push_back(first_child[i] + c);
      out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
    return out;
  }
  void clear() {
    parent.clear();
    birth.clear();
    death.clear();
    first_child.clear();
    n_children.clear();
    alive.clear();
  }
};

inline constexpr long kDefaultParticleCap = 10'000'000;

// Simulates into `g` (reusing its storage). Throws SimulationError when more
// than `cap` particles are born.
inline void simulate_tree_into(const OffspringSpec& spec, double T, Rng& rng, Genealogy& g,
                               long cap = kDefaultParticleCap) {
  require(T >= 0 && std::isfinite(T), "horizon-nonnegative", "T must be finite and >= 0");
  OffspringSampler draw(spec);
  boost::random::exponential_distribution<double> lifetime(1.0);
  g.clear();
  g.T = T;
  g.parent.push_back(-1);
  g.birth.push_back(0.0);
  for (std::size_t i = 0; i < g.parent.size(); ++i) {
    const double d = g.birth[i] + lifetime(rng);
    g.first_child.push_back(static_cast<int>(g.parent.size()));
    if (d >= T) {
      g.death.push_back(d);
      g.n_children.push_back(0);
      g.alive.push_back(static_cast<int>(i));
      continue;
    }
    g.death.push_back(d);
    const int L = draw(rng);
    g.n_children.push_back(L);
    if (static_cast<long>(g.parent.size()) + L > cap) {
      throw SimulationError("particle cap " + std::to_string(cap) + " exceeded before T");
    }
    for (int c = 0; c < L; ++c) {
      g.parent.push_back(static_cast<int>(i));
      g.birth.push_back(d);
    }
  }
}

inline Genealogy simulate_tree(const OffspringSpec& spec, double T, std::uint64_t seed, long cap = kDefaultParticleCap) {
  Rng rng(stream_seed(seed, 0));
  Genealogy g;
  simulate_tree_into(spec, T, rng, g, cap);
  return g;
}

// Right-continuous piecewise-constant partition-valued path on [0,T].
class PartitionPath {
 public:
  PartitionPath(int k, double T, Orientation o, Partition initial, std::vector<std::pair<double, Partition>> jumps)
      : k_(k), T_(T), orientation_(o), initial_(std::move(initial)), jumps_(std::move(jumps)) {
    require(initial_.ground_size() == k, "path-ground-set", "initial value is not on {1..k}");
    Partition prev = initial_;
    double t = 0;
    for (const auto& [tau, p] : jumps_) {
      require(tau > t, "path-times-increasing", "jump times must increase");
      require(tau > 0 && tau < T_, "path-times-inside", "jump times must lie in (0,T)");
      const bool ok = o == Orientation::kBreaking ? refines(prev, p) : refines(p, prev);
      require(ok && !(p == prev), "path-monotone", "each jump must strictly break (or merge) blocks");
      prev = p;
      t = tau;
    }
  }

  int k() const { return k_; }
  double T() const { return T_; }
  Orientation orientation() const { return orientation_; }
  const Partition& initial() const { return initial_; }
  const std::vector<std::pair<double, Partition>>& jumps() const { return jumps_; }
  const Partition& final_value() const { return jumps_.empty() ? initial_ : jumps_.back().second; }

  const Partition& at(double t) const {
    require(t >= 0 && t <= T_, "time-in-horizon", "t must lie in [0,T]");
    const Partition* v = &initial_;
    for (const auto& [tau, p] : jumps_) {
      if (tau > t) break;
      v = &p;
    }
    return *v;
  }

  // Every jump changes the block count by exactly one.
  bool binary() const { return static_cast<int>(jumps_.size()) == k_ - 1; }

  std::vector<double> jump_times() const {
    std::vector<double> t;
    for (const auto& j : jumps_) t.push_back(j.first);
    return t;
  }

 private:
  int k_;
  double T_;
  Orientation orientation_;
  Partition initial_;
  std::vector<std::pair<double, Partition>> jumps_;
};

// rho_t = pi_{(T-t)-}: jumps at T - tau_j, taking the value pi had before tau_j.
inline PartitionPath reverse_path(const PartitionPath& p) {
  std::vector<std::pair<double, Partition>> jumps;
  const auto& js = p.jumps();
  for (std::size_t i = js.size(); i-- > 0;) {
    jumps.emplace_back(p.T() - js[i].first, i == 0 ? p.initial() : js[i - 1].second);
  }
  const Orientation o = p.orientation() == Orientation::kBreaking ? Orientation::kMerging : Orientation::kBreaking;
  return PartitionPath(p.k(), p.T(), o, p.final_value(), std::move(jumps));
}

namespace detail {

inline std::vector<int> ancestry(const Genealogy& g, int leaf) {
  std::vector<int> a;
  for (int v = leaf; v >= 0; v = g.parent[static_cast<std::size_t>(v)]) a.push_back(v);
  std::reverse(a.begin(), a.end());
  return a;
}

inline int find_root(std::vector<int>& uf, int x) {
  while (uf[static_cast<std::size_t>(x)] != x) x = uf[static_cast<std::size_t>(x)] = uf[uf[static_cast<std::size_t>(x)]];
  return x;
}

}  // namespace detail

// Partition path of the given sampled leaves (sample index i+1 is leaves[i]):
// i ~_t j iff their most recent common ancestor is still alive at t.
inline PartitionPath partition_path_of(const Genealogy& g, const std::vector<int>& leaves) {
  const int k = static_cast<int>(leaves.size());
  require(k >= 1 && k <= kMaxGroundSet, "ground-set-cap", "k out of range");
  std::vector<std::vector<int>> anc;
  for (int leaf : leaves) anc.push_back(detail::ancestry(g, leaf));
  // Death times of pairwise MRCAs.
  std::vector<std::vector<double>> split(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
  std::vector<double> times;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const auto& a = anc[static_cast<std::size_t>(i)];
      const auto& b = anc[static_cast<std::size_t>(j)];
      std::size_t d = 0;
      while (d + 1 < a.size() && d + 1 < b.size() && a[d + 1] == b[d + 1]) ++d;
      const double t = g.death[static_cast<std::size_t>(a[d])];
      split[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = t;
      times.push_back(t);
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  auto partition_at = [&](double t) {
    std::vector<int> uf(static_cast<std::size_t>(k));
    std::iota(uf.begin(), uf.end(), 0);
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        if (split[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > t) {
          uf[static_cast<std::size_t>(detail::find_root(uf, i))] = detail::find_root(uf, j);
        }
      }
    }
    std::map<int, Block> blocks;
    for (int i = 0; i < k; ++i) blocks[detail::find_root(uf, i)].push_back(i + 1);
    std::vector<Block> out;
    for (auto& [r, b] : blocks) out.push_back(std::move(b));
    return Partition(std::move(out));
  };
  std::vector<std::pair<double, Partition>> jumps;
  for (double t : times) jumps.emplace_back(t, partition_at(t));
  return PartitionPath(k, g.T, Orientation::kBreaking, Partition::single_block(k), std::move(jumps));
}

// k distinct particles alive at T, uniformly; empty when N_T < k.
inline std::optional<PartitionPath> sample_partition_path(const Genealogy& g, int k, Rng& rng) {
  require(k >= 1 && k <= kMaxGroundSet, "ground-set-cap", "k out of range");
  if (static_cast<int>(g.alive.size()) < k) return std::nullopt;
  // Partial Fisher-Yates on a copy of the index range.
  std::vector<int> pool = g.alive;
  std::vector<int> pick;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> u(static_cast<std::size_t>(i), pool.size() - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[u(rng)]);
    pick.push_back(pool[static_cast<std::size_t>(i)]);
  }
  return partition_path_of(g, pick);
}

inline std::optional<PartitionPath> sample_partition_path(const Genealogy& g, int k, std::uint64_t seed) {
  Rng rng(stream_seed(seed, 1));
  return sample_partition_path(g, k, rng);
}

struct EnsembleOptions {
  double acceptance_floor = 1e-4;
  int workers = 1;
  long particle_cap = kDefaultParticleCap;
};

struct Ensemble {
  OffspringSpec spec;
  double T;
  int k;
  std::uint64_t seed;
  std::vector<PartitionPath> paths;
  long attempts = 0;
  double acceptance_rate() const { return attempts ? static_cast<double>(paths.size()) / attempts : 0.0; }
};

// Replicate r simulates a tree from stream_seed(seed, r) and samples k
// particles from the same stream; the first `replicates` successes in r order
// are kept. Aborts if the acceptance rate is below the floor after
// 10 / floor attempts.
inline Ensemble conditioned_ensemble(const OffspringSpec& spec, double T, int k, long replicates, std::uint64_t seed,
                                     const EnsembleOptions& opt = {}) {
  require(replicates >= 0, "replicates-nonnegative", "replicates must be >= 0");
  require(k >= 1 && k <= kMaxGroundSet, "ground-set-cap", "k out of range");
  require(opt.acceptance_floor > 0 && opt.acceptance_floor <= 1, "acceptance-floor", "floor must lie in (0,1]");
  Ensemble e{spec, T, k, seed, {}, 0};
  if (replicates == 0) return e;
  const int workers = std::max(1, opt.workers);
  const long check_after = static_cast<long>(std::ceil(10.0 / opt.acceptance_floor));
  while (static_cast<long>(e.paths.size()) < replicates) {
    const long need = replicates - static_cast<long>(e.paths.size());
    const double rate = e.attempts >= 100 ? std::max(e.acceptance_rate(), opt.acceptance_floor) : 1.0;
    const long batch = std::clamp(static_cast<long>(need / rate * 1.05) + 16, 16L, check_after);
    std::vector<std::optional<PartitionPath>> got(static_cast<std::size_t>(batch));
    auto work = [&](long lo, long hi) {
      Genealogy g;
      for (long r = lo; r < hi; ++r) {
        Rng rng(stream_seed(seed, static_cast<std::uint64_t>(e.attempts + r)));
        simulate_tree_into(spec, T, rng, g, opt.particle_cap);
        got[static_cast<std::size_t>(r)] = sample_partition_path(g, k, rng);
      }
    };
    if (workers == 1) {
      work(0, batch);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        const long lo = batch * w / workers, hi = batch * (w + 1) / workers;
        pool.emplace_back([&, w, lo, hi] {
          try {
            work(lo, hi);
          } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& ex : errors) {
        if (ex) std::rethrow_exception(ex);
      }
    }
    for (long r = 0; r < batch && static_cast<long>(e.paths.size()) < replicates; ++r) {
      ++e.attempts;
      if (got[static_cast<std::size_t>(r)]) e.paths.push_back(std::move(*got[static_cast<std::size_t>(r)]));
    }
    if (e.attempts >= check_after && e.acceptance_rate() < opt.acceptance_floor) {
      throw SimulationError("acceptance rate " + detail::format_real(e.acceptance_rate()) + " below floor " +
                            detail::format_real(opt.acceptance_floor) + " after " + std::to_string(e.attempts) +
                            " attempts");
    }
  }
  return e;
}

struct ChainTable {
  std::map<Chain, long> counts;
  long total = 0;
  double frequency(const Chain& c) const {
    auto it = counts.find(c);
    return it == counts.end() || total == 0 ? 0.0 : static_cast<double>(it->second) / total;
  }
};

// Observed chains (pi_{t_1}, ..., pi_{t_n}) over the ensemble.
inline ChainTable empirical_fdd(const std::vector<PartitionPath>& paths, const std::vector<double>& mesh) {
  require(!mesh.empty(), "mesh-non-empty", "mesh needs at least one time");
  ChainTable t;
  for (const auto& p : paths) {
    std::vector<Partition> parts;
    for (double m : mesh) parts.push_back(p.at(m));
    ++t.counts[Chain(p.k(), std::move(parts), p.orientation())];
    ++t.total;
  }
  return t;
}

struct SplitHistogram {
  std::vector<double> edges;
  std::vector<std::vector<long>> by_rank;  // by_rank[i][b]: (i+1)-th split time in bin b
  std::vector<long> all;
  long binary_paths = 0;
  long paths = 0;
  double binary_fraction() const { return paths ? static_cast<double>(binary_paths) / paths : 0.0; }
};

// Histogram of the ordered split times of the binary paths.
inline SplitHistogram split_time_histogram(const std::vector<PartitionPath>& paths, const std::vector<double>& edges) {
  require(edges.size() >= 2, "bins-non-empty", "need at least one bin");
  for (std::size_t i = 1; i < edges.size(); ++i) require(edges[i] > edges[i - 1], "bins-ordered", "edges must increase");
  SplitHistogram h;
  h.edges = edges;
  h.all.assign(edges.size() - 1, 0);
  for (const auto& p : paths) {
    ++h.paths;
    if (!p.binary()) continue;
    ++h.binary_paths;
    if (h.by_rank.size() < p.jumps().size()) h.by_rank.resize(p.jumps().size(), std::vector<long>(edges.size() - 1, 0));
    for (std::size_t i = 0; i < p.jumps().size(); ++i) {
      const double t = p.jumps()[i].first;
      auto it = std::upper_bound(edges.begin(), edges.end(), t);
      if (it == edges.begin() || it == edges.end()) continue;
      const auto b = static_cast<std::size_t>(it - edges.begin() - 1);
      ++h.by_rank[i][b];
      ++h.all[b];
    }
  }
  return h;
}

// Event log rows: replicate,time,parent,n_children.
inline void write_event_log(std::ostream& os, long replicate, const Genealogy& g) {
  for (const auto& e : g.events()) {
    os << replicate << ',' << detail::format_real(e.time) << ',' << e.parent << ',' << e.children.size() << '\n';
  }
}

}  // namespace gwgen

#endif  // GWGEN_TREESIM_HPP_
