// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo ensembles against exact laws (chi-square and total variation),
// and finite-T laws against their T -> infinity limits.

#ifndef GWGEN_VALIDATE_HPP_
#define GWGEN_VALIDATE_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "gwgen/asymptotics.hpp"
#include "gwgen/error.hpp"
#include "gwgen/laws.hpp"
#include "gwgen/partitions.hpp"
#include "gwgen/treesim.hpp"

namespace gwgen {

struct Outcome {
  std::string label;
  double expected;  // conditional probability
  long observed;
};

struct ChiSquare {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
  int pooled_cells = 0;  // outcomes merged into the pool cell
};

// Pearson chi-square of counts against probabilities. Cells with expected
// count below 5 are merged into one pool cell; if the pool itself stays below
// 5 it is merged into the smallest remaining cell.
inline ChiSquare chi_square(const std::vector<Outcome>& outcomes, long n) {
  require(n > 0, "replicates-positive", "need at least one replicate");
  struct Cell {
    double e;
    long o;
  };
  std::vector<Cell> cells;
  Cell pool{0, 0};
  ChiSquare r;
  for (const auto& x : outcomes) {
    const double e = x.expected * static_cast<double>(n);
    if (e < 5) {
      pool.e += e;
      pool.o += x.observed;
      ++r.pooled_cells;
    } else {
      cells.push_back({e, x.observed});
    }
  }
  if (r.pooled_cells > 0) {
    if (pool.e >= 5 || cells.empty()) {
      cells.push_back(pool);
    } else {
      auto smallest = std::min_element(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.e < b.e; });
      smallest->e += pool.e;
      smallest->o += pool.o;
    }
  }
  for (const auto& c : cells) {
    if (c.e > 0) {
      r.statistic += (c.o - c.e) * (c.o - c.e) / c.e;
    } else if (c.o > 0) {
      r.statistic = INFINITY;
    }
  }
  r.dof = static_cast<int>(cells.size()) - 1;
  if (r.dof <= 0) {
    r.p_value = 1;
  } else if (!std::isfinite(r.statistic)) {
    r.p_value = 0;
  } else {
    r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
  }
  return r;
}

inline double total_variation(const std::vector<Outcome>& outcomes, long n) {
  double tv = 0;
  for (const auto& x : outcomes) tv += std::abs(x.expected - static_cast<double>(x.observed) / static_cast<double>(n));
  return 0.5 * tv;
}

inline double default_tv_threshold(std::size_t outcomes, long replicates) {
  return 3 * std::sqrt(static_cast<double>(outcomes) / static_cast<double>(replicates));
}

// Quotes a CSV field that contains a comma or a quote.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct ValidationReport {
  std::string law;
  std::string spec;
  long replicates = 0;
  double acceptance_rate = 0;
  std::vector<Outcome> outcomes;
  double expected_total = 0;
  double tv = 0;
  double tv_threshold = 0;
  ChiSquare chi;
  double p_threshold = 1e-3;
  bool pass = false;
  std::uint64_t seed = 0;
  double runtime_seconds = 0;

  void finish(std::optional<double> tv_override) {
    expected_total = 0;
    for (const auto& o : outcomes) expected_total += o.expected;
    tv = total_variation(outcomes, replicates);
    tv_threshold = tv_override ? *tv_override : default_tv_threshold(outcomes.size(), replicates);
    chi = chi_square(outcomes, replicates);
    pass = chi.p_value > p_threshold && tv <= tv_threshold;
  }

  // One row per outcome and a summary row. Runtime is left out so reports
  // are byte-identical for equal inputs and seed.
  void write_csv(std::ostream& os) const {
    os << "# law=" << law << "\n# spec=" << spec << "\n# seed=" << seed << "\n# generator=" << kGeneratorName
       << "\n# replicates=" << replicates << "\n# acceptance_rate=" << detail::format_real(acceptance_rate)
       << "\n# tv_threshold=" << detail::format_real(tv_threshold)
       << "\n# p_threshold=" << detail::format_real(p_threshold) << "\n";
    os << "row,outcome,expected,observed,observed_freq\n";
    for (const auto& o : outcomes) {
      os << "outcome," << csv_field(o.label) << ',' << detail::format_real(o.expected) << ',' << o.observed << ','
         << detail::format_real(static_cast<double>(o.observed) / static_cast<double>(replicates)) << '\n';
    }
    os << "# summary: tv chi2 dof p_value expected_total verdict\n";
    os << "summary," << detail::format_real(tv) << ',' << detail::format_real(chi.statistic) << ',' << chi.dof << ','
       << detail::format_real(chi.p_value) << ',' << detail::format_real(expected_total) << ','
       << (pass ? "pass" : "fail") << '\n';
  }
};

struct ValidationOptions {
  EnsembleOptions ensemble{};
  std::optional<double> tv_threshold{};
  QuadratureOptions quadrature{};
};

// Empirical chains at the mesh times against fdd_probability / P(N_T >= k),
// over every chain with positive mass.
inline ValidationReport validate_fdd(const OffspringSpec& spec, double T, int k, const Mesh& mesh, long replicates,
                                     std::uint64_t seed, const ValidationOptions& opt = {}) {
  validate_mesh(mesh, T);
  require(replicates >= 1000, "replicates-minimum", "validation needs at least 1000 replicates");
  const auto start = std::chrono::steady_clock::now();
  ValidationReport r;
  r.law = "fdd";
  r.spec = spec.to_string();
  r.seed = seed;
  r.replicates = replicates;
  const double mass = prob_at_least(spec, T, k);
  require(mass > 0, "event-positive", "P(N_T >= k) = 0");
  Ensemble e = conditioned_ensemble(spec, T, k, replicates, seed, opt.ensemble);
  r.acceptance_rate = e.acceptance_rate();
  ChainTable tab = empirical_fdd(e.paths, mesh);
  for (const auto& c : enumerate_chains(k, static_cast<int>(mesh.size()))) {
    LawQuery q{spec, T, k, mesh, c, opt.quadrature};
    const double p = fdd_probability(q).value / mass;
    auto it = tab.counts.find(c);
    const long seen = it == tab.counts.end() ? 0 : it->second;
    if (p > 0 || seen > 0) r.outcomes.push_back({c.to_string(), p, seen});
  }
  r.finish(opt.tv_threshold);
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// First split time of binary paths against the exact first-split marginal,
// summed over binary maximal chains, conditioned on N_T >= k. `bins` equal
// bins on [0,T].
inline ValidationReport validate_split_times(const OffspringSpec& spec, double T, int k, int bins, long replicates,
                                             std::uint64_t seed, const ValidationOptions& opt = {}) {
  require(spec.kind() == OffspringKind::kBirthDeath, "birth-death-spec",
          "split-time validation needs a birth-death spec (binary paths)");
  require(k >= 2 && k <= kMaxGroundSet, "k-at-least-2", "need 2 <= k <= 10");
  require(bins >= 1, "bins-non-empty", "need at least one bin");
  require(replicates >= 1000, "replicates-minimum", "validation needs at least 1000 replicates");
  const auto start = std::chrono::steady_clock::now();
  ValidationReport r;
  r.law = "split-times";
  r.spec = spec.to_string();
  r.seed = seed;
  r.replicates = replicates;
  std::vector<double> edges;
  for (int b = 0; b <= bins; ++b) edges.push_back(T * b / bins);
  const double mass = prob_at_least(spec, T, k);
  // The first-split marginal depends on the chain only through q; every
  // binary chain has q = (2, ..., 2).
  const auto chains = enumerate_maximal_chains(k, true);
  std::vector<double> expected = split_first_marginal(spec, T, k, chains.front(), edges, opt.quadrature);
  for (auto& x : expected) x *= static_cast<double>(chains.size()) / mass;
  Ensemble e = conditioned_ensemble(spec, T, k, replicates, seed, opt.ensemble);
  r.acceptance_rate = e.acceptance_rate();
  SplitHistogram h = split_time_histogram(e.paths, edges);
  require(h.binary_paths == h.paths, "birth-death-spec", "a birth-death ensemble produced a non-binary path");
  for (int b = 0; b < bins; ++b) {
    r.outcomes.push_back({"[" + detail::format_real(edges[static_cast<std::size_t>(b)]) + ";" +
                              detail::format_real(edges[static_cast<std::size_t>(b) + 1]) + ")",
                          expected[static_cast<std::size_t>(b)], h.by_rank[0][static_cast<std::size_t>(b)]});
  }
  r.finish(opt.tv_threshold);
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

enum class Regime { kSuper, kCritical, kSub };

inline Regime parse_regime(std::string_view s) {
  if (s == "super") return Regime::kSuper;
  if (s == "crit") return Regime::kCritical;
  if (s == "sub") return Regime::kSub;
  throw PreconditionError("regime-syntax", "regime must be super, crit or sub");
}

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::kSuper:
      return "super";
    case Regime::kCritical:
      return "crit";
    case Regime::kSub:
      return "sub";
  }
  return "?";
}

struct LimitRow {
  double T, probe, finite, limit, gap;
};

struct LimitReport {
  Regime regime;
  std::string spec;
  int k;
  std::vector<LimitRow> rows;
  std::vector<double> max_gap;  // per T, in T_list order
  bool decreasing = false;      // last max gap below the first

  void write_csv(std::ostream& os) const {
    os << "# regime=" << regime_name(regime) << "\n# spec=" << spec << "\n# k=" << k
       << "\n# event=single block at probe\n";
    os << "T,probe,finite,limit,gap\n";
    for (const auto& r : rows) {
      os << detail::format_real(r.T) << ',' << detail::format_real(r.probe) << ',' << detail::format_real(r.finite)
         << ',' << detail::format_real(r.limit) << ',' << detail::format_real(r.gap) << '\n';
    }
  }
};

// Finite-T probability of "all k sampled particles in one block at the probe"
// given N_T >= k, against its limit. Probes are times t (super: pi_t; sub:
// rho_t, i.e. pi_{T-t}) or, for crit, fractions u of T.
inline LimitReport validate_limit(Regime regime, const OffspringSpec& spec, int k, const std::vector<double>& T_list,
                                  const std::vector<double>& probes, const QuadratureOptions& quad = {}) {
  require(!T_list.empty() && !probes.empty(), "limit-inputs", "need at least one T and one probe");
  const double m = spec.mean();
  switch (regime) {
    case Regime::kSuper:
      require(m > 1, "regime-matches-spec", "super needs m > 1");
      break;
    case Regime::kCritical:
      require(std::abs(m - 1) <= 1e-12, "regime-matches-spec", "crit needs m = 1");
      break;
    case Regime::kSub:
      require(m < 1, "regime-matches-spec", "sub needs m < 1");
      break;
  }
  LimitReport rep{regime, spec.to_string(), k, {}, {}, false};
  const Partition one = Partition::single_block(k);
  std::vector<double> limits;
  std::optional<LaplaceTransform> phi;
  std::optional<QuasiStationary> qs;
  if (regime == Regime::kSuper) phi.emplace(spec);
  if (regime == Regime::kSub) qs.emplace(spec, std::max(k, 12));
  for (double p : probes) {
    switch (regime) {
      case Regime::kSuper:
        limits.push_back(super_fdd(*phi, k, {p}, Chain(k, {one}, Orientation::kBreaking), quad).value);
        break;
      case Regime::kCritical:
        limits.push_back(k == 2 ? critical_k2_tail(p)
                                : critical_fdd(k, {p}, Chain(k, {one}, Orientation::kBreaking), quad).value);
        break;
      case Regime::kSub:
        limits.push_back(sub_fdd(*qs, k, {p}, Chain(k, {one}, Orientation::kMerging), quad).value);
        break;
    }
  }
  for (double T : T_list) {
    const double mass = prob_at_least(spec, T, k);
    double worst = 0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const double t = regime == Regime::kCritical ? probes[i] * T : regime == Regime::kSub ? T - probes[i] : probes[i];
      require(t > 0 && t < T, "probe-inside-horizon", "probe time must fall inside (0,T)");
      const double finite = kmrca_tail(spec, k, t, T, quad).value / mass;
      const double gap = std::abs(finite - limits[i]);
      worst = std::max(worst, gap);
      rep.rows.push_back({T, probes[i], finite, limits[i], gap});
    }
    rep.max_gap.push_back(worst);
  }
  rep.decreasing = rep.max_gap.size() < 2 || rep.max_gap.back() < rep.max_gap.front();
  return rep;
}

}  // namespace gwgen

#endif  // GWGEN_VALIDATE_HPP_
