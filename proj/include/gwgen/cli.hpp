// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver. Every subcommand writes CSV with '#' metadata lines
// (spec, seed, tolerances) to --out or the given stream, and a one-line
// summary to the error stream.

#ifndef GWGEN_CLI_HPP_
#define GWGEN_CLI_HPP_

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gwgen/asymptotics.hpp"
#include "gwgen/error.hpp"
#include "gwgen/laws.hpp"
#include "gwgen/partitions.hpp"
#include "gwgen/semigroup.hpp"
#include "gwgen/treesim.hpp"
#include "gwgen/validate.hpp"

namespace gwgen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitStatistical = 2;
inline constexpr int kExitNumeric = 3;

inline constexpr const char* kWorkersEnv = "GWGEN_WORKERS";

inline int default_workers() {
  if (const char* v = std::getenv(kWorkersEnv)) {
    const int n = std::atoi(v);
    if (n >= 1) return n;
  }
  return 1;
}

struct ExperimentConfig {
  std::string subcommand;
  std::string spec;
  double T = 1;
  int k = 2;
  std::vector<double> mesh;
  std::string chain;
  std::string regime;
  long replicates = 100000;
  std::uint64_t seed = 1;
  QuadratureOptions quadrature{};
  std::string out;
  int workers = default_workers();
};

namespace detail {

inline std::string join(const std::vector<double>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += gwgen::detail::format_real(v[i]);
  }
  return s;
}

inline void header(std::ostream& os, const ExperimentConfig& c, bool with_seed) {
  os << "# gwgen " << c.subcommand << "\n";
  if (!c.spec.empty()) os << "# spec=" << c.spec << "\n";
  if (with_seed) os << "# seed=" << c.seed << "\n# generator=" << kGeneratorName << "\n";
  const OdeOptions ode;
  os << "# quad_abs_tol=" << gwgen::detail::format_real(c.quadrature.abs_tol)
     << "\n# quad_rel_tol=" << gwgen::detail::format_real(c.quadrature.rel_tol)
     << "\n# quad_max_subdivisions=" << c.quadrature.max_subdivisions
     << "\n# ode_rel_tol=" << gwgen::detail::format_real(ode.rel_tol)
     << "\n# ode_coefficient_floor=" << gwgen::detail::format_real(ode.coefficient_floor) << "\n";
}

// A partition of an arbitrary block, e.g. "1|3" for the block {1,3}.
inline Partition parse_block_partition(const std::string& text) {
  std::vector<Block> blocks;
  for (const auto& b : gwgen::detail::split(text, '|')) {
    Block blk;
    for (const auto& e : gwgen::detail::split(b, ',')) blk.push_back(gwgen::detail::parse_int(e));
    blocks.push_back(std::move(blk));
  }
  return Partition(std::move(blocks));
}

inline Mesh default_mesh(const ExperimentConfig& c) { return c.mesh.empty() ? Mesh{c.T / 2} : c.mesh; }

inline std::vector<Chain> chains_for(const ExperimentConfig& c, int n, Orientation o) {
  if (!c.chain.empty()) return {parse_chain(c.chain, c.k, o)};
  std::vector<Chain> all = enumerate_chains(c.k, n);
  if (o == Orientation::kBreaking) return all;
  // Merging chains are breaking chains read from the last level back.
  std::vector<Chain> out;
  for (const auto& ch : all) {
    std::vector<Partition> parts;
    for (int i = ch.length(); i >= 1; --i) parts.push_back(ch.level(i));
    out.emplace_back(c.k, std::move(parts), o);
  }
  return out;
}

}  // namespace detail

// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Genealogies of continuous-time Galton-Watson trees: exact laws, limits and Monte Carlo checks",
               "gwgen"};
  app.require_subcommand(0, 1);
  ExperimentConfig c;
  auto add_common = [&](CLI::App* sub, bool spec_required) {
    auto* o = sub->add_option("--spec", c.spec, "offspring law: bd:a,b | geom:p | pmf:j:p,...");
    if (spec_required) o->required();
    sub->add_option("--abs-tol", c.quadrature.abs_tol, "quadrature absolute tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--rel-tol", c.quadrature.rel_tol, "quadrature relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "output CSV path (default: standard output)");
  };
  auto add_law = [&](CLI::App* sub) {
    sub->add_option("--T", c.T, "time horizon")->required();
    sub->add_option("--k", c.k, "sample size")->required();
  };

  std::vector<double> times, points;
  int order = 4, jmax = 20, j = 1, bins = 20;
  bool reversed = false, all_chains = false;
  std::string gamma, block, delta, law = "fdd", mode = "paths";
  double t1 = 0, t2 = 0;
  std::vector<double> t_list, probes;
  std::optional<double> tv_threshold;
  long trees = 1;

  auto* semigroup = app.add_subcommand("semigroup", "jet of F_t at s");
  add_common(semigroup, true);
  semigroup->add_option("--t", times, "times")->required()->delimiter(',');
  semigroup->add_option("--s", points, "points in [0,1]")->required()->delimiter(',');
  semigroup->add_option("--order", order, "derivative order")->check(CLI::Range(0, kMaxJetOrder));

  auto* pmf = app.add_subcommand("pmf", "population pmf P(N_T = j)");
  add_common(pmf, true);
  pmf->add_option("--T", c.T, "time horizon")->required();
  pmf->add_option("--jmax", jmax, "largest j")->check(CLI::Range(0, 200));

  auto* fdd = app.add_subcommand("fdd", "finite-dimensional law of the partition process");
  add_common(fdd, true);
  add_law(fdd);
  fdd->add_option("--mesh", c.mesh, "sampling times t_1 < ... < t_n")->delimiter(',');
  fdd->add_option("--chain", c.chain, "chain 'p1;p2;...' with partitions like '1,2|3' (default: all)");
  fdd->add_flag("--reversed", reversed, "law of the reversed process (merging chain)");

  auto* split = app.add_subcommand("split", "split-time law along maximal chains");
  add_common(split, true);
  add_law(split);
  split->add_option("--chain", c.chain, "maximal chain '{1..k};...;singletons' (default: all)");
  split->add_option("--u", points, "split times u_1 < ... < u_n (density)")->delimiter(',');
  split->add_option("--windows", times, "a_1,b_1,a_2,b_2,... (window probability)")->delimiter(',');
  split->add_option("--bins", bins, "first-split bins on [0,T] (marginal)")->check(CLI::PositiveNumber);
  split->add_flag("--all", all_chains, "include non-binary maximal chains");

  auto* mixture = app.add_subcommand("mixture", "density of the mixture measure");
  add_common(mixture, true);
  add_law(mixture);
  mixture->add_option("--s", points, "points in [0,1] (default: 0, 0.05, ..., 1)")->delimiter(',');

  auto* transition = app.add_subcommand("transition", "Markov kernel of one block");
  add_common(transition, true);
  add_law(transition);
  transition->add_option("--s", points, "mixture variable s")->required()->delimiter(',');
  transition->add_option("--gamma", gamma, "partition at t1")->required();
  transition->add_option("--block", block, "block of gamma, e.g. '1,2'")->required();
  transition->add_option("--delta", delta, "partition of the block at t2")->required();
  transition->add_option("--t1", t1, "first time")->required();
  transition->add_option("--t2", t2, "second time")->required();

  auto* project = app.add_subcommand("project", "k-sample law on {N_T >= k + j} and {N_T = k + j}");
  add_common(project, true);
  add_law(project);
  project->add_option("--mesh", c.mesh, "sampling times")->delimiter(',');
  project->add_option("--chain", c.chain, "chain (default: all)");
  project->add_option("--j", j, "extra particles")->check(CLI::NonNegativeNumber);

  auto* limit = app.add_subcommand("limit", "T -> infinity limit laws and convergence tables");
  add_common(limit, false);
  limit->add_option("--regime", c.regime, "super | crit | sub")->required();
  limit->add_option("--k", c.k, "sample size")->required();
  limit->add_option("--mesh", c.mesh, "times (crit: fractions of T)")->delimiter(',');
  limit->add_option("--chain", c.chain, "chain (default: all; merging for sub)");
  limit->add_option("--T-list", t_list, "horizons for a convergence table")->delimiter(',');
  limit->add_option("--probes", probes, "probe points for the convergence table")->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "conditioned ensemble of sampled partition paths");
  add_common(simulate, true);
  add_law(simulate);
  simulate->add_option("--replicates", c.replicates, "accepted paths")->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", c.seed, "master seed");
  simulate->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--mode", mode, "paths | events")->check(CLI::IsMember({"paths", "events"}));
  simulate->add_option("--trees", trees, "trees to log in events mode")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Monte Carlo ensemble against the exact law");
  add_common(validate, true);
  add_law(validate);
  validate->add_option("--law", law, "fdd | split")->check(CLI::IsMember({"fdd", "split"}));
  validate->add_option("--mesh", c.mesh, "sampling times (fdd)")->delimiter(',');
  validate->add_option("--bins", bins, "first-split bins (split)")->check(CLI::PositiveNumber);
  validate->add_option("--replicates", c.replicates, "accepted paths")->check(CLI::Range(1000L, 100000000L));
  validate->add_option("--seed", c.seed, "master seed");
  validate->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  validate->add_option("--tv-threshold", tv_threshold, "override 3 sqrt(outcomes / replicates)");

  auto* identities = app.add_subcommand("identities", "Faa di Bruno and beta-inversion gaps");
  add_common(identities, true);
  identities->add_option("--k", c.k, "order")->required();
  identities->add_option("--T", c.T, "time horizon (default 1)");
  identities->add_option("--mesh", c.mesh, "mesh (default T/2)")->delimiter(',');

  if (argc <= 1) {
    err << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kExitUsage;
  }
  CLI::App* sub = app.get_subcommands().front();
  c.subcommand = sub->get_name();

  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) {
      err << "error: cannot open " << c.out << " for writing\n";
      return kExitUsage;
    }
  }
  std::ostream& os = c.out.empty() ? out : file;
  long rows = 0;
  int code = kExitOk;

  try {
    std::optional<OffspringSpec> spec;
    if (!c.spec.empty()) {
      spec.emplace(OffspringSpec::parse(c.spec));
      c.spec = spec->to_string();
    }
    const bool seeded = c.subcommand == "simulate" || c.subcommand == "validate";
    detail::header(os, c, seeded);

    if (c.subcommand == "semigroup") {
      os << "t,s,r,derivative\n";
      for (double t : times) {
        require(t >= 0, "time-nonnegative", "t must be >= 0");
        for (double s : points) {
          require(s >= 0 && s <= 1, "s-in-unit-interval", "s must lie in [0,1]");
          const PgfJet jt = semigroup_at(*spec, t, UnitPoint::from_value(s), order);
          for (int r = 0; r <= order; ++r, ++rows) {
            os << gwgen::detail::format_real(t) << ',' << gwgen::detail::format_real(s) << ',' << r << ','
               << gwgen::detail::format_real(r == 0 ? jt.value.value : jt.derivative(r)) << '\n';
          }
        }
      }
    } else if (c.subcommand == "pmf") {
      require(c.T >= 0, "time-nonnegative", "T must be >= 0");
      OdeOptions opt;
      opt.max_order = std::max(opt.max_order, jmax);
      const PopulationPmf p = population_pmf(*spec, c.T, jmax, opt);
      os << "# survival=" << gwgen::detail::format_real(p.survival) << "\nj,p\n";
      for (std::size_t i = 0; i < p.p.size(); ++i, ++rows) {
        os << i << ',' << gwgen::detail::format_real(p.p[i]) << '\n';
      }
    } else if (c.subcommand == "fdd") {
      const Mesh mesh = detail::default_mesh(c);
      const Orientation o = reversed ? Orientation::kMerging : Orientation::kBreaking;
      const double mass = prob_at_least(*spec, c.T, c.k);
      os << "# T=" << gwgen::detail::format_real(c.T) << "\n# k=" << c.k << "\n# mesh=" << detail::join(mesh)
         << "\n# orientation=" << (reversed ? "merging" : "breaking")
         << "\n# mass=" << gwgen::detail::format_real(mass) << "\nchain,value,abs_error,conditional\n";
      for (const auto& ch : detail::chains_for(c, static_cast<int>(mesh.size()), o)) {
        const LawQuery q{*spec, c.T, c.k, mesh, ch, c.quadrature};
        const QuadratureResult r = reversed ? reversed_fdd(q) : fdd_probability(q);
        os << csv_field(ch.to_string()) << ',' << gwgen::detail::format_real(r.value) << ','
           << gwgen::detail::format_real(r.abs_error) << ','
           << gwgen::detail::format_real(mass > 0 ? r.value / mass : 0.0) << '\n';
        ++rows;
      }
    } else if (c.subcommand == "split") {
      std::vector<MaximalChain> chains;
      if (!c.chain.empty()) {
        chains.push_back(parse_maximal_chain(c.chain, c.k));
      } else {
        chains = enumerate_maximal_chains(c.k, !all_chains);
      }
      os << "# T=" << gwgen::detail::format_real(c.T) << "\n# k=" << c.k << "\n";
      if (!points.empty()) {
        os << "# u=" << detail::join(points) << "\nchain,density\n";
        for (const auto& ch : chains) {
          os << csv_field(ch.to_string()) << ','
             << gwgen::detail::format_real(split_density(*spec, c.T, c.k, ch, points, c.quadrature)) << '\n';
          ++rows;
        }
      } else if (!times.empty()) {
        require(times.size() % 2 == 0, "window-pairs", "--windows needs a_i,b_i pairs");
        std::vector<Window> w;
        for (std::size_t i = 0; i < times.size(); i += 2) w.push_back({times[i], times[i + 1]});
        os << "# windows=" << detail::join(times) << "\nchain,probability,abs_error\n";
        for (const auto& ch : chains) {
          const QuadratureResult r = split_window_probability(*spec, c.T, c.k, ch, w, c.quadrature);
          os << csv_field(ch.to_string()) << ',' << gwgen::detail::format_real(r.value) << ','
             << gwgen::detail::format_real(r.abs_error) << '\n';
          ++rows;
        }
      } else {
        std::vector<double> edges;
        for (int b = 0; b <= bins; ++b) edges.push_back(c.T * b / bins);
        os << "chain,bin_lo,bin_hi,probability\n";
        for (const auto& ch : chains) {
          const auto m = split_first_marginal(*spec, c.T, c.k, ch, edges, c.quadrature);
          for (int b = 0; b < bins; ++b, ++rows) {
            os << csv_field(ch.to_string()) << ',' << gwgen::detail::format_real(edges[static_cast<std::size_t>(b)])
               << ',' << gwgen::detail::format_real(edges[static_cast<std::size_t>(b) + 1]) << ','
               << gwgen::detail::format_real(m[static_cast<std::size_t>(b)]) << '\n';
          }
        }
      }
    } else if (c.subcommand == "mixture") {
      if (points.empty()) {
        for (int i = 0; i <= 20; ++i) points.push_back(i / 20.0);
      }
      os << "# T=" << gwgen::detail::format_real(c.T) << "\n# k=" << c.k << "\ns,density\n";
      for (double s : points) {
        os << gwgen::detail::format_real(s) << ','
           << gwgen::detail::format_real(mixture_density(*spec, c.T, c.k, s)) << '\n';
        ++rows;
      }
    } else if (c.subcommand == "transition") {
      const Partition g = parse_partition(gamma, c.k);
      const Block b = detail::parse_block_partition(block).ground();
      const Partition d = detail::parse_block_partition(delta);
      os << "# T=" << gwgen::detail::format_real(c.T) << "\n# gamma=" << g.to_string()
         << "\n# delta=" << d.to_string() << "\n# t1=" << gwgen::detail::format_real(t1)
         << "\n# t2=" << gwgen::detail::format_real(t2) << "\ns,kernel\n";
      for (double s : points) {
        const auto v = markov_transition(*spec, c.T, s, g, b, d, t1, t2);
        os << gwgen::detail::format_real(s) << ',' << (v ? gwgen::detail::format_real(*v) : "undefined") << '\n';
        ++rows;
      }
    } else if (c.subcommand == "project") {
      const Mesh mesh = detail::default_mesh(c);
      os << "# T=" << gwgen::detail::format_real(c.T) << "\n# k=" << c.k << "\n# j=" << j
         << "\n# mesh=" << detail::join(mesh) << "\nchain,at_least,exact\n";
      for (const auto& ch : detail::chains_for(c, static_cast<int>(mesh.size()), Orientation::kBreaking)) {
        const LawQuery q{*spec, c.T, c.k, mesh, ch, c.quadrature};
        os << csv_field(ch.to_string()) << ',' << gwgen::detail::format_real(projection_fdd(q, j).value) << ','
           << gwgen::detail::format_real(exact_size_fdd(q, j)) << '\n';
        ++rows;
      }
    } else if (c.subcommand == "limit") {
      const Regime regime = parse_regime(c.regime);
      if (!t_list.empty()) {
        require(spec.has_value(), "spec-required", "a convergence table needs --spec");
        const LimitReport rep = validate_limit(regime, *spec, c.k, t_list, probes.empty() ? c.mesh : probes,
                                               c.quadrature);
        rep.write_csv(os);
        rows = static_cast<long>(rep.rows.size());
        if (!rep.decreasing) code = kExitStatistical;
      } else {
        const Mesh mesh = c.mesh.empty() ? Mesh{0.5} : c.mesh;
        const Orientation o = regime == Regime::kSub ? Orientation::kMerging : Orientation::kBreaking;
        std::optional<LaplaceTransform> phi;
        std::optional<QuasiStationary> qs;
        if (regime != Regime::kCritical) {
          require(spec.has_value(), "spec-required", "super and sub limits need --spec");
        }
        if (regime == Regime::kSuper) phi.emplace(*spec);
        if (regime == Regime::kSub) qs.emplace(*spec, std::max(c.k, 12));
        os << "# regime=" << regime_name(regime) << "\n# k=" << c.k << "\n# mesh=" << detail::join(mesh)
           << "\nchain,value,abs_error\n";
        for (const auto& ch : detail::chains_for(c, static_cast<int>(mesh.size()), o)) {
          QuadratureResult r;
          switch (regime) {
            case Regime::kSuper:
              r = super_fdd(*phi, c.k, mesh, ch, c.quadrature);
              break;
            case Regime::kCritical:
              r = critical_fdd(c.k, mesh, ch, c.quadrature);
              break;
            case Regime::kSub:
              r = sub_fdd(*qs, c.k, mesh, ch, c.quadrature);
              break;
          }
          os << csv_field(ch.to_string()) << ',' << gwgen::detail::format_real(r.value) << ','
             << gwgen::detail::format_real(r.abs_error) << '\n';
          ++rows;
        }
      }
    } else if (c.subcommand == "simulate") {
      if (mode == "events") {
        os << "# T=" << gwgen::detail::format_real(c.T) << "\nreplicate,time,parent,children\n";
        for (long r = 0; r < trees; ++r) {
          Rng rng(stream_seed(c.seed, static_cast<std::uint64_t>(r)));
          Genealogy g;
          simulate_tree_into(*spec, c.T, rng, g);
          write_event_log(os, r, g);
          rows += static_cast<long>(g.events().size());
        }
      } else {
        EnsembleOptions eo;
        eo.workers = c.workers;
        const Ensemble e = conditioned_ensemble(*spec, c.T, c.k, c.replicates, c.seed, eo);
        os << "# T=" << gwgen::detail::format_real(c.T) << "\n# k=" << c.k << "\n# attempts=" << e.attempts
           << "\n# acceptance_rate=" << gwgen::detail::format_real(e.acceptance_rate())
           << "\nreplicate,time,partition\n";
        for (std::size_t r = 0; r < e.paths.size(); ++r) {
          const auto& p = e.paths[r];
          os << r << ",0," << csv_field(p.initial().to_string()) << '\n';
          for (const auto& [t, part] : p.jumps()) {
            os << r << ',' << gwgen::detail::format_real(t) << ',' << csv_field(part.to_string()) << '\n';
          }
          ++rows;
        }
      }
    } else if (c.subcommand == "validate") {
      ValidationOptions vo;
      vo.ensemble.workers = c.workers;
      vo.tv_threshold = tv_threshold;
      vo.quadrature = c.quadrature;
      const ValidationReport rep =
          law == "fdd" ? validate_fdd(*spec, c.T, c.k, detail::default_mesh(c), c.replicates, c.seed, vo)
                       : validate_split_times(*spec, c.T, c.k, bins, c.replicates, c.seed, vo);
      rep.write_csv(os);
      rows = static_cast<long>(rep.outcomes.size());
      if (!rep.pass) code = kExitStatistical;
      err << "gwgen validate: " << (rep.pass ? "pass" : "fail") << " tv=" << gwgen::detail::format_real(rep.tv)
          << " p=" << gwgen::detail::format_real(rep.chi.p_value) << "\n";
    } else if (c.subcommand == "identities") {
      const Mesh mesh = detail::default_mesh(c);
      os << "# T=" << gwgen::detail::format_real(c.T) << "\n# k=" << c.k << "\n# mesh=" << detail::join(mesh)
         << "\nidentity,point,lhs,rhs,gap\n";
      for (double s : {0.0, 0.25, 0.5, 0.75}) {
        const IdentityGap g = faa_di_bruno_check(*spec, c.T, c.k, mesh, s);
        os << "faa-di-bruno," << gwgen::detail::format_real(s) << ',' << gwgen::detail::format_real(g.lhs) << ','
           << gwgen::detail::format_real(g.rhs) << ',' << gwgen::detail::format_real(g.gap) << '\n';
        ++rows;
      }
      OdeOptions opt;
      opt.max_order = 40;
      const PopulationPmf p = population_pmf(*spec, c.T, 40, opt);
      const IdentityGap b = beta_inversion_check(c.k, p.p);
      os << "beta-inversion,," << gwgen::detail::format_real(b.lhs) << ',' << gwgen::detail::format_real(b.rhs)
         << ',' << gwgen::detail::format_real(b.gap) << '\n';
      ++rows;
    }
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const SimulationError& e) {
    err << "simulation aborted: " << e.what() << "\n";
    return kExitNumeric;
  }
  if (c.subcommand != "validate") {
    err << "gwgen " << c.subcommand << ": " << rows << " rows written to " << (c.out.empty() ? "stdout" : c.out)
        << "\n";
  }
  return code;
}

}  // namespace gwgen::cli

#endif  // GWGEN_CLI_HPP_
