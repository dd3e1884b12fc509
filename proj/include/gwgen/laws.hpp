// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Fixed-horizon laws of the ancestral partition process of k particles
// sampled at time T: finite-dimensional distributions, split-time densities,
// the mixture measure and Markov kernel, the projection formula, and the
// Faa di Bruno / beta-inversion identities they rest on.
//
// Probabilities are unconditioned, e.g. fdd_probability returns
// P(pi_{t_1} = gamma_1, ..., pi_{t_n} = gamma_n, N_T >= k).

#ifndef GWGEN_LAWS_HPP_
#define GWGEN_LAWS_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "gwgen/error.hpp"
#include "gwgen/offspring.hpp"
#include "gwgen/partitions.hpp"
#include "gwgen/quadrature.hpp"
#include "gwgen/semigroup.hpp"

namespace gwgen {

using Mesh = std::vector<double>;

inline void validate_mesh(const Mesh& mesh, double T) {
  require(T > 0 && std::isfinite(T), "horizon-positive", "T must be finite and > 0");
  require(!mesh.empty(), "mesh-non-empty", "mesh needs at least one time");
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    require(mesh[i] > 0 && mesh[i] < T, "mesh-inside-horizon", "mesh times must lie in (0,T)");
    require(i == 0 || mesh[i] > mesh[i - 1], "mesh-increasing", "mesh must be strictly increasing");
  }
}

struct LawQuery {
  OffspringSpec spec;
  double T;
  int k;
  Mesh mesh;
  Chain chain;
  QuadratureOptions quadrature{};

  void validate(Orientation o = Orientation::kBreaking) const {
    validate_mesh(mesh, T);
    require(chain.k() == k, "chain-ground-set", "chain is not on {1..k}");
    require(chain.length() == static_cast<int>(mesh.size()), "chain-mesh-length",
            "chain length must equal mesh size");
    require(chain.orientation() == o, o == Orientation::kBreaking ? "breaking-chain" : "merging-chain",
            "chain orientation does not match the law");
  }
};

namespace detail {

inline double inv_factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f /= i;
  return f;
}

inline double factorial(int n) { return 1.0 / inv_factorial(n); }

inline int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }

// Tolerance and variable-substitution scales for integrals over s at horizon T.
struct HorizonScales {
  double mass;        // P(N_T >= k)
  double unit_scale;  // P(N_T > 0) / E[N_T]: width of the mass near s = 1
};

inline HorizonScales horizon_scales(const OffspringSpec& spec, double T, int k) {
  OdeOptions opt;
  opt.max_order = std::max(opt.max_order, k);
  PopulationPmf pmf = population_pmf(spec, T, std::max(k - 1, 0), opt);
  const double growth = std::exp((spec.mean() - 1) * T);
  return {pmf.at_least(k), pmf.survival / growth};
}

inline QuadratureOptions scaled(QuadratureOptions q, double mass) {
  q.abs_tol *= std::min(1.0, std::max(mass, 1e-300));
  return q;
}

inline OdeOptions ode_for_order(int order) {
  OdeOptions o;
  o.max_order = std::max(o.max_order, order);
  return o;
}

// Delta t_i for i = 0..n with t_0 = 0 and t_{n+1} = T.
inline std::vector<double> increments(const Mesh& mesh, double T) {
  std::vector<double> d;
  double prev = 0;
  for (double t : mesh) {
    d.push_back(t - prev);
    prev = t;
  }
  d.push_back(T - prev);
  return d;
}

}  // namespace detail

// prod_{i=0..n} prod_{Gamma in gamma_i} F^{b_i(Gamma)}_{dt_i}(F_{T - t_{i+1}}(s)),
// built from the innermost level outwards: F_{T - t_{i}}(s) = F_{dt_i}(F_{T - t_{i+1}}(s)).
inline double fdd_product(const OffspringSpec& spec, double T, const Mesh& mesh, const Chain& chain, UnitPoint s) {
  const LevelTable b = breakage_numbers(chain);
  const auto dt = detail::increments(mesh, T);
  double prod = 1;
  UnitPoint x = s;
  for (int i = chain.length(); i >= 0; --i) {
    const auto& row = b[static_cast<std::size_t>(i)];
    PgfJet j = semigroup_at(spec, dt[static_cast<std::size_t>(i)], x, detail::max_of(row),
                            detail::ode_for_order(detail::max_of(row)));
    for (int bi : row) prod *= j.derivative(bi);
    x = j.value;
  }
  return prod;
}

inline double fdd_integrand(const LawQuery& q, UnitPoint s) {
  return std::pow(s.complement, q.k - 1) * detail::inv_factorial(q.k - 1) *
         fdd_product(q.spec, q.T, q.mesh, q.chain, s);
}

inline QuadratureResult fdd_probability(const LawQuery& q) {
  q.validate();
  const auto sc = detail::horizon_scales(q.spec, q.T, q.k);
  return integrate_unit([&](UnitPoint s) { return fdd_integrand(q, s); }, detail::scaled(q.quadrature, sc.mass),
                        sc.unit_scale);
}

// P(tau in [t,T], N_T >= 2) for the coalescence time tau of two sampled particles.
inline QuadratureResult lambert_tail(const OffspringSpec& spec, double t, double T, const QuadratureOptions& quad = {}) {
  require(T > 0 && t >= 0 && t <= T, "time-in-horizon", "need 0 <= t <= T");
  if (t == T) return {};
  const auto sc = detail::horizon_scales(spec, T, 2);
  const double times[] = {T - t, T};
  return integrate_unit(
      [&](UnitPoint s) {
        auto tr = semigroup_trajectory(spec, s, times, 2);
        const double d1 = tr[0].derivative(1);
        if (d1 <= 0) return 0.0;
        return s.complement * tr[0].derivative(2) / d1 * tr[1].derivative(1);
      },
      detail::scaled(quad, sc.mass), sc.unit_scale);
}

// P(tau^k > t, N_T >= k) for the time tau^k at which k sampled particles last
// shared an ancestor.
inline QuadratureResult kmrca_tail(const OffspringSpec& spec, int k, double t, double T,
                                   const QuadratureOptions& quad = {}) {
  require(T > 0 && t >= 0 && t <= T, "time-in-horizon", "need 0 <= t <= T");
  require(k >= 1 && k <= kMaxGroundSet, "ground-set-cap", "k out of range");
  const auto sc = detail::horizon_scales(spec, T, k);
  const double times[] = {T - t, T};
  return integrate_unit(
      [&](UnitPoint s) {
        auto tr = semigroup_trajectory(spec, s, times, k, detail::ode_for_order(k));
        const double d1 = tr[0].derivative(1);
        if (d1 <= 0) return 0.0;
        return std::pow(s.complement, k - 1) * detail::inv_factorial(k - 1) * tr[1].derivative(1) / d1 *
               tr[0].derivative(k);
      },
      detail::scaled(quad, sc.mass), sc.unit_scale);
}

namespace detail {

// g_i(u) = f^{(q)}(F_{T-u}(s)) F'_{T-u}(s)^{q-1} from the jet of F_{T-u} at s.
inline double split_factor(const OffspringSpec& spec, int q, const PgfJet& j) {
  if (spec.max_offspring() >= 0 && q > spec.max_offspring()) return 0.0;
  return spec.derivative(q, j.value.value) * std::pow(j.derivative(1), q - 1);
}

inline void check_maximal(const MaximalChain& chain, int k) {
  require(chain.k() == k, "chain-ground-set", "maximal chain is not on {1..k}");
}

}  // namespace detail

// Joint density of the split times (u_1 < ... < u_n) together with the
// labelled maximal chain, on {N_T >= k}.
inline double split_density(const OffspringSpec& spec, double T, int k, const MaximalChain& chain,
                            const std::vector<double>& u, const QuadratureOptions& quad = {}) {
  detail::check_maximal(chain, k);
  require(static_cast<int>(u.size()) == chain.splits(), "split-times-count", "one time per split");
  for (std::size_t i = 0; i < u.size(); ++i) {
    require(u[i] > 0 && u[i] < T && (i == 0 || u[i] > u[i - 1]), "split-times-ordered",
            "need 0 < u_1 < ... < u_n < T");
  }
  for (int q : chain.q()) {
    if (spec.max_offspring() >= 0 && q > spec.max_offspring()) return 0.0;
  }
  std::vector<double> times;  // ascending: T - u_n, ..., T - u_1, T
  for (std::size_t i = u.size(); i-- > 0;) times.push_back(T - u[i]);
  times.push_back(T);
  const auto sc = detail::horizon_scales(spec, T, k);
  return integrate_unit(
             [&](UnitPoint s) {
               auto tr = semigroup_trajectory(spec, s, times, 1);
               double v = std::pow(s.complement, k - 1) * detail::inv_factorial(k - 1) * tr.back().derivative(1);
               const int n = chain.splits();
               for (int i = 0; i < n; ++i) {
                 v *= detail::split_factor(spec, chain.q()[static_cast<std::size_t>(i)],
                                           tr[static_cast<std::size_t>(n - 1 - i)]);
               }
               return v;
             },
             detail::scaled(quad, sc.mass), sc.unit_scale)
      .value;
}

struct Window {
  double a, b;
};

// P(u_i in [a_i, b_i] for all i, chain) for ordered, non-overlapping windows.
// For each s the window integrals factorize; each is a composite
// Gauss-Legendre sum with the panel count doubled until it settles.
inline QuadratureResult split_window_probability(const OffspringSpec& spec, double T, int k,
                                                 const MaximalChain& chain, const std::vector<Window>& windows,
                                                 const QuadratureOptions& quad = {}) {
  detail::check_maximal(chain, k);
  require(static_cast<int>(windows.size()) == chain.splits(), "window-count", "one window per split");
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    require(w.a >= 0 && w.a <= w.b && w.b <= T, "window-inside-horizon", "need 0 <= a_i <= b_i <= T");
    require(i == 0 || windows[i - 1].b <= w.a, "windows-disjoint", "windows overlap or are out of order");
  }
  for (const auto& w : windows) {
    if (w.a == w.b) return {};
  }
  for (int q : chain.q()) {
    if (spec.max_offspring() >= 0 && q > spec.max_offspring()) return {};
  }
  const int n = chain.splits();
  auto window_product = [&](UnitPoint s, int panels, double& dT) {
    std::vector<CompositeGauss<10>> rules;
    std::vector<double> times{T};
    for (const auto& w : windows) {
      rules.emplace_back(w.a, w.b, panels);
      for (double u : rules.back().nodes()) times.push_back(T - u);
    }
    std::vector<std::size_t> order(times.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return times[x] < times[y]; });
    std::vector<double> sorted(times.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = times[order[i]];
    auto tr = semigroup_trajectory(spec, s, sorted, 1);
    std::vector<const PgfJet*> at(times.size());
    for (std::size_t i = 0; i < order.size(); ++i) at[order[i]] = &tr[i];
    dT = at[0]->derivative(1);
    double prod = 1;
    std::size_t idx = 1;
    for (int i = 0; i < n; ++i) {
      double sum = 0;
      const auto& r = rules[static_cast<std::size_t>(i)];
      for (std::size_t m = 0; m < r.nodes().size(); ++m) {
        sum += r.weights()[m] * detail::split_factor(spec, chain.q()[static_cast<std::size_t>(i)], *at[idx++]);
      }
      prod *= sum;
    }
    return prod;
  };
  const auto sc = detail::horizon_scales(spec, T, k);
  return integrate_unit(
      [&](UnitPoint s) {
        double dT = 0;
        double prev = window_product(s, 1, dT);
        double cur = prev;
        for (int panels = 2; panels <= 64; panels *= 2) {
          cur = window_product(s, panels, dT);
          if (std::abs(cur - prev) <= 1e-10 * std::abs(cur)) break;
          prev = cur;
        }
        return std::pow(s.complement, k - 1) * detail::inv_factorial(k - 1) * dT * cur;
      },
      detail::scaled(quad, sc.mass), sc.unit_scale);
}

// P(first split time in [edges[j], edges[j+1]), all splits ordered, chain)
// for each bin j. For fixed s the ordered-simplex integral is carried by
// auxiliary ODE states A_n' = h_n, A_i' = h_i A_{i+1} in tau = T - u, with
// h_i the split factor at F_tau(s); the bin mass is a difference of A_1.
inline std::vector<double> split_first_marginal(const OffspringSpec& spec, double T, int k,
                                                const MaximalChain& chain, const std::vector<double>& edges,
                                                const QuadratureOptions& quad = {}) {
  detail::check_maximal(chain, k);
  require(edges.size() >= 2, "bins-non-empty", "need at least one bin");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    require(edges[i] >= 0 && edges[i] <= T && (i == 0 || edges[i] > edges[i - 1]), "bins-ordered",
            "bin edges must increase within [0,T]");
  }
  const int n = chain.splits();
  const auto& q = chain.q();
  std::vector<double> out(edges.size() - 1, 0.0);
  for (int qi : q) {
    if (spec.max_offspring() >= 0 && qi > spec.max_offspring()) return out;
  }
  // Stops in tau, ascending: T - edges[last], ..., T - edges[0], then T.
  std::vector<double> stops;
  for (std::size_t i = edges.size(); i-- > 0;) stops.push_back(T - edges[i]);
  auto a1_at_stops = [&](UnitPoint s, double& dT) {
    detail::ComplementFlow<double> flow(spec, OdeOptions{});
    detail::EmbeddedRk<double> rk(OdeOptions{}, true);
    std::vector<double> x(2 + static_cast<std::size_t>(n), 0.0);
    x[0] = s.complement;
    x[1] = -1;
    auto rhs = [&](const std::vector<double>& y, std::vector<double>& d) {
      d.assign(y.size(), 0.0);
      flow.rhs(std::span<const double>(y.data(), 2), std::span<double>(d.data(), 2));
      PgfJet j{s, UnitPoint::from_complement(y[0]), TaylorJet<double>(s.value, {1 - y[0], -y[1]})};
      // y[2 + n - 1 - i] holds A_{i+1}, i = 0..n-1 (A_n first).
      for (int i = 0; i < n; ++i) {
        const double h = detail::split_factor(spec, q[static_cast<std::size_t>(i)], j);
        const std::size_t self = 2 + static_cast<std::size_t>(n - 1 - i);
        d[self] = i == n - 1 ? h : h * y[self - 1];
      }
    };
    std::vector<double> a1;
    double now = 0;
    for (double tau : stops) {
      rk.advance(rhs, x, tau - now);
      now = tau;
      a1.push_back(x.back());
    }
    rk.advance(rhs, x, T - now);
    dT = -x[1];
    return a1;
  };
  const auto sc = detail::horizon_scales(spec, T, k);
  for (std::size_t bin = 0; bin < out.size(); ++bin) {
    // A_1 at tau = T - edges[bin] minus at tau = T - edges[bin+1].
    const std::size_t hi = edges.size() - 1 - bin, lo = hi - 1;
    out[bin] = integrate_unit(
                   [&](UnitPoint s) {
                     double dT = 0;
                     auto a1 = a1_at_stops(s, dT);
                     return std::pow(s.complement, k - 1) * detail::inv_factorial(k - 1) * dT * (a1[hi] - a1[lo]);
                   },
                   detail::scaled(quad, sc.mass), sc.unit_scale)
                   .value;
  }
  return out;
}

// Integral of split_density over the whole ordered simplex.
inline double split_simplex_probability(const OffspringSpec& spec, double T, int k, const MaximalChain& chain,
                                        const QuadratureOptions& quad = {}) {
  return split_first_marginal(spec, T, k, chain, {0.0, T}, quad)[0];
}

// Density of the mixture measure m^{k,T}(ds).
inline double mixture_density(const OffspringSpec& spec, double T, int k, double s) {
  require(s >= 0 && s <= 1, "s-in-unit-interval", "s must lie in [0,1]");
  require(k >= 1 && k <= kMaxGroundSet, "ground-set-cap", "k out of range");
  const double mass = detail::horizon_scales(spec, T, k).mass;
  PgfJet j = semigroup_at(spec, T, UnitPoint::from_value(s), k, detail::ode_for_order(k));
  return std::pow(1 - s, k - 1) * j.derivative(k) * detail::inv_factorial(k - 1) / mass;
}

// Kernel of the block Gamma of gamma at time t1 breaking into delta at t2,
// under R_s. Empty when the denominator F^{|Gamma|}_{T-t1}(s) vanishes.
inline std::optional<double> markov_transition(const OffspringSpec& spec, double T, double s, const Partition& gamma,
                                               const Block& Gamma, const Partition& delta, double t1, double t2) {
  require(s >= 0 && s <= 1, "s-in-unit-interval", "s must lie in [0,1]");
  require(0 <= t1 && t1 <= t2 && t2 < T, "times-ordered", "need 0 <= t1 <= t2 < T");
  require(std::find(gamma.blocks().begin(), gamma.blocks().end(), Gamma) != gamma.blocks().end(), "block-of-gamma",
          "Gamma is not a block of gamma");
  require(delta.ground() == Gamma, "delta-partitions-block", "delta must partition Gamma");
  const int g = static_cast<int>(Gamma.size()), d = static_cast<int>(delta.size());
  const OdeOptions opt = detail::ode_for_order(g);
  const UnitPoint x = UnitPoint::from_value(s);
  PgfJet inner = semigroup_at(spec, T - t2, x, g, opt);
  PgfJet outer = semigroup_at(spec, t2 - t1, inner.value, d, opt);
  PgfJet direct = semigroup_at(spec, T - t1, x, g, opt);
  const double den = direct.derivative(g);
  if (!(den > 0)) return std::nullopt;
  double num = outer.derivative(d);
  for (const auto& blk : delta.blocks()) num *= inner.derivative(static_cast<int>(blk.size()));
  return num / den;
}

// P(chain, N_T >= k) rebuilt as the mixture of Markov kernels:
// P(N_T >= k) * int m(ds) prod_i prod_Gamma R_s(gamma_i|Gamma -> gamma_{i+1}|Gamma).
inline QuadratureResult markov_mixture_fdd(const LawQuery& q) {
  q.validate();
  const auto sc = detail::horizon_scales(q.spec, q.T, q.k);
  std::vector<double> t{0.0};
  t.insert(t.end(), q.mesh.begin(), q.mesh.end());
  QuadratureResult r = integrate_unit(
      [&](UnitPoint s) {
        double v = mixture_density(q.spec, q.T, q.k, s.value);
        if (v == 0) return 0.0;
        for (int i = 0; i < q.chain.length(); ++i) {
          const Partition from = q.chain.level(i), to = q.chain.level(i + 1);
          for (const auto& blk : from.blocks()) {
            auto p = markov_transition(q.spec, q.T, s.value, from, blk, project(to, blk), t[i], t[i + 1]);
            if (!p) return 0.0;
            v *= *p;
          }
        }
        return v * sc.mass;
      },
      detail::scaled(q.quadrature, sc.mass), sc.unit_scale);
  return r;
}

namespace detail {

// Jet in s (order j) of the FDD product at s.
inline TaylorJet<double> fdd_product_jet(const OffspringSpec& spec, double T, const Mesh& mesh, const Chain& chain,
                                         UnitPoint s, int j) {
  const LevelTable b = breakage_numbers(chain);
  const auto dt = increments(mesh, T);
  TaylorJet<double> x = TaylorJet<double>::variable(s.value, j);
  UnitPoint xv = s;
  TaylorJet<double> prod = TaylorJet<double>::constant(s.value, 1.0, j);
  for (int i = chain.length(); i >= 0; --i) {
    const auto& row = b[static_cast<std::size_t>(i)];
    const int order = max_of(row) + j;
    PgfJet g = semigroup_at(spec, dt[static_cast<std::size_t>(i)], xv, order, ode_for_order(order));
    for (int bi : row) {
      TaylorJet<double> outer = g.jet.shifted(bi, j) * factorial(bi);
      prod = prod * compose(outer, x);
    }
    x = compose(g.jet, x);
    xv = g.value;
  }
  return prod;
}

}  // namespace detail

// P(pi^k chain, N_T >= k + j): the k-sample chain law on the event that at
// least k + j particles are alive.
inline QuadratureResult projection_fdd(const LawQuery& q, int j) {
  q.validate();
  require(j >= 0 && q.k + j <= kMaxGroundSet, "projection-order", "need j >= 0 and k + j <= 10");
  const auto sc = detail::horizon_scales(q.spec, q.T, q.k + j);
  return integrate_unit(
      [&](UnitPoint s) {
        TaylorJet<double> p = detail::fdd_product_jet(q.spec, q.T, q.mesh, q.chain, s, j);
        return std::pow(s.complement, q.k + j - 1) * detail::inv_factorial(q.k + j - 1) * p.derivative(j);
      },
      detail::scaled(q.quadrature, sc.mass), sc.unit_scale);
}

// P(pi^k chain, N_T = k + j), from the j-th derivative of the FDD product at s = 0.
inline double exact_size_fdd(const LawQuery& q, int j) {
  q.validate();
  require(j >= 0 && q.k + j <= kMaxGroundSet, "projection-order", "need j >= 0 and k + j <= 10");
  TaylorJet<double> p = detail::fdd_product_jet(q.spec, q.T, q.mesh, q.chain, UnitPoint::from_value(0), j);
  return p.derivative(j) * detail::inv_factorial(q.k + j);
}

struct IdentityGap {
  double lhs = 0, rhs = 0, gap = 0;
};

// Chain-sum form of the k-th derivative of F_T = F_{dt_0} o ... o F_{dt_n}.
inline IdentityGap faa_di_bruno_check(const OffspringSpec& spec, double T, int k, const Mesh& mesh, double s) {
  validate_mesh(mesh, T);
  require(k >= 1 && k <= 5 && mesh.size() <= 3, "identity-caps", "need k <= 5 and n <= 3");
  const UnitPoint x = UnitPoint::from_value(s);
  IdentityGap g;
  g.lhs = semigroup_at(spec, T, x, k).derivative(k);
  for (const auto& c : enumerate_chains(k, static_cast<int>(mesh.size()))) g.rhs += fdd_product(spec, T, mesh, c, x);
  g.gap = std::abs(g.lhs - g.rhs) / std::max(std::abs(g.lhs), 1e-300);
  return g;
}

// Classical Faa di Bruno: (g o h)^{(k)}(x) = sum over partitions gamma of {1..k}
// of g^{(|gamma|)}(h(x)) prod_{Gamma} h^{(|Gamma|)}(x). `outer` is the jet of g
// at h(x), `inner` the jet of h at x.
inline double faa_di_bruno_sum(const TaylorJet<double>& outer, const TaylorJet<double>& inner, int k) {
  double sum = 0;
  for (const auto& p : enumerate_partitions(k)) {
    double term = outer.derivative(static_cast<int>(p.size()));
    for (const auto& b : p.blocks()) term *= inner.derivative(static_cast<int>(b.size()));
    sum += term;
  }
  return sum;
}

// int_0^1 (1-s)^{k-1}/(k-1)! E[N^{(k)} s^{N-k}] ds against P(N >= k).
inline IdentityGap beta_inversion_check(int k, const std::vector<double>& pmf) {
  require(k >= 1, "k-positive", "k must be >= 1");
  require(!pmf.empty(), "pmf-non-empty", "empty pmf");
  IdentityGap g;
  for (std::size_t n = static_cast<std::size_t>(k); n < pmf.size(); ++n) g.rhs += pmf[n];
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-11;
  g.lhs = integrate(
              [&](double s) {
                double e = 0;
                for (std::size_t n = pmf.size(); n-- > static_cast<std::size_t>(k);) {
                  double ff = 1;
                  for (int i = 0; i < k; ++i) ff *= static_cast<double>(n - static_cast<std::size_t>(i));
                  e = e * s + ff * pmf[n];
                }
                return std::pow(1 - s, k - 1) * detail::inv_factorial(k - 1) * e;
              },
              0.0, 1.0, opt)
              .value;
  g.gap = std::abs(g.lhs - g.rhs);
  return g;
}

// Law of the reversed (coalescent) process rho_t = pi_{(T-t)-}:
// P(rho_{t_1} = gamma_1, ..., rho_{t_n} = gamma_n, N_T >= k) for a merging
// chain, = int (1-s)^{k-1}/(k-1)! prod_{j=1}^{n+1} prod_{Gamma in gamma_j}
// F^{m_j(Gamma)}_{dt_{j-1}}(F_{t_{j-1}}(s)) ds.
inline QuadratureResult reversed_fdd(const LawQuery& q) {
  q.validate(Orientation::kMerging);
  const LevelTable m = merger_numbers(q.chain);
  const auto dt = detail::increments(q.mesh, q.T);
  const auto sc = detail::horizon_scales(q.spec, q.T, q.k);
  return integrate_unit(
      [&](UnitPoint s) {
        double prod = std::pow(s.complement, q.k - 1) * detail::inv_factorial(q.k - 1);
        UnitPoint y = s;
        for (int j = 1; j <= q.chain.length() + 1; ++j) {
          const auto& row = m[static_cast<std::size_t>(j)];
          const int order = detail::max_of(row);
          PgfJet g = semigroup_at(q.spec, dt[static_cast<std::size_t>(j - 1)], y, order, detail::ode_for_order(order));
          for (int mj : row) prod *= g.derivative(mj);
          y = g.value;
        }
        return prod;
      },
      detail::scaled(q.quadrature, sc.mass), sc.unit_scale);
}

}  // namespace gwgen

#endif  // GWGEN_LAWS_HPP_
