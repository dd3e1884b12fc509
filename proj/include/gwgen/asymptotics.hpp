// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// T -> infinity limits of the partition process: the supercritical law built
// on the Laplace transform phi of the martingale limit W, the universal
// critical law, and the subcritical law of the reversed process built on the
// quasi-stationary generating function C. Also the scaling lemmas behind
// them, as finite-T versus limit comparisons.

#ifndef GWGEN_ASYMPTOTICS_HPP_
#define GWGEN_ASYMPTOTICS_HPP_

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "gwgen/error.hpp"
#include "gwgen/laws.hpp"
#include "gwgen/offspring.hpp"
#include "gwgen/partitions.hpp"
#include "gwgen/quadrature.hpp"
#include "gwgen/semigroup.hpp"

namespace gwgen {

struct LimitGap {
  double finite = 0, limit = 0, gap = 0;
};

// phi(v) = E[exp(-v W)], W = lim N_t e^{-(m-1)t}, through the identity
// phi(v) = F_t(phi(v e^{-(m-1)t})): the argument is shrunk below eps0, where
// phi(u) = 1 - u + O(u^2), and the seed is carried back by F_t.
class LaplaceTransform {
 public:
  explicit LaplaceTransform(OffspringSpec spec, double eps0 = 1e-11) : spec_(std::move(spec)), eps0_(eps0) {
    require(spec_.mean() > 1, "supercritical", "the Laplace transform of W needs m > 1");
    require(eps0 > 0 && eps0 < 1e-3, "seed-threshold", "eps0 must lie in (0, 1e-3)");
  }

  const OffspringSpec& spec() const { return spec_; }
  double eps0() const { return eps0_; }
  // phi(infinity) = P(W = 0) = extinction probability.
  double at_infinity() const { return spec_.extinction_probability(); }

  // Jet of phi at v, together with 1 - phi(v) to full relative precision.
  // Throws NumericError if halving eps0 moves phi(v) by 1e-9 or more.
  PgfJet jet(double v, int order) const {
    require(v >= 0 && std::isfinite(v), "v-nonnegative", "v must be finite and >= 0");
    const std::pair<double, int> key{v, order};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    PgfJet j = bootstrap(v, order, eps0_);
    PgfJet half = bootstrap(v, 0, 0.5 * eps0_);
    const double change = std::abs(j.value.complement - half.value.complement);
    if (!(change < 1e-9)) {
      throw NumericError("phi(" + detail::format_real(v) + "): halving eps0 changed the value by " +
                         detail::format_real(change));
    }
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(key, std::move(j)).first->second;
  }

  double value(double v) const { return jet(v, 0).value.value; }

 private:
  PgfJet bootstrap(double v, int order, double eps0) const {
    const double rate = spec_.mean() - 1;
    const double t_star = std::log(std::max(v, 1.0) / eps0) / rate;
    const double sigma = std::exp(-rate * t_star);
    OdeOptions opt;
    opt.max_order = std::max(opt.max_order, order);
    detail::check_order(order, opt);
    // Complement series of phi(sigma (v + d)) ~ 1 - sigma v - sigma d.
    std::vector<double> w(static_cast<std::size_t>(order) + 1, 0.0);
    w[0] = sigma * v;
    if (order >= 1) w[1] = sigma;
    detail::ComplementFlow<double> flow(spec_, opt);
    flow.advance(w, t_star);
    PgfJet out = detail::to_pgf_jet(UnitPoint::from_value(0), w);
    out.at = {v, 1 - v};
    out.jet = TaylorJet<double>(v, out.jet.coeffs());
    return out;
  }

  OffspringSpec spec_;
  double eps0_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<double, int>, PgfJet> cache_;
};

// Limit as T -> infinity of P(pi_{t_1} = gamma_1, ..., pi_{t_n} = gamma_n | N_T >= k)
// for m > 1. The inner arguments phi(e^{-(m-1)t_i} v) are obtained from
// phi(e^{-(m-1)t_n} v) by the flows F_{dt_i}.
inline QuadratureResult super_fdd(const LaplaceTransform& phi, int k, const Mesh& mesh, const Chain& chain,
                                  const QuadratureOptions& quad = {}) {
  require(!mesh.empty(), "mesh-non-empty", "mesh needs at least one time");
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    require(mesh[i] > 0 && (i == 0 || mesh[i] > mesh[i - 1]), "mesh-increasing", "need 0 < t_1 < ... < t_n");
  }
  require(chain.k() == k && chain.length() == static_cast<int>(mesh.size()), "chain-mesh-length",
          "chain must be on {1..k} with one partition per mesh time");
  require(chain.orientation() == Orientation::kBreaking, "breaking-chain", "need a breaking chain");
  const OffspringSpec& spec = phi.spec();
  const double rate = spec.mean() - 1;
  const int n = chain.length();
  const LevelTable b = breakage_numbers(chain);
  const double tn = mesh.back();
  const double prefactor = (k % 2 == 0 ? 1.0 : -1.0) * std::exp(-k * rate * tn) / (1 - phi.at_infinity());
  const Partition last = chain.level(n);
  int top = 1;
  for (const auto& blk : last.blocks()) top = std::max(top, static_cast<int>(blk.size()));
  return integrate_half_line(
      [&](double v) {
        PgfJet p = phi.jet(std::exp(-rate * tn) * v, top);
        double prod = std::pow(v, k - 1) * detail::inv_factorial(k - 1);
        for (const auto& blk : last.blocks()) prod *= p.derivative(static_cast<int>(blk.size()));
        UnitPoint y = p.value;
        for (int i = n - 1; i >= 0; --i) {
          const auto& row = b[static_cast<std::size_t>(i)];
          const double dt = mesh[static_cast<std::size_t>(i)] - (i == 0 ? 0.0 : mesh[static_cast<std::size_t>(i - 1)]);
          const int order = detail::max_of(row);
          PgfJet g = semigroup_at(spec, dt, y, order, detail::ode_for_order(order));
          for (int bi : row) prod *= g.derivative(bi);
          y = g.value;
        }
        return prefactor * prod;
      },
      quad);
}

// P(tau > t, survival) in the limit T -> infinity, k = 2:
// int_0^inf v sigma phi''(sigma v) / phi'(sigma v) phi'(v) dv, sigma = e^{-(m-1)t}.
inline QuadratureResult tau_lim(const LaplaceTransform& phi, double t, const QuadratureOptions& quad = {}) {
  require(t >= 0 && std::isfinite(t), "time-nonnegative", "t must be finite and >= 0");
  const double sigma = std::exp(-(phi.spec().mean() - 1) * t);
  return integrate_half_line(
      [&](double v) {
        PgfJet inner = phi.jet(sigma * v, 2);
        PgfJet outer = phi.jet(v, 1);
        return v * sigma * inner.derivative(2) / inner.derivative(1) * outer.derivative(1);
      },
      quad);
}

// Limit law of (pi_{Tt})_{t in [0,1]} given N_T >= k for critical trees.
inline QuadratureResult critical_fdd(int k, const Mesh& mesh, const Chain& chain, const QuadratureOptions& quad = {}) {
  validate_mesh(mesh, 1.0);
  require(chain.k() == k && chain.length() == static_cast<int>(mesh.size()), "chain-mesh-length",
          "chain must be on {1..k} with one partition per mesh time");
  require(chain.orientation() == Orientation::kBreaking, "breaking-chain", "need a breaking chain");
  const int n = chain.length();
  const LevelTable b = breakage_numbers(chain);
  double factorials = 1;
  for (const auto& row : b) {
    for (int bi : row) factorials *= detail::factorial(bi);
  }
  std::vector<double> t{0.0};
  t.insert(t.end(), mesh.begin(), mesh.end());
  t.push_back(1.0);
  std::vector<int> size(static_cast<std::size_t>(n) + 2);
  for (int i = 0; i <= n + 1; ++i) size[static_cast<std::size_t>(i)] = static_cast<int>(chain.level(i).size());
  QuadratureResult r = integrate_half_line(
      [&](double theta) {
        double v = std::pow(theta, k - 1) * detail::inv_factorial(k - 1);
        for (int i = 0; i <= n; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          const double ratio = (1 + (1 - t[ui + 1]) * theta) / (1 + (1 - t[ui]) * theta);
          v *= std::pow(t[ui + 1] - t[ui], size[ui + 1] - size[ui]) * std::pow(ratio, size[ui] + size[ui + 1]);
        }
        return factorials * v;
      },
      quad);
  return r;
}

// Limit of P(tau / T >= u | N_T >= 2): 2(1-u)/u^2 (log(1/(1-u)) - u).
inline double critical_k2_tail(double u) {
  require(u >= 0 && u <= 1, "u-in-unit-interval", "u must lie in [0,1]");
  if (u == 1) return 0;
  if (u < 0.01) {
    // log(1/(1-u)) - u = sum_{j>=2} u^j / j.
    double sum = 0, p = 1;
    for (int j = 2; j < 30; ++j, p *= u) sum += p / j;
    return 2 * (1 - u) * sum;
  }
  return 2 * (1 - u) / (u * u) * (-std::log1p(-u) - u);
}

// Joint density of the k-1 split times of the critical limit process, summed
// over tree topologies.
inline double critical_split_density(int k, const std::vector<double>& u, const QuadratureOptions& quad = {}) {
  require(k >= 2 && static_cast<int>(u.size()) == k - 1, "split-times-count", "need k >= 2 and k - 1 times");
  for (std::size_t i = 0; i < u.size(); ++i) {
    require(u[i] >= 0 && u[i] < 1 && (i == 0 || u[i] > u[i - 1]), "split-times-ordered",
            "need 0 <= u_1 < ... < u_{k-1} < 1");
  }
  return k * integrate_half_line(
                 [&](double theta) {
                   double v = std::pow(theta, k - 1) / ((1 + theta) * (1 + theta));
                   for (double ui : u) v /= (1 + theta * (1 - ui)) * (1 + theta * (1 - ui));
                   return v;
                 },
                 quad)
                 .value;
}

namespace detail {

inline void require_critical(const OffspringSpec& spec) {
  require(std::abs(spec.mean() - 1) <= 1e-12, "critical", "this operation needs m = 1");
}

}  // namespace detail

// (cT)^{-(j-1)} F^{(j)}_{aT}(F_{bT}(exp(-theta/cT))) against
// a^{j-1} j! ((1 + theta b) / (1 + theta (a + b)))^{j+1}, c = f''(1)/2.
inline LimitGap critical_scaling_check(const OffspringSpec& spec, double a, double b, double theta, int j, double T) {
  detail::require_critical(spec);
  require(a > 0 && b >= 0 && theta >= 0 && j >= 1 && T > 0, "scaling-parameters",
          "need a > 0, b >= 0, theta >= 0, j >= 1, T > 0");
  const double c = spec.second_factorial_moment() / 2;
  const UnitPoint s = UnitPoint::from_complement(-std::expm1(-theta / (c * T)));
  const PgfJet inner = semigroup_at(spec, b * T, s, 0);
  const PgfJet outer = semigroup_at(spec, a * T, inner.value, j, detail::ode_for_order(j));
  LimitGap g;
  g.finite = std::pow(c * T, -(j - 1)) * outer.derivative(j);
  g.limit = std::pow(a, j - 1) * detail::factorial(j) * std::pow((1 + theta * b) / (1 + theta * (a + b)), j + 1);
  g.gap = std::abs(g.finite - g.limit);
  return g;
}

struct YaglomConstants {
  double c;              // f''(1) / 2
  double scaled_survival;  // T P(N_T > 0)
  double gap;            // |T P(N_T > 0) - 1/c|
};

inline YaglomConstants yaglom_constants(const OffspringSpec& spec, double T) {
  detail::require_critical(spec);
  require(T > 0, "horizon-positive", "T must be > 0");
  const double c = spec.second_factorial_moment() / 2;
  const double ts = T * population_pmf(spec, T, 0).survival;
  return {c, ts, std::abs(ts - 1 / c)};
}

// P(N_T / (cT) > x | N_T > 0), from the pmf up to floor(x c T).
inline double yaglom_tail(const OffspringSpec& spec, double T, double x) {
  detail::require_critical(spec);
  require(T > 0 && x >= 0, "yaglom-parameters", "need T > 0 and x >= 0");
  const double c = spec.second_factorial_moment() / 2;
  const int jmax = static_cast<int>(std::floor(x * c * T));
  require(jmax <= 2000, "jet-order-cap", "x c T too large for the pmf expansion");
  PopulationPmf pmf = population_pmf(spec, T, jmax, detail::ode_for_order(jmax));
  return pmf.at_least(jmax + 1) / pmf.survival;
}

// Quasi-stationary law of a subcritical tree, c_j = lim P(N_T = j | N_T > 0),
// with C(s) = lim 1 - (1 - F_T(s)) / (1 - F_T(0)). The horizon is doubled from
// 20 until the coefficients c_1..c_jmax move by less than 1e-9 (cap 640).
class QuasiStationary {
 public:
  struct Step {
    double T;
    double change;  // max_j |c_j(T) - c_j(T/2)|
  };

  QuasiStationary(OffspringSpec spec, int jmax) : spec_(std::move(spec)), jmax_(jmax) {
    require(spec_.mean() < 1, "subcritical", "the quasi-stationary law needs m < 1");
    require(jmax >= 1 && jmax <= 200, "jet-order-cap", "jmax must be in [1,200]");
    std::vector<double> prev = coefficients_at(20.0);
    for (double T = 40; T <= 640; T *= 2) {
      std::vector<double> cur = coefficients_at(T);
      double change = 0;
      for (std::size_t j = 0; j < cur.size(); ++j) change = std::max(change, std::abs(cur[j] - prev[j]));
      history_.push_back({T, change});
      prev = std::move(cur);
      if (change < 1e-9) {
        horizon_ = T;
        c_ = std::move(prev);
        return;
      }
    }
    throw NumericError("quasi-stationary coefficients did not stabilize by T = 640");
  }

  const OffspringSpec& spec() const { return spec_; }
  double horizon() const { return horizon_; }
  const std::vector<Step>& history() const { return history_; }
  // c_0 = 0, c_1, ..., c_jmax.
  const std::vector<double>& coefficients() const { return c_; }
  double c(int j) const { return j >= 0 && j <= jmax_ ? c_[static_cast<std::size_t>(j)] : 0.0; }

  // Jet of C at s.
  TaylorJet<double> C(UnitPoint s, int order) const {
    OdeOptions opt = detail::ode_for_order(order);
    const PgfJet zero = semigroup_at(spec_, horizon_, UnitPoint::from_value(0), 0);
    const PgfJet at = semigroup_at(spec_, horizon_, s, order, opt);
    const double w0 = zero.value.complement;
    std::vector<double> c(static_cast<std::size_t>(order) + 1);
    c[0] = 1 - at.value.complement / w0;
    for (int r = 1; r <= order; ++r) c[static_cast<std::size_t>(r)] = at.jet[r] / w0;
    return TaylorJet<double>(s.value, std::move(c));
  }

 private:
  std::vector<double> coefficients_at(double T) const {
    PopulationPmf pmf = population_pmf(spec_, T, jmax_, detail::ode_for_order(jmax_));
    std::vector<double> c(pmf.p.size(), 0.0);
    for (std::size_t j = 1; j < c.size(); ++j) c[j] = pmf.p[j] / pmf.survival;
    return c;
  }

  OffspringSpec spec_;
  int jmax_;
  double horizon_ = 0;
  std::vector<double> c_;
  std::vector<Step> history_;
};

// Limit as T -> infinity of P(rho_{t_1} = gamma_1, ..., rho_{t_n} = gamma_n | N_T >= k)
// for m < 1 and a merging chain:
// e^{-(m-1)t_n} / (1 - sum_{j<k} c_j) int (1-s)^{k-1}/(k-1)! C^{(|gamma_n|)}(F_{t_n}(s))
//   prod_{j=1}^n prod_{Gamma in gamma_j} F^{m_j(Gamma)}_{dt_{j-1}}(F_{t_{j-1}}(s)) ds.
inline QuadratureResult sub_fdd(const QuasiStationary& qs, int k, const Mesh& mesh, const Chain& chain,
                                const QuadratureOptions& quad = {}) {
  require(!mesh.empty(), "mesh-non-empty", "mesh needs at least one time");
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    require(mesh[i] > 0 && (i == 0 || mesh[i] > mesh[i - 1]), "mesh-increasing", "need 0 < t_1 < ... < t_n");
  }
  require(chain.k() == k && chain.length() == static_cast<int>(mesh.size()), "chain-mesh-length",
          "chain must be on {1..k} with one partition per mesh time");
  require(chain.orientation() == Orientation::kMerging, "merging-chain", "need a merging chain");
  require(k <= static_cast<int>(qs.coefficients().size()), "jet-order-cap", "quasi-stationary jmax below k");
  const OffspringSpec& spec = qs.spec();
  const int n = chain.length();
  const LevelTable m = merger_numbers(chain);
  double below = 0;
  for (int j = 1; j < k; ++j) below += qs.c(j);
  const double prefactor = std::exp(-(spec.mean() - 1) * mesh.back()) / (1 - below);
  const int top = static_cast<int>(chain.level(n).size());
  return integrate_unit(
      [&](UnitPoint s) {
        double prod = std::pow(s.complement, k - 1) * detail::inv_factorial(k - 1);
        UnitPoint y = s;
        for (int j = 1; j <= n; ++j) {
          const auto& row = m[static_cast<std::size_t>(j)];
          const double dt = mesh[static_cast<std::size_t>(j - 1)] - (j == 1 ? 0.0 : mesh[static_cast<std::size_t>(j - 2)]);
          const int order = detail::max_of(row);
          PgfJet g = semigroup_at(spec, dt, y, order, detail::ode_for_order(order));
          for (int mj : row) prod *= g.derivative(mj);
          y = g.value;
        }
        return prefactor * prod * qs.C(y, top).derivative(top);
      },
      quad);
}

// Limit CDF of T - tau for k = 2: 1/(1 - c_1) int (1-s) F''_t(s)/F'_t(s) C'(s) ds.
inline QuadratureResult sub_k2_cdf(const QuasiStationary& qs, double t, const QuadratureOptions& quad = {}) {
  require(t >= 0 && std::isfinite(t), "time-nonnegative", "t must be finite and >= 0");
  const double norm = 1 / (1 - qs.c(1));
  return integrate_unit(
      [&](UnitPoint s) {
        PgfJet f = semigroup_at(qs.spec(), t, s, 2);
        const double d1 = f.derivative(1);
        if (d1 <= 0) return 0.0;
        return norm * s.complement * f.derivative(2) / d1 * qs.C(s, 1).derivative(1);
      },
      quad);
}

// e^{-j(m-1)T} F^{(j)}_{T-t}(exp(-v e^{-(m-1)T})) against
// (-1)^j e^{-j(m-1)t} phi^{(j)}(v e^{-(m-1)t}).
inline LimitGap tech_lemma_check(const LaplaceTransform& phi, double v, double t, int j, double T) {
  require(v > 0 && t >= 0 && j >= 0 && T > t, "scaling-parameters", "need v > 0, j >= 0, 0 <= t < T");
  const double rate = phi.spec().mean() - 1;
  const double x = v * std::exp(-rate * T);
  const UnitPoint s = UnitPoint::from_complement(-std::expm1(-x));
  const PgfJet f = semigroup_at(phi.spec(), T - t, s, j, detail::ode_for_order(j));
  LimitGap g;
  g.finite = std::exp(-j * rate * T) * (j == 0 ? f.value.value : f.derivative(j));
  const PgfJet p = phi.jet(v * std::exp(-rate * t), j);
  g.limit = (j % 2 == 0 ? 1.0 : -1.0) * std::exp(-j * rate * t) * (j == 0 ? p.value.value : p.derivative(j));
  g.gap = std::abs(g.finite - g.limit);
  return g;
}

}  // namespace gwgen

#endif  // GWGEN_ASYMPTOTICS_HPP_
