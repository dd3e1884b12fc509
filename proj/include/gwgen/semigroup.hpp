// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// The generating-function semigroup F_t(s) = E[s^{N_t}] and its s-derivatives.
//
// F solves dF/dt = f(F) - F, F_0(s) = s. We integrate the complement
// W = 1 - F, i.e. dW/dt = psi(W) - W with psi(w) = 1 - f(1 - w), on the full
// Taylor series of W in s. Every coefficient of W keeps one sign, so a purely
// relative step-size control is meaningful, and survival probabilities of
// order 1e-100 keep full relative precision.

#ifndef GWGEN_SEMIGROUP_HPP_
#define GWGEN_SEMIGROUP_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <type_traits>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "gwgen/error.hpp"
#include "gwgen/jet.hpp"
#include "gwgen/offspring.hpp"

namespace gwgen {

inline constexpr int kMaxJetOrder = 12;

struct OdeOptions {
  double rel_tol = 1e-11;
  double abs_floor = 1e-300;
  // Components 1.. are also measured against this fraction of the largest of
  // them: a coefficient growing like t^p from zero is invisible to the
  // embedded lower-order solution, so its relative error estimate stays O(1).
  double coefficient_floor = 1e-6;
  long max_steps = 1'000'000;
  int max_order = kMaxJetOrder;
};

// A point x of [0,1] together with 1 - x, both to full relative precision.
struct UnitPoint {
  double value = 0;
  double complement = 1;
  static UnitPoint from_value(double s) { return {s, 1 - s}; }
  static UnitPoint from_complement(double w) { return {1 - w, w}; }
};

// Jet of F_t at `at`, with the value F_t(at) also held as a UnitPoint.
struct PgfJet {
  UnitPoint at;
  UnitPoint value;
  TaylorJet<double> jet;
  double derivative(int r) const { return jet.derivative(r); }
  int order() const { return jet.order(); }
};

namespace detail {

namespace odeint = boost::numeric::odeint;

// Embedded Runge-Kutta integration with relative error control: Dormand-Prince
// 5(4) in double precision, Fehlberg 7(8) for wider scalar types. The local
// error of component i is measured against
// rel_tol * max(|x_i before|, |x_i after|, coefficient_floor * ref) + abs_floor,
// where ref is the largest component other than 0; component 0 is controlled
// purely relatively and is clamped to [0,1] after each step when
// `clamp_first` is set.
template <typename Real = double>
class EmbeddedRk {
 public:
  using State = std::vector<Real>;

  EmbeddedRk(const OdeOptions& opt, bool clamp_first) : opt_(opt), clamp_first_(clamp_first) {}

  // rhs(const State& x, State& dxdt). Evolves `x` forward by `dt` in place.
  template <class Rhs>
  void advance(Rhs&& rhs, State& x, Real dt) {
    const double dtd = static_cast<double>(dt);
    require(dtd >= 0 && std::isfinite(dtd), "time-nonnegative", "time step must be finite and >= 0");
    if (dtd == 0) return;
    const std::size_t n = x.size();
    out_.resize(n);
    err_.resize(n);
    dxdt_.resize(n);
    dxdt_out_.resize(n);
    rhs(x, dxdt_);
    Real t = 0;
    Real h = h_hint_ > 0 ? std::min(dtd, h_hint_) : std::min(dtd, 1e-2);
    auto sys = [&rhs](const State& y, State& d, Real) { rhs(y, d); };
    while (t < dt) {
      if (++steps_ > opt_.max_steps) throw NumericError("ODE: step budget exceeded");
      const bool last = h >= dt - t;
      const Real step = last ? Real(dt - t) : h;
      if constexpr (kFsal) {
        stepper_.do_step(sys, x, dxdt_, t, out_, dxdt_out_, step, err_);
      } else {
        stepper_.do_step(sys, x, dxdt_, t, out_, step, err_);
      }
      double ref = 0;
      for (std::size_t i = 1; i < n; ++i) {
        ref = std::max({ref, std::abs(static_cast<double>(x[i])), std::abs(static_cast<double>(out_[i]))});
      }
      double e = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double scale = opt_.rel_tol * std::max({std::abs(static_cast<double>(x[i])),
                                                      std::abs(static_cast<double>(out_[i])),
                                                      i == 0 ? 0.0 : opt_.coefficient_floor * ref}) +
                             opt_.abs_floor;
        e = std::max(e, std::abs(static_cast<double>(err_[i])) / scale);
      }
      if (!std::isfinite(e)) e = 1e10;
      if (e <= 1) {
        t = last ? dt : Real(t + step);
        x.swap(out_);
        if constexpr (kFsal) {
          dxdt_.swap(dxdt_out_);
        }
        const bool clamped = clamp_first_ && (x[0] < 0 || x[0] > 1);
        if (clamped) x[0] = x[0] < 0 ? Real(0) : Real(1);
        if (!kFsal || clamped) rhs(x, dxdt_);
        const Real grown = step * Real(e > 0 ? std::min(5.0, 0.9 * std::pow(e, -1.0 / kOrder)) : 5.0);
        h = last ? std::max(h, grown) : grown;
      } else {
        h = step * Real(std::max(0.1, 0.9 * std::pow(e, -1.0 / kOrder)));
        if (!(static_cast<double>(h) > 1e-15 * std::max(1.0, dtd))) {
          throw NumericError("ODE: step size underflow");
        }
      }
    }
    h_hint_ = static_cast<double>(h);
  }

  long steps() const { return steps_; }

 private:
  static constexpr bool kFsal = std::is_same_v<Real, double>;
  static constexpr double kOrder = kFsal ? 5.0 : 8.0;
  using Stepper = std::conditional_t<kFsal, odeint::runge_kutta_dopri5<State, Real, State, Real>,
                                     odeint::runge_kutta_fehlberg78<State, Real, State, Real>>;

  OdeOptions opt_;
  bool clamp_first_;
  Stepper stepper_;
  State out_, err_, dxdt_, dxdt_out_;
  double h_hint_ = 0;
  long steps_ = 0;
};

// Evolves the complement series W = 1 - F under dW/dt = psi(W) - W.
template <typename Real = double>
class ComplementFlow {
 public:
  using State = std::vector<Real>;

  ComplementFlow(const OffspringSpec& spec, const OdeOptions& opt) : spec_(&spec), rk_(opt, true) {}

  void advance(State& w, Real dt) {
    rk_.advance([this](const State& x, State& d) { rhs(x, d); }, w, dt);
  }

  // dW/dt for the series `x`.
  void rhs(std::span<const Real> x, std::span<Real> dxdt) {
    spec_->complement_on_series<Real>(x, dxdt, scratch_);
    for (std::size_t i = 0; i < x.size(); ++i) dxdt[i] -= x[i];
  }

  long steps() const { return rk_.steps(); }

 private:
  const OffspringSpec* spec_;
  EmbeddedRk<Real> rk_;
  State scratch_;
};

inline std::vector<double> initial_series(UnitPoint x, int order) {
  std::vector<double> w(static_cast<std::size_t>(order) + 1, 0.0);
  w[0] = x.complement;
  if (order >= 1) w[1] = -1;
  return w;
}

inline PgfJet to_pgf_jet(UnitPoint at, const std::vector<double>& w) {
  std::vector<double> c(w.size());
  c[0] = 1 - w[0];
  for (std::size_t r = 1; r < w.size(); ++r) c[r] = -w[r];
  return {at, UnitPoint::from_complement(w[0]), TaylorJet<double>(at.value, std::move(c))};
}

inline void check_order(int order, const OdeOptions& opt) {
  require(order >= 0 && order <= opt.max_order, "jet-order-cap",
          "order must be in [0," + std::to_string(opt.max_order) + "]");
}

}  // namespace detail

inline PgfJet semigroup_at(const OffspringSpec& spec, double t, UnitPoint x, int order,
                           const OdeOptions& opt = {}) {
  detail::check_order(order, opt);
  require(t >= 0 && std::isfinite(t), "time-nonnegative", "t must be finite and >= 0");
  require(x.value >= 0 && x.value <= 1, "s-in-unit-interval", "s must lie in [0,1]");
  auto w = detail::initial_series(x, order);
  detail::ComplementFlow<double> flow(spec, opt);
  flow.advance(w, t);
  return detail::to_pgf_jet(x, w);
}

// Jets of F_tau at x for each tau in `times` (ascending), from one pass.
inline std::vector<PgfJet> semigroup_trajectory(const OffspringSpec& spec, UnitPoint x,
                                                std::span<const double> times, int order,
                                                const OdeOptions& opt = {}) {
  detail::check_order(order, opt);
  auto w = detail::initial_series(x, order);
  detail::ComplementFlow<double> flow(spec, opt);
  std::vector<PgfJet> out;
  out.reserve(times.size());
  double now = 0;
  for (double tau : times) {
    require(tau >= now, "times-ascending", "trajectory times must be ascending and >= 0");
    flow.advance(w, tau - now);
    now = tau;
    out.push_back(detail::to_pgf_jet(x, w));
  }
  return out;
}

// Jet of F_t at s, orders 0..order (order <= 12).
inline TaylorJet<double> semigroup_jet(const OffspringSpec& spec, double t, double s, int order,
                                       const OdeOptions& opt = {}) {
  return semigroup_at(spec, t, UnitPoint::from_value(s), order, opt).jet;
}

// Jets of F_tau at s for ascending `times`, in an arbitrary floating type
// (e.g. a quad-precision type); the error controller itself runs in double.
template <typename Real>
std::vector<TaylorJet<Real>> semigroup_trajectory_in(const OffspringSpec& spec, Real s,
                                                     std::span<const Real> times, int order,
                                                     const OdeOptions& opt) {
  detail::check_order(order, opt);
  require(s >= 0 && s <= 1, "s-in-unit-interval", "s must lie in [0,1]");
  std::vector<Real> w(static_cast<std::size_t>(order) + 1, Real(0));
  w[0] = Real(1) - s;
  if (order >= 1) w[1] = Real(-1);
  detail::ComplementFlow<Real> flow(spec, opt);
  std::vector<TaylorJet<Real>> out;
  Real now = 0;
  for (const Real& tau : times) {
    require(tau >= now, "times-ascending", "trajectory times must be ascending and >= 0");
    flow.advance(w, tau - now);
    now = tau;
    std::vector<Real> c(w.size());
    c[0] = Real(1) - w[0];
    for (std::size_t r = 1; r < w.size(); ++r) c[r] = -w[r];
    out.emplace_back(s, std::move(c));
  }
  return out;
}

// F_t(s) for f = alpha + beta s^2 (alpha + beta = 1), in closed form.
template <typename Real = double>
TaylorJet<Real> birth_death_closed_form(double alpha, double beta, Real t, Real s, int order) {
  require(alpha >= 0 && beta >= 0 && std::abs(alpha + beta - 1) <= 1e-12, "birth-death-normalized",
          "need alpha, beta >= 0 and alpha + beta = 1");
  require(t >= 0, "time-nonnegative", "t must be >= 0");
  require(order >= 0, "jet-order", "negative order");
  using J = TaylorJet<Real>;
  using std::exp;
  const J x = J::variable(s, order);
  const J one_minus = Real(1) - x;
  const Real a(alpha), b(beta);
  if (alpha == beta) {
    return Real(1) - one_minus / (Real(1) + b * t * one_minus);
  }
  const Real e = exp((b - a) * t);
  J num = a * e * one_minus + b * x;
  num[0] -= a;
  J den = b * e * one_minus + b * x;
  den[0] -= a;
  require(den.value() != 0, "closed-form-denominator", "zero denominator");
  return num / den;
}

struct PopulationPmf {
  std::vector<double> p;  // P(N_T = j), j = 0..jmax
  double survival = 0;    // P(N_T > 0), to full relative precision

  // P(N_T >= k) = P(N_T > 0) - sum_{1 <= j < k} P(N_T = j).
  double at_least(int k) const {
    require(k >= 0 && k <= static_cast<int>(p.size()), "pmf-range", "k exceeds the computed pmf");
    if (k == 0) return 1.0;
    double tail = survival;
    for (int j = 1; j < k; ++j) tail -= p[static_cast<std::size_t>(j)];
    return std::max(tail, 0.0);
  }
};

inline PopulationPmf population_pmf(const OffspringSpec& spec, double T, int jmax, const OdeOptions& opt = {}) {
  PgfJet j = semigroup_at(spec, T, UnitPoint::from_value(0), jmax, opt);
  PopulationPmf out;
  out.p = j.jet.coeffs();
  for (auto& x : out.p) x = std::max(x, 0.0);
  out.survival = j.value.complement;
  return out;
}

inline double prob_at_least(const OffspringSpec& spec, double T, int k) {
  OdeOptions opt;
  opt.max_order = std::max(opt.max_order, k);
  return population_pmf(spec, T, std::max(k - 1, 0), opt).at_least(k);
}

}  // namespace gwgen

#endif  // GWGEN_SEMIGROUP_HPP_
