// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Globally adaptive Gauss-Kronrod (7/15) quadrature and composite
// Gauss-Legendre rules. Node tables come from Boost.Math.

#ifndef GWGEN_QUADRATURE_HPP_
#define GWGEN_QUADRATURE_HPP_

#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gwgen/error.hpp"
#include "gwgen/semigroup.hpp"

namespace gwgen {

struct QuadratureOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  int max_subdivisions = 200;
};

struct QuadratureResult {
  double value = 0;
  double abs_error = 0;
  long evaluations = 0;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    abs_error += o.abs_error;
    evaluations += o.evaluations;
    return *this;
  }
};

namespace detail {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

inline Panel gk15(const std::function<double(double)>& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& x = Kronrod::abscissa();  // x[0] = 0; Gauss nodes are x[0], x[2], x[4], x[6]
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double fc = f(mid);
  double k = wk[0] * fc, g = wg[0] * fc;
  for (std::size_t i = 1; i < x.size(); ++i) {
    double s = f(mid - half * x[i]) + f(mid + half * x[i]);
    k += wk[i] * s;
    if (i % 2 == 0) g += wg[i / 2] * s;
  }
  return {a, b, half * k, std::abs(half * (k - g))};
}

}  // namespace detail

// Integral of f over [a,b]. Throws NumericError if the error estimate is
// still above max(abs_tol, rel_tol*|I|) after max_subdivisions panels.
inline QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& opt = {}) {
  require(a <= b, "interval-ordered", "need a <= b");
  QuadratureResult r;
  if (a == b) return r;
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gk15(f, a, b));
  r.evaluations = 15;
  double value = panels.top().value, error = panels.top().error;
  while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
    if (static_cast<int>(panels.size()) >= opt.max_subdivisions) {
      throw NumericError("quadrature did not converge: error " + std::to_string(error) + " on value " +
                         std::to_string(value) + " after " + std::to_string(panels.size()) + " panels");
    }
    detail::Panel worst = panels.top();
    panels.pop();
    const double m = 0.5 * (worst.a + worst.b);
    detail::Panel left = detail::gk15(f, worst.a, m), right = detail::gk15(f, m, worst.b);
    r.evaluations += 30;
    panels.push(left);
    panels.push(right);
    // Re-sum rather than update incrementally, to avoid drift.
    value = error = 0;
    auto copy = panels;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
  }
  r.value = value;
  r.abs_error = error;
  return r;
}

// Integral of g over [0, inf) via v = x / (1 - x).
inline QuadratureResult integrate_half_line(const std::function<double(double)>& g,
                                            const QuadratureOptions& opt = {}) {
  return integrate(
      [&](double x) {
        const double om = 1 - x;
        return g(x / om) / (om * om);
      },
      0.0, 1.0, opt);
}

// Integral over s in [0,1] of f(s), where f receives s together with 1 - s.
// `scale` is the width of the region near s = 1 that carries the mass (for
// pgf derivatives at horizon T, about P(N_T > 0) / E[N_T]). When it is small
// the part s > 1/2 is integrated in y = -log(2(1 - s)), so the
// concentration near 1 is resolved.
inline QuadratureResult integrate_unit(const std::function<double(UnitPoint)>& f, const QuadratureOptions& opt = {},
                                       double scale = 1.0) {
  if (scale >= 0.05) {
    return integrate([&](double s) { return f(UnitPoint::from_value(s)); }, 0.0, 1.0, opt);
  }
  QuadratureResult lo = integrate([&](double s) { return f(UnitPoint::from_value(s)); }, 0.0, 0.5, opt);
  QuadratureResult hi = integrate_half_line(
      [&](double y) {
        const double w = 0.5 * std::exp(-y);
        return w == 0 ? 0.0 : f(UnitPoint::from_complement(w)) * w;
      },
      opt);
  return lo += hi;
}

// Composite Gauss-Legendre rule: `panels` equal panels of `Points` nodes.
template <unsigned Points = 10>
class CompositeGauss {
 public:
  CompositeGauss(double a, double b, int panels) {
    using Rule = boost::math::quadrature::gauss<double, Points>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * width, half = 0.5 * width;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) {
          nodes_.push_back(mid);
          weights_.push_back(half * w[i]);
          continue;
        }
        nodes_.push_back(mid - half * x[i]);
        weights_.push_back(half * w[i]);
        nodes_.push_back(mid + half * x[i]);
        weights_.push_back(half * w[i]);
      }
    }
  }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> nodes_, weights_;
};

}  // namespace gwgen

#endif  // GWGEN_QUADRATURE_HPP_
