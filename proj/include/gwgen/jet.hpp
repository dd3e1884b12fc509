// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Truncated Taylor series ("jets"): c_r = g^(r)(center) / r!, r = 0..order.

#ifndef GWGEN_JET_HPP_
#define GWGEN_JET_HPP_

#include <algorithm>
#include <cassert>
#include <cmath>
#include <span>
#include <vector>

#include "gwgen/error.hpp"

namespace gwgen {

template <typename Real = double>
class TaylorJet {
 public:
  TaylorJet() : TaylorJet(0, 0) {}
  TaylorJet(Real center, int order) : center_(center), c_(static_cast<std::size_t>(order) + 1, Real(0)) {
    require(order >= 0, "jet-order", "negative order");
  }
  TaylorJet(Real center, std::vector<Real> coeffs) : center_(center), c_(std::move(coeffs)) {
    require(!c_.empty(), "jet-order", "empty coefficient list");
  }

  static TaylorJet constant(Real center, Real value, int order) {
    TaylorJet j(center, order);
    j.c_[0] = value;
    return j;
  }
  // The independent variable x itself, expanded at `center`.
  static TaylorJet variable(Real center, int order) {
    TaylorJet j(center, order);
    j.c_[0] = center;
    if (order >= 1) j.c_[1] = 1;
    return j;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  Real center() const { return center_; }
  Real value() const { return c_[0]; }
  Real operator[](int r) const { return c_[static_cast<std::size_t>(r)]; }
  Real& operator[](int r) { return c_[static_cast<std::size_t>(r)]; }
  const std::vector<Real>& coeffs() const { return c_; }
  std::vector<Real>& coeffs() { return c_; }

  // g^(r)(center) = r! c_r.
  Real derivative(int r) const {
    require(r >= 0 && r <= order(), "jet-order", "derivative order exceeds jet order");
    Real f = 1;
    for (int i = 2; i <= r; ++i) f *= i;
    return f * c_[static_cast<std::size_t>(r)];
  }

  TaylorJet truncated(int order) const {
    TaylorJet j(center_, std::min(order, this->order()));
    std::copy_n(c_.begin(), j.c_.size(), j.c_.begin());
    if (order > this->order()) j.c_.resize(static_cast<std::size_t>(order) + 1, Real(0));
    return j;
  }

  // Jet of g^(r)/r! at the same center, truncated to `order`: coefficient i is
  // C(r+i, r) c_{r+i}.
  TaylorJet shifted(int r, int order) const {
    require(r + order <= this->order(), "jet-order", "shift needs a higher-order jet");
    TaylorJet j(center_, order);
    for (int i = 0; i <= order; ++i) {
      Real binom = 1;
      for (int a = 1; a <= r; ++a) binom = binom * Real(i + a) / Real(a);
      j.c_[static_cast<std::size_t>(i)] = binom * c_[static_cast<std::size_t>(r + i)];
    }
    return j;
  }

  TaylorJet& operator+=(const TaylorJet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  TaylorJet& operator-=(const TaylorJet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  TaylorJet& operator*=(Real a) {
    for (auto& x : c_) x *= a;
    return *this;
  }
  TaylorJet& operator+=(Real a) {
    c_[0] += a;
    return *this;
  }

  friend TaylorJet operator+(TaylorJet a, const TaylorJet& b) { return a += b; }
  friend TaylorJet operator-(TaylorJet a, const TaylorJet& b) { return a -= b; }
  friend TaylorJet operator*(TaylorJet a, Real b) { return a *= b; }
  friend TaylorJet operator*(Real b, TaylorJet a) { return a *= b; }
  friend TaylorJet operator+(TaylorJet a, Real b) { return a += b; }
  friend TaylorJet operator+(Real b, TaylorJet a) { return a += b; }
  friend TaylorJet operator-(Real b, TaylorJet a) {
    a *= Real(-1);
    return a += b;
  }

  friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
    a.check_compatible(b);
    TaylorJet out(a.center_, a.order());
    series_mul(a.c_, b.c_, out.c_);
    return out;
  }
  friend TaylorJet operator/(const TaylorJet& a, const TaylorJet& b) {
    a.check_compatible(b);
    TaylorJet out(a.center_, a.order());
    series_div(a.c_, b.c_, out.c_);
    return out;
  }

  // Raw coefficient kernels, reusable on preallocated buffers. `out` must not
  // alias the inputs.
  static void series_mul(std::span<const Real> a, std::span<const Real> b, std::span<Real> out) {
    const std::size_t n = out.size();
    for (std::size_t r = 0; r < n; ++r) {
      Real s = 0;
      for (std::size_t i = 0; i <= r; ++i) s += a[i] * b[r - i];
      out[r] = s;
    }
  }
  static void series_div(std::span<const Real> a, std::span<const Real> b, std::span<Real> out) {
    require(b[0] != Real(0), "jet-division", "division by a jet with zero value");
    const std::size_t n = out.size();
    for (std::size_t r = 0; r < n; ++r) {
      Real s = a[r];
      for (std::size_t i = 1; i <= r; ++i) s -= b[i] * out[r - i];
      out[r] = s / b[0];
    }
  }

 private:
  void check_compatible(const TaylorJet& o) const {
    require(o.order() == order(), "jet-order", "order mismatch");
  }

  Real center_;
  std::vector<Real> c_;
};

// Horner evaluation of sum_j p[j] x^j on a jet.
template <typename Real>
TaylorJet<Real> evaluate_polynomial(std::span<const Real> p, const TaylorJet<Real>& x) {
  TaylorJet<Real> acc = TaylorJet<Real>::constant(x.center(), p.empty() ? Real(0) : p.back(), x.order());
  for (std::size_t j = p.size(); j-- > 1;) {
    acc = acc * x;
    acc[0] += p[j - 1];
  }
  return acc;
}

// Composition outer(inner): `outer` is the jet of g at inner.value(), `inner`
// the jet of h at x; returns the jet of g o h at x, order = inner.order().
template <typename Real>
TaylorJet<Real> compose(const TaylorJet<Real>& outer, const TaylorJet<Real>& inner) {
  const int d = inner.order();
  require(outer.order() >= d, "jet-order", "outer jet order below inner order");
  // Horner in the increment h - h(x), whose jet has zero constant term.
  TaylorJet<Real> dh = inner;
  dh[0] = 0;
  TaylorJet<Real> acc = TaylorJet<Real>::constant(inner.center(), outer[d], d);
  for (int r = d; r-- > 0;) {
    acc = acc * dh;
    acc[0] += outer[r];
  }
  return acc;
}

}  // namespace gwgen

#endif  // GWGEN_JET_HPP_
