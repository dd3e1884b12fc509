// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Offspring laws and their probability generating function f(s) = E[s^L].
//
// Spec strings: "bd:ALPHA,BETA" (f = alpha + beta s^2), "geom:P"
// (P(L=j) = P (1-P)^j), "pmf:J:PJ,J:PJ,...".

#ifndef GWGEN_OFFSPRING_HPP_
#define GWGEN_OFFSPRING_HPP_

#include <charconv>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gwgen/error.hpp"
#include "gwgen/jet.hpp"
#include "gwgen/partitions.hpp"

namespace gwgen {

enum class OffspringKind { kFinitePmf, kBirthDeath, kGeometric };

namespace detail {

inline std::string format_real(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view s) {
  std::string t = trim(s);
  double v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  require(!t.empty() && res.ec == std::errc() && res.ptr == t.data() + t.size(), "real-syntax",
          "bad number '" + t + "'");
  return v;
}

}  // namespace detail

class OffspringSpec {
 public:
  static OffspringSpec finite_pmf(std::vector<double> pmf) {
    return OffspringSpec(OffspringKind::kFinitePmf, std::move(pmf), 0);
  }
  // f(s) = alpha + beta s^2 with alpha + beta = 1.
  static OffspringSpec birth_death(double alpha, double beta) {
    require(alpha >= 0 && beta >= 0 && std::abs(alpha + beta - 1) <= 1e-12, "birth-death-normalized",
            "need alpha, beta >= 0 and alpha + beta = 1");
    OffspringSpec s(OffspringKind::kBirthDeath, {alpha, 0.0, beta}, 0);
    s.alpha_ = alpha;
    s.beta_ = beta;
    return s;
  }
  static OffspringSpec geometric(double p) {
    require(p > 0 && p < 1, "geometric-parameter", "p must lie in (0,1)");
    return OffspringSpec(OffspringKind::kGeometric, {}, p);
  }

  static OffspringSpec parse(std::string_view text) {
    auto colon = text.find(':');
    require(colon != std::string_view::npos, "spec-syntax", "expected KIND:PARAMS, got '" + std::string(text) + "'");
    std::string kind = detail::trim(text.substr(0, colon));
    std::string_view rest = text.substr(colon + 1);
    if (kind == "bd") {
      auto parts = detail::split(rest, ',');
      require(parts.size() == 2, "spec-syntax", "bd needs two numbers");
      return birth_death(detail::parse_real(parts[0]), detail::parse_real(parts[1]));
    }
    if (kind == "geom") return geometric(detail::parse_real(rest));
    if (kind == "pmf") {
      std::vector<double> p;
      for (const auto& item : detail::split(rest, ',')) {
        auto c = item.find(':');
        require(c != std::string::npos, "spec-syntax", "pmf entries are J:P");
        int j = detail::parse_int(detail::trim(item.substr(0, c)));
        require(j >= 0 && j <= 1000, "spec-syntax", "offspring count out of range");
        if (static_cast<int>(p.size()) <= j) p.resize(static_cast<std::size_t>(j) + 1, 0.0);
        require(p[j] == 0.0, "spec-syntax", "offspring count listed twice");
        p[j] = detail::parse_real(item.substr(c + 1));
      }
      return finite_pmf(std::move(p));
    }
    throw PreconditionError("spec-syntax", "unknown offspring kind '" + kind + "'");
  }

  OffspringKind kind() const { return kind_; }
  double mean() const { return mean_; }
  double second_factorial_moment() const { return f2_; }
  double extinction_probability() const { return q_; }
  // Largest offspring count with positive mass; -1 when unbounded.
  int max_offspring() const { return kind_ == OffspringKind::kGeometric ? -1 : static_cast<int>(pmf_.size()) - 1; }
  bool binary() const { return max_offspring() >= 0 && max_offspring() <= 2; }
  double geometric_p() const { return p_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  double pmf(int j) const {
    if (j < 0) return 0;
    if (kind_ == OffspringKind::kGeometric) return p_ * std::pow(1 - p_, j);
    return j < static_cast<int>(pmf_.size()) ? pmf_[static_cast<std::size_t>(j)] : 0.0;
  }
  // Finite-support probabilities (empty for geometric).
  const std::vector<double>& pmf_table() const { return pmf_; }

  double pgf(double s) const { return derivative(0, s); }

  // f^(r)(x).
  double derivative(int r, double x) const {
    if (kind_ == OffspringKind::kGeometric) {
      const double a = 1 - p_;
      double v = p_ / (1 - a * x);
      for (int i = 1; i <= r; ++i) v *= i * a / (1 - a * x);
      return v;
    }
    double acc = 0;
    for (std::size_t j = pmf_.size(); j-- > static_cast<std::size_t>(r);) {
      double ff = 1;
      for (int i = 0; i < r; ++i) ff *= static_cast<double>(j - i);
      acc = acc * x + ff * pmf_[j];
    }
    return acc;
  }

  template <typename Real>
  TaylorJet<Real> pgf_on_jet(const TaylorJet<Real>& x) const {
    if (kind_ == OffspringKind::kGeometric) {
      TaylorJet<Real> num = TaylorJet<Real>::constant(x.center(), Real(p_), x.order());
      return num / (Real(1) - Real(1 - p_) * x);
    }
    std::vector<Real> p(pmf_.begin(), pmf_.end());
    return evaluate_polynomial<Real>(p, x);
  }

  // Complement map psi(w) = 1 - f(1 - w), applied to the series `w` of a
  // jet; writes the series of psi(w) to `out`. Keeps relative accuracy for
  // w near 0, where f(1-w) rounds to 1.
  template <typename Real>
  void complement_on_series(std::span<const Real> w, std::span<Real> out, std::vector<Real>& scratch) const {
    using J = TaylorJet<Real>;
    const std::size_t n = w.size();
    scratch.resize(2 * n);
    std::span<Real> u(scratch.data(), n), tmp(scratch.data() + n, n);
    if (kind_ == OffspringKind::kGeometric) {
      // psi(w) = a w / (p + a w).
      const Real a = Real(1) - Real(p_);
      for (std::size_t i = 0; i < n; ++i) u[i] = a * w[i];
      std::copy(u.begin(), u.end(), tmp.begin());
      tmp[0] += Real(p_);
      J::series_div(u, tmp, out);
      return;
    }
    if (w[0] < Real(0.5)) {
      // Expanded polynomial sum_r a_r w^r.
      const auto& a = psi_coeffs_;
      std::fill(out.begin(), out.end(), Real(0));
      out[0] = Real(a.back());
      for (std::size_t r = a.size() - 1; r-- > 0;) {
        J::series_mul(out, w, tmp);
        std::copy(tmp.begin(), tmp.end(), out.begin());
        out[0] += Real(a[r]);
      }
      return;
    }
    // 1 - f(1 - w) by Horner in u = 1 - w; f(1 - w) <= f(1/2) < 1 here.
    for (std::size_t i = 0; i < n; ++i) u[i] = -w[i];
    u[0] += Real(1);
    std::fill(out.begin(), out.end(), Real(0));
    out[0] = Real(pmf_.back());
    for (std::size_t j = pmf_.size() - 1; j-- > 0;) {
      J::series_mul(out, u, tmp);
      std::copy(tmp.begin(), tmp.end(), out.begin());
      out[0] += Real(pmf_[j]);
    }
    for (auto& x : out) x = -x;
    out[0] += Real(1);
  }

  const std::string& to_string() const { return text_; }

 private:
  OffspringSpec(OffspringKind kind, std::vector<double> probs, double p) : kind_(kind), pmf_(std::move(probs)), p_(p) {
    if (kind_ == OffspringKind::kGeometric) {
      mean_ = (1 - p_) / p_;
      f2_ = 2 * (1 - p_) * (1 - p_) / (p_ * p_);
      text_ = "geom:" + detail::format_real(p_);
    } else {
      require(!pmf_.empty(), "pmf-normalized", "empty pmf");
      double total = 0;
      for (double x : pmf_) {
        require(x >= 0 && std::isfinite(x), "pmf-nonnegative", "negative or non-finite probability");
        total += x;
      }
      require(std::abs(total - 1) <= 1e-9, "pmf-normalized",
              "probabilities sum to " + detail::format_real(total));
      for (auto& x : pmf_) x /= total;
      while (pmf_.size() > 1 && pmf_.back() == 0) pmf_.pop_back();
      mean_ = f2_ = 0;
      for (std::size_t j = 0; j < pmf_.size(); ++j) {
        mean_ += static_cast<double>(j) * pmf_[j];
        f2_ += static_cast<double>(j) * (static_cast<double>(j) - 1) * pmf_[j];
      }
      if (kind_ == OffspringKind::kBirthDeath) {
        text_ = "bd:" + detail::format_real(pmf_[0]) + "," + detail::format_real(pmf(2));
      } else {
        text_ = "pmf:";
        bool first = true;
        for (std::size_t j = 0; j < pmf_.size(); ++j) {
          if (pmf_[j] == 0) continue;
          if (!first) text_ += ",";
          first = false;
          text_ += std::to_string(j) + ":" + detail::format_real(pmf_[j]);
        }
      }
      // a_r = -(-1)^r sum_j C(j,r) p_j; every term of the sum has one sign.
      psi_coeffs_.assign(pmf_.size(), 0.0);
      for (std::size_t r = 1; r < pmf_.size(); ++r) {
        double s = 0;
        for (std::size_t j = r; j < pmf_.size(); ++j) {
          double c = 1;
          for (std::size_t i = 0; i < r; ++i) c = c * static_cast<double>(j - i) / static_cast<double>(i + 1);
          s += c * pmf_[j];
        }
        psi_coeffs_[r] = (r % 2 == 1) ? s : -s;
      }
    }
    require(f2_ > 0, "non-triviality", "f''(1) must be > 0 (some mass on two or more offspring)");
    q_ = solve_extinction();
  }

  double solve_extinction() const {
    if (mean_ <= 1) return 1.0;
    if (pmf(0) == 0) return 0.0;
    auto g = [&](double s) { return pgf(s) - s; };
    // g(0) > 0, g convex, g < 0 just below 1 since g'(1) = m - 1 > 0.
    double lo = 0, hi = 0.5;
    for (double h = 0.5; g(hi) >= 0 && h > 1e-15; h *= 0.5) hi = 1 - h;
    while (hi - lo > 1e-6) {
      double mid = 0.5 * (lo + hi);
      (g(mid) > 0 ? lo : hi) = mid;
    }
    double s = lo;
    for (int it = 0; it < 50; ++it) {
      double step = g(s) / (derivative(1, s) - 1);
      s -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return s;
  }

  OffspringKind kind_;
  std::vector<double> pmf_;
  std::vector<double> psi_coeffs_;
  double p_ = 0;
  double alpha_ = 0, beta_ = 0;
  double mean_ = 0, f2_ = 0, q_ = 1;
  std::string text_;
};

}  // namespace gwgen

#endif  // GWGEN_OFFSPRING_HPP_
