#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cdb/kernel_term.hpp"
#include "cdb/multi_index.hpp"

namespace cdb {

/// Exact representation of P(x) * exp(-B |x|^2) with P a sparse multivariate
/// polynomial.  Products of heat-kernel derivative factors stay in this class,
/// so their spatial moments have closed forms.
class GaussianPoly {
 public:
  GaussianPoly(int n, double B) : n_(n), B_(B) {}

  int dim() const { return n_; }
  double exponent() const { return B_; }
  const std::map<MultiIndex, double>& poly() const { return c_; }

  void add_monomial(const MultiIndex& m, double coeff) {
    if (coeff == 0.0) return;
    auto [it, fresh] = c_.emplace(m, coeff);
    if (!fresh) it->second += coeff;
  }

  GaussianPoly operator*(const GaussianPoly& o) const {
    if (o.n_ != n_) throw std::invalid_argument("GaussianPoly: dimension mismatch");
    GaussianPoly out(n_, B_ + o.B_);
    for (const auto& [ma, ca] : c_)
      for (const auto& [mb, cb] : o.c_) {
        MultiIndex m(n_);
        for (int j = 0; j < n_; ++j) m[j] = ma[j] + mb[j];
        out.add_monomial(m, ca * cb);
      }
    return out;
  }

  GaussianPoly& scale(double f) {
    for (auto& [m, c] : c_) c *= f;
    return *this;
  }

  /// One factor grad^alpha G(tau, .) expanded exactly into monomials:
  /// grad^alpha G = (4 pi tau)^{-n/2} * P_alpha(x) * exp(-|x|^2/(4 tau)).
  static GaussianPoly from_kernel(const MultiIndex& alpha, double tau) {
    if (tau <= 0.0) throw std::domain_error("GaussianPoly::from_kernel: tau <= 0");
    const int n = alpha.dim();
    GaussianPoly out(n, 1.0 / (4.0 * tau));
    const double amp = std::pow(4.0 * std::numbers::pi * tau, -0.5 * n);
    // 1-D Hermite factors h_k(x) = (-r)^k H_k(r x), r = 1/(2 sqrt(tau)),
    // expanded in powers of x via the recurrence.
    const double r = 1.0 / (2.0 * std::sqrt(tau));
    std::vector<std::vector<double>> h_of_axis(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const int k = alpha[j];
      if (k == 0) {
        h_of_axis[static_cast<std::size_t>(j)] = {1.0};
        continue;
      }
      std::vector<double> hm1{1.0}, h{0.0, 2.0 * r};  // H_0(rx), H_1(rx)
      for (int q = 1; q < k; ++q) {
        std::vector<double> hp(h.size() + 1, 0.0);
        for (std::size_t i = 0; i < h.size(); ++i) hp[i + 1] += 2.0 * r * h[i];
        for (std::size_t i = 0; i < hm1.size(); ++i) hp[i] -= 2.0 * q * hm1[i];
        hm1 = std::move(h);
        h = std::move(hp);
      }
      double sr = 1.0;
      for (int q = 0; q < k; ++q) sr *= -r;
      for (auto& v : h) v *= sr;
      h_of_axis[static_cast<std::size_t>(j)] = h;
    }
    // tensor the axis polynomials
    std::vector<std::pair<MultiIndex, double>> acc{{MultiIndex(n), amp}};
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<MultiIndex, double>> next;
      const auto& hj = h_of_axis[static_cast<std::size_t>(j)];
      for (const auto& [mi, cv] : acc)
        for (std::size_t p = 0; p < hj.size(); ++p) {
          if (hj[p] == 0.0) continue;
          next.emplace_back(mi.plus(j, static_cast<int>(p)), cv * hj[p]);
        }
      acc = std::move(next);
    }
    for (const auto& [mi, cv] : acc) out.add_monomial(mi, cv);
    return out;
  }

  /// Kernel term (time derivatives reduced) at absolute time t, coefficient
  /// and t^p factor folded in.  Sum of reduced pieces.
  static GaussianPoly from_term(const KernelTerm& term, double t) {
    const double tm = term.time_map(t);
    GaussianPoly out(term.dim(), 1.0 / (4.0 * tm));
    const double tp = (term.t_power == 0.0) ? 1.0 : std::pow(t, term.t_power);
    for (const auto& r : reduce_time_derivatives(term)) {
      GaussianPoly g = from_kernel(r.alpha, tm);
      g.scale(r.coeff * tp);
      for (const auto& [m, c] : g.c_) out.add_monomial(m, c);
    }
    return out;
  }

  /// Exact moment \int x^beta P(x) exp(-B|x|^2) dx over R^n.
  double moment(const MultiIndex& beta) const {
    double total = 0.0;
    for (const auto& [m, c] : c_) {
      double v = c;
      bool zero = false;
      for (int j = 0; j < n_; ++j) {
        const int k = m[j] + beta[j];
        if (k % 2 == 1) {
          zero = true;
          break;
        }
        v *= gauss_moment_1d(k);
      }
      if (!zero) total += v;
    }
    return total;
  }

  double mass() const { return moment(MultiIndex(n_)); }

 private:
  // \int x^k exp(-B x^2) dx = (k-1)!! (2B)^{-k/2} sqrt(pi/B) for even k.
  double gauss_moment_1d(int k) const {
    double v = std::sqrt(std::numbers::pi / B_);
    for (int m = k; m >= 2; m -= 2) v *= (m - 1) / (2.0 * B_);
    return v;
  }

  int n_;
  double B_;
  std::map<MultiIndex, double> c_;
};

}  // namespace cdb
