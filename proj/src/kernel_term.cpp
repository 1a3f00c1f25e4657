#include "cdb/kernel_term.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace cdb {

namespace {

// Product over axes of (-r)^k H_k(r x_j), r = 1/(2 sqrt(t)), physicists' Hermite.
// This is the polynomial factor of grad^alpha applied to exp(-|x|^2/(4t)).
double hermite_product(const MultiIndex& alpha, double t, std::span<const double> x) {
  const double r = 1.0 / (2.0 * std::sqrt(t));
  double prod = 1.0;
  for (int j = 0; j < alpha.dim(); ++j) {
    const int k = alpha[j];
    if (k == 0) continue;
    const double z = r * x[static_cast<std::size_t>(j)];
    double hkm1 = 1.0, hk = 2.0 * z;  // H_0, H_1
    for (int m = 1; m < k; ++m) {
      const double hkp1 = 2.0 * z * hk - 2.0 * m * hkm1;
      hkm1 = hk;
      hk = hkp1;
    }
    const double h = (k == 0) ? 1.0 : hk;
    double sign_r = 1.0;
    for (int m = 0; m < k; ++m) sign_r *= -r;
    prod *= sign_r * h;
  }
  return prod;
}

}  // namespace

double eval_grad_g_polypart(const MultiIndex& alpha, double t, std::span<const double> x) {
  return hermite_product(alpha, t, x);
}

double eval_grad_g(int n, const MultiIndex& alpha, double t, std::span<const double> x) {
  if (t <= 0.0) throw std::domain_error("eval_grad_g: non-positive time");
  if (alpha.dim() != n || static_cast<int>(x.size()) != n)
    throw std::invalid_argument("eval_grad_g: dimension mismatch");
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  const double g = std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * std::exp(-r2 / (4.0 * t));
  return g * hermite_product(alpha, t, x);
}

std::vector<KernelTerm> reduce_time_derivatives(const KernelTerm& term) {
  std::vector<KernelTerm> out{term};
  out[0].t_order = 0;
  for (int l = 0; l < term.t_order; ++l) out = apply_laplacian(out);
  return combine_terms(std::move(out));
}

std::vector<KernelTerm> apply_direction_gradient(const std::vector<KernelTerm>& terms,
                                                 const DirectionVector& a) {
  std::vector<KernelTerm> out;
  for (const auto& t : terms) {
    if (a.dim() != t.dim())
      throw std::invalid_argument("apply_direction_gradient: dimension mismatch");
    for (int j = 0; j < a.dim(); ++j) {
      if (a[j] == 0.0) continue;
      KernelTerm nt = t;
      nt.coeff *= a[j];
      nt.alpha = t.alpha.plus(j);
      out.push_back(nt);
    }
  }
  return combine_terms(std::move(out));
}

std::vector<KernelTerm> apply_laplacian(const std::vector<KernelTerm>& terms) {
  std::vector<KernelTerm> out;
  for (const auto& t : terms)
    for (int j = 0; j < t.dim(); ++j) {
      KernelTerm nt = t;
      nt.alpha = t.alpha.plus(j, 2);
      out.push_back(nt);
    }
  return combine_terms(std::move(out));
}

std::vector<KernelTerm> combine_terms(std::vector<KernelTerm> terms) {
  using Key = std::tuple<std::vector<int>, int, double, double, double>;
  std::map<Key, KernelTerm> acc;
  for (auto& t : terms) {
    std::vector<int> av(static_cast<std::size_t>(t.dim()));
    for (int j = 0; j < t.dim(); ++j) av[static_cast<std::size_t>(j)] = t.alpha[j];
    Key k{av, t.t_order, t.time_map.sigma, t.time_map.tau, t.t_power};
    auto it = acc.find(k);
    if (it == acc.end())
      acc.emplace(std::move(k), t);
    else
      it->second.coeff += t.coeff;
  }
  std::vector<KernelTerm> out;
  out.reserve(acc.size());
  for (auto& [k, v] : acc)
    if (v.coeff != 0.0) out.push_back(v);
  return out;
}

double eval_kernel_term_point(const KernelTerm& term, double t, std::span<const double> x) {
  const double tm = term.time_map(t);
  if (tm <= 0.0) throw std::domain_error("eval_kernel_term_point: non-positive mapped time");
  double sum = 0.0;
  if (term.t_order == 0) {
    sum = term.coeff * eval_grad_g(term.dim(), term.alpha, tm, x);
  } else {
    for (const auto& r : reduce_time_derivatives(term))
      sum += r.coeff * eval_grad_g(r.dim(), r.alpha, tm, x);
  }
  const double tp = (term.t_power == 0.0) ? 1.0 : std::pow(t, term.t_power);
  return tp * sum;
}

std::complex<double> fourier_symbol(const KernelTerm& term, double t,
                                    std::span<const double> xi) {
  const int n = term.dim();
  if (static_cast<int>(xi.size()) != n)
    throw std::invalid_argument("fourier_symbol: dimension mismatch");
  double xi2 = 0.0;
  for (double v : xi) xi2 += v * v;
  std::complex<double> sym = term.coeff;
  for (int l = 0; l < term.t_order; ++l) sym *= -xi2;
  const std::complex<double> i(0.0, 1.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < term.alpha[j]; ++k) sym *= i * xi[static_cast<std::size_t>(j)];
  const double tm = term.time_map(t);
  sym *= std::pow(2.0 * std::numbers::pi, -0.5 * n) * std::exp(-tm * xi2);
  if (term.t_power != 0.0) sym *= std::pow(t, term.t_power);
  return sym;
}

std::vector<KernelTerm> convolve_selfsquare(double t, double s, const DirectionVector& a,
                                            int n) {
  if (!(s > 0.0 && s < t)) throw std::domain_error("convolve_selfsquare: need 0 < s < t");
  const double c = std::pow(8.0 * std::numbers::pi * s, -0.5 * n);
  KernelTerm base;
  base.coeff = c;
  base.alpha = MultiIndex(n);
  base.time_map = TimeMap{1.0, -0.5 * s};
  return apply_direction_gradient({base}, a);
}

std::vector<KernelTerm> mixed_convolution(double t, double s, const DirectionVector& a,
                                          const std::vector<double>& m1) {
  if (!(s > 0.0 && s < t)) throw std::domain_error("mixed_convolution: need 0 < s < t");
  if (a.dim() != 3 || m1.size() != 3)
    throw std::invalid_argument("mixed_convolution: n = 3 only");
  const double c = std::pow(8.0 * std::numbers::pi * s, -1.5);
  KernelTerm base;
  base.coeff = c;
  base.alpha = MultiIndex(3);
  base.time_map = TimeMap{1.0, -0.5 * s};
  auto terms = apply_direction_gradient({base}, a);
  return apply_direction_gradient(terms, DirectionVector{std::vector<double>(m1)});
}

}  // namespace cdb
