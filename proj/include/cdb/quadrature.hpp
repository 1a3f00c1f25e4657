#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdb/kernel_term.hpp"
#include "cdb/multi_index.hpp"

namespace cdb {

/// Physicists' Gauss-Hermite rule (weight e^{-x^2}); nodes ascending.
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int m);

/// Gauss-Legendre rule on [-1, 1]; nodes ascending.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m);

/// Inner 1-D time integral factor
///   \int_0^{s_max} s^{s_power} [sum of kernels](t0 - s/2, y) ds
/// appearing inside a spatial integrand.  The endpoint singularity is removed
/// by the substitution s = sigma^2 before quadrature.
struct TimeIntegralFactor {
  double s_max = 1.0;
  double s_power = -0.5;
  double t0 = 1.0;
  std::vector<KernelTerm> kernels;
};

/// Product integrand y^beta * prod_i term_i(t_i, y) [ * inner(y) ] over R^n.
/// All factors carry Gaussian decay by construction.  A sum_factors entry is
/// one multiplicative factor equal to the SUM of its kernels (all sharing one
/// evaluation time), e.g. a whole profile U_m.
struct IntegralSpec {
  int n = 3;
  MultiIndex monomial;
  std::vector<std::pair<KernelTerm, double>> factors;  // (term, absolute time)
  std::vector<std::pair<std::vector<KernelTerm>, double>> sum_factors;
  std::optional<TimeIntegralFactor> inner;
  double tol = 1e-10;
};

struct IntegralResult {
  double value = 0.0;
  double err_est = 0.0;
};

/// Tensor Gauss-Hermite quadrature scaled to the combined Gaussian width of
/// the factor product; err_est from node-count doubling.  Throws
/// std::runtime_error if tol is not met at the maximum node count (256/axis).
IntegralResult integrate(const IntegralSpec& spec);

struct ConstantCheck {
  std::string name;
  double closed_form = 0.0;
  double quadrature = 0.0;
  double rel_err = 0.0;
  bool pass = false;
};

/// Evaluates the fixed table of printed constants against quadrature:
/// the G^2 masses (n = 2, 3, 4), the 3-D tail integral, the six coupled
/// Gaussian integrals, the 1-D integral 14 sqrt(6)/135, and the assembled
/// 2-D/4-D/3-D logarithmic coefficients.
std::vector<ConstantCheck> verify_constant_table(double tolerance = 1e-8);

/// All checks green?
bool constant_table_passes(const std::vector<ConstantCheck>& report);

}  // namespace cdb
