#pragma once

#include <string>
#include <vector>

#include "cdb/field.hpp"
#include "cdb/kernel_term.hpp"
#include "cdb/moment_table.hpp"
#include "cdb/multi_index.hpp"

namespace cdb {

enum class TermKind { PlainKernel, TimeIntegral, LogKernel };

/// One evaluable piece of an asymptotic expansion.
///  PlainKernel : sum of kernels, each c * t^p * grad^a G(sigma t)
///  TimeIntegral: \int_0^t s^{s_power} [sum of kernels](t - s/2, x) ds
///  LogKernel   : like PlainKernel but multiplied by log t at evaluation
struct ProfileTerm {
  TermKind kind = TermKind::PlainKernel;
  int order_m = 0;
  double scale_degree = 0.0;  // n + m
  std::vector<KernelTerm> kernels;
  double s_power = -0.5;
  std::string provenance;
};

/// Ordered list of profile terms for one dimension and data set.
struct ExpansionSpec {
  int n = 3;
  double M0 = 0.0;
  DirectionVector a;
  int max_order = 0;  // highest plain order included
  std::vector<ProfileTerm> terms;
};

/// Evaluate one term at a point.  Time-integral terms use adaptive
/// Gauss-Legendre after the s = sigma^2 endpoint substitution (relative
/// tolerance 1e-12); throws on non-convergence.
double eval_term_point(const ProfileTerm& term, double t, std::span<const double> x);

/// Evaluate one term on a grid (separable axis tables; same quadrature).
void accumulate_term_on_grid(Field& out, const ProfileTerm& term, double t,
                             double scale = 1.0);

/// Pointwise sum of the expansion: orders m <= order_cutoff, log terms only
/// when include_log.  order_cutoff = -1 gives the zero field.
Field eval_expansion(const ExpansionSpec& spec, double t, const Grid& grid,
                     bool include_log, int order_cutoff);

/// Build the theorem expansion for n in {2, 3, 4} from a moment table.
/// Throws if a required st-moment is missing/unconverged, or the
/// (n, max_order) pair is unsupported.
ExpansionSpec build_expansion(int n, const MomentTable& moments, const DirectionVector& a,
                              int max_order);

/// The six coupled 3-D integrals and the assembled scalar of the cubic
/// logarithmic coefficient.
struct K4Assembly {
  double i1, i2, i3, i4, i5, i6;  // closed ingredient values
  double one_d;                   // \int_0^1 s^{-1/2}(2-s/2)^{-7/2} ds
  double assembled;               // scalar in front of Lap (a.grad)^2 G
  double anisotropic_residual;    // (2 i3+i6) - 3(2 i2+i5), must cancel
  double closed_form;             // -sqrt(3)/(2^6 3^3 5 pi^3)
};

/// Recompute the cubic log-coefficient scalar from its closed-form
/// ingredients and the j / (k != j) / j^3 combinatorial assembly.
K4Assembly k4_constant_from_integrals();

/// Synthetic order-m profile with the generic structure
///   sum_{|alpha|=m} c_alpha grad^alpha G + sum_{2l+|beta|=m-1} c_{l,beta}
///   d_t^l grad^beta (a.grad) G
/// and arbitrary nonzero coefficients; parity (-1)^m by construction.
std::vector<KernelTerm> synthetic_um_kernels(int n, int m, const DirectionVector& a);

/// Structure-only expansion skeleton for odd n (orders 0..2n-3).
struct NonlinearSlot {
  int l = 0;
  MultiIndex beta;
  int renorm_cap = -1;  // subtract products with m1+m2 <= cap (-1: none)
  std::vector<std::pair<int, int>> subtraction;  // parity-surviving (m1 <= m2)
};

struct OrderStructure {
  int m = 0;
  double scale_degree = 0.0;  // n + m
  std::vector<MultiIndex> initial_alphas;
  std::vector<NonlinearSlot> slots;  // 2l + |beta| = m - 1
  bool has_jm = false;               // m >= n - 1: time-integral source term J_m
};

struct OddStructure {
  int n = 0;
  std::vector<OrderStructure> orders;
  bool log_coefficient_resolved = false;  // closed form known only for n = 3
};

OddStructure build_odd_n_structure(int n);

/// JSON dump of an expansion: term list with (kind, alpha, coefficient,
/// time_map, provenance).
std::string expansion_to_json(const ExpansionSpec& spec);

}  // namespace cdb
