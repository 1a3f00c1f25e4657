#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cdb/multi_index.hpp"

namespace cdb {

/// Affine time map t -> sigma*t + tau used inside kernel arguments,
/// e.g. G(t/2) has sigma = 1/2 and G(t - s/2) at fixed s has tau = -s/2.
/// The mapped time must be positive wherever a term is evaluated.
struct TimeMap {
  double sigma = 1.0;
  double tau = 0.0;
  double operator()(double t) const { return sigma * t + tau; }
  bool is_identity() const { return sigma == 1.0 && tau == 0.0; }
};

/// One term c * t^p * d_t^l grad^alpha G(sigma*t + tau, x) of an expansion.
/// G(t,x) = (4 pi t)^{-n/2} exp(-|x|^2/(4t)).  Time derivatives are reduced
/// to Laplacians (d_t G = Lap G) before evaluation.
struct KernelTerm {
  double coeff = 1.0;
  int t_order = 0;       // count of d_t applications
  MultiIndex alpha;      // spatial derivative counts
  TimeMap time_map;
  double t_power = 0.0;  // extra scalar factor t^p (e.g. the 2 t^{-1/2} pieces)

  int dim() const { return alpha.dim(); }
  int parity() const { return alpha.order() % 2; }  // t_order is parity-neutral
  /// Homogeneity degree d with lambda^d * value(lambda^2 t, lambda x) = value(t, x)
  /// for identity-tau maps: d = n + 2l + |alpha| - 2p.
  double scaling_degree() const {
    return dim() + 2.0 * t_order + alpha.order() - 2.0 * t_power;
  }
};

/// grad^alpha G(t, x) for a single point, via the Hermite recurrence.
double eval_grad_g(int n, const MultiIndex& alpha, double t, std::span<const double> x);

/// Same but without the Gaussian envelope and normalization:
/// returns P(x) with grad^alpha G = (4 pi t)^{-n/2} P(x) exp(-|x|^2/(4t)).
double eval_grad_g_polypart(const MultiIndex& alpha, double t, std::span<const double> x);

/// Full evaluation of a term (after time-derivative reduction) at one point.
/// Throws std::domain_error if the mapped time is not positive.
double eval_kernel_term_point(const KernelTerm& term, double t, std::span<const double> x);

/// Expand d_t^l into Laplacians: returns equivalent terms with t_order = 0.
std::vector<KernelTerm> reduce_time_derivatives(const KernelTerm& term);

/// Apply (a . grad) to each term of a list.
std::vector<KernelTerm> apply_direction_gradient(const std::vector<KernelTerm>& terms,
                                                 const DirectionVector& a);

/// Apply the Laplacian to each term of a list.
std::vector<KernelTerm> apply_laplacian(const std::vector<KernelTerm>& terms);

/// Merge terms with identical (alpha, time_map, t_order, t_power).
std::vector<KernelTerm> combine_terms(std::vector<KernelTerm> terms);

/// Fourier symbol of a term under the convention
/// F[f](xi) = (2 pi)^{-n/2} \int f(x) e^{-i x.xi} dx, so that
/// F[KernelTerm](xi) = c (-|xi|^2)^l (i xi)^alpha (2 pi)^{-n/2} e^{-map(t)|xi|^2}.
/// The t_power factor multiplies as t^p.
std::complex<double> fourier_symbol(const KernelTerm& term, double t,
                                    std::span<const double> xi);

/// The closed convolution identity a.grad G(t-s) * G^2(s) =
/// (8 pi s)^{-n/2} a.grad G(t - s/2); returns the expanded term list
/// (one first-order term per nonzero component of a) with the numeric
/// coefficient folded in.  Requires 0 < s < t.
std::vector<KernelTerm> convolve_selfsquare(double t, double s, const DirectionVector& a,
                                            int n);

/// a.grad G(t-s) * (M1 . grad G^2)(s) = (8 pi s)^{-3/2} (M1.grad)(a.grad) G(t-s/2)
/// for n = 3.  Requires 0 < s < t.
std::vector<KernelTerm> mixed_convolution(double t, double s, const DirectionVector& a,
                                          const std::vector<double>& m1);

}  // namespace cdb
