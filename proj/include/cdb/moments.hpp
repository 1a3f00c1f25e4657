#pragma once

#include <string>
#include <vector>

#include "cdb/expansion.hpp"
#include "cdb/field.hpp"
#include "cdb/moment_table.hpp"
#include "cdb/solver.hpp"

namespace cdb {

/// Initial-data moments \int (-y)^alpha u0 dy for |alpha| <= max_order by the
/// rectangle rule, with a refinement error estimate per entry.  Throws if u0
/// does not decay below 1e-12 (relative) at the box boundary.
MomentTable initial_moments(const Field& u0, int max_order);
double initial_moment_error(const MomentTable& t, const MultiIndex& alpha);

/// Closed-form structure of one subtraction product: the weighted moment
///   (-s)^l \int (-y)^beta (U_{m1} U_{m2})(s, y) dy = C * s^rho
/// (exact by parabolic homogeneity; C evaluated at s = 1).
struct PowerMoment {
  double C = 0.0;
  double rho = 0.0;
  bool parity_zero = false;
};

/// Products with m1 + m2 <= 2 are supported; profiles (built expansion)
/// required when U_2 enters.
PowerMoment profile_product_moment_power(int n, int l, const MultiIndex& beta, int m1,
                                         int m2, double M0, const std::vector<double>& M1,
                                         const ExpansionSpec* profiles);

/// The analytic space-time moment of a single profile product over s in
/// (0, inf): a pure power, hence divergent unless parity forces zero.
StMomentEntry analytic_profile_product_st_moment(int n, int l, const MultiIndex& beta,
                                                 int m1, int m2, double M0,
                                                 const std::vector<double>& M1,
                                                 const ExpansionSpec* profiles);

struct StSeriesPoint {
  double s = 0.0;
  double value = 0.0;  // renormalized integrand (-s)^l [moment(u^2) - moment(subtraction)]
};

struct StMomentComputation {
  StMomentEntry entry;
  std::vector<StSeriesPoint> integrand;  // at checkpoint times s > 0
  double fitted_decay = 0.0;             // fitted s-exponent of |integrand|, late window
};

/// Renormalized space-time moment
///   \int_0^inf \int (-s)^l (-y)^beta (u^2 - sum_{m1+m2<=k} U_{m1}U_{m2}) dy ds
/// by trapezoid/power-law panels over the run checkpoints with exact handling
/// of the subtraction powers near s = 0 and a fitted-rate tail.  The entry is
/// converged only if the fitted integrand decay is <= -(1 + delta).
StMomentComputation renormalized_st_moment(const SolutionRun& run, int l,
                                           const MultiIndex& beta, int renorm_level,
                                           double M0, const std::vector<double>& M1,
                                           const ExpansionSpec* profiles = nullptr,
                                           double delta = 0.05);

/// Full table for the theorem expansion of the run's dimension: initial
/// moments, the corrected first moment, and the required st entries.
MomentTable compute_moment_table(const SolutionRun& run, int max_alpha_order);

/// Least-squares decay exponent of log|v| vs log s over [s_min, s_max].
double fit_series_exponent(const std::vector<StSeriesPoint>& series, double s_min,
                           double s_max);

/// Cumulative I(t_i) = \int_0^{t_i} \int u^2 dy ds at the run checkpoints
/// (power-law panels between checkpoints).
std::vector<StSeriesPoint> cumulative_mass_integral(const SolutionRun& run);

/// CSV: l, beta, renorm_level, value, tail_bound, converged.
void write_moments_csv(const MomentTable& table, const std::string& path);

}  // namespace cdb
