#pragma once

#include <string>
#include <vector>

#include "cdb/expansion.hpp"
#include "cdb/solver.hpp"

namespace cdb {

/// gamma_q = (n/2)(1 - 1/q); q = 0 encodes q = infinity.
double gamma_q(int n, int q);

/// Double fit of a decay series: log|r| = c - p log t (plain) and
/// log|r| = c - p log t + log log t (fixed unit log factor).
struct FitResult {
  double p_plain = 0.0, c_plain = 0.0, resid_plain = 0.0;
  double p_log = 0.0, c_log = 0.0, resid_log = 0.0;
  bool prefer_log = false;
  int points = 0;
  double preferred_exponent() const { return prefer_log ? p_log : p_plain; }
};

/// Least squares on the samples with t >= t_min; requires >= 5 usable points
/// and positive norms (throws otherwise).  Samples with t <= 1.05 are skipped
/// since the log-corrected model needs log log t.
FitResult fit_rates(const std::vector<std::pair<double, double>>& series,
                    double t_min = 8.0);

/// u(t) - sum_{m <= cutoff} U_m(t) [- K log t term when include_log], on the
/// checkpoint's own grid.  cutoff = -1 subtracts nothing.
Field remainder(const SolutionRun& run, const ExpansionSpec& spec, double t, int cutoff,
                bool include_log);

struct DecayVerdict {
  std::string claim;
  int q = 0;  // 0 = inf
  double predicted = 0.0;
  double fitted = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string model;  // "plain" or "log"
};

struct QSeries {
  int q = 0;
  std::vector<std::pair<double, double>> series;
  FitResult fit;
};

struct DecayReport {
  int n = 0;
  int cutoff = 0;
  bool include_log = false;
  double t_min = 8.0;
  std::vector<QSeries> fits;  // q = 1, 2, 0
  std::vector<DecayVerdict> verdicts;

  const QSeries& at_q(int q) const;
};

/// Remainder norms at every checkpoint with t >= t_min, fitted per q.
DecayReport remainder_report(const SolutionRun& run, const ExpansionSpec& spec, int cutoff,
                             bool include_log, double t_min = 8.0);

/// Judge |fitted - predicted| <= tolerance with the preferred model; the
/// verdict is appended to the report and returned.
DecayVerdict verdict(DecayReport& report, const std::string& claim, int q, double predicted,
                     double tolerance);

/// Affine regression of norm * t^exponent against log t; a positive slope
/// matching the predicted log coefficient is the desk-scale signature of a
/// logarithmic evolution (the residual contest between the two power models
/// cannot settle it over two or three decades).
struct LogAffineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double resid = 0.0;
};
LogAffineFit fit_log_affine(const std::vector<std::pair<double, double>>& series,
                            double exponent, double t_min = 8.0);

std::string decay_report_json(const DecayReport& report);
/// Plot-ready CSV: log t, log norm and both model predictions per q.
void write_decay_csv(const DecayReport& report, const std::string& path);

}  // namespace cdb
