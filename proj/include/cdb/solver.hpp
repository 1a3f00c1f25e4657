#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cdb/field.hpp"
#include "cdb/multi_index.hpp"

namespace cdb {

enum class Nonlinearity { Squared, Modulus };

/// Pseudo-spectral solver configuration for d_t u - Lap u = a.grad(u^2)
/// (or the modulus variant a.grad(|u|u)) on the periodic box [-L, L)^n.
struct SolverConfig {
  int n = 2;
  int N = 256;
  double L = 12.0;
  DirectionVector a;
  Nonlinearity nonlinearity = Nonlinearity::Squared;
  double t_end = 8.0;
  std::vector<double> checkpoint_times;  // strictly increasing, last == t_end
  bool dealias = true;
  bool box_double = true;
  double tail_tol = 1e-10;
  int steps_per_interval = 48;  // per checkpoint interval; accuracy knob
  double dt_fixed = 0.0;        // > 0: fixed time step (must divide intervals)
  double cfl = 0.5;
  std::string out_dir;          // persist checkpoints when non-empty
};

struct NormSample {
  double t = 0.0;
  double l1 = 0.0, l2 = 0.0, linf = 0.0, mass = 0.0, w1 = 0.0, w2 = 0.0;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TailViolation : SolverError {
  using SolverError::SolverError;
};
struct BlowupDetected : SolverError {
  using SolverError::SolverError;
};

/// A completed run: checkpoint fields (index 0 is the initial data at t = 0)
/// plus the norm series.  Fields live in memory, and on disk as well when
/// config.out_dir was set.
class SolutionRun {
 public:
  SolverConfig config;
  std::vector<double> times;
  std::vector<NormSample> norms;
  std::vector<std::string> paths;  // empty when not persisted
  int box_doublings = 0;

  int count() const { return static_cast<int>(times.size()); }
  const Field& field(int i) const { return fields_.at(static_cast<std::size_t>(i)); }
  void push(Field f) { fields_.push_back(std::move(f)); }
  /// index of the checkpoint at time t (exact match within 1e-9)
  int index_of(double t) const;

 private:
  std::vector<Field> fields_;
};

/// Dyadic ladder {t_first, 2 t_first, ..., t_end}; t_end must be
/// t_first * 2^k.
std::vector<double> dyadic_checkpoints(double t_first, double t_end);

/// Integrate with the diffusion handled by the exponential integrating factor
/// and the transport nonlinearity by a fourth-order exponential Runge-Kutta
/// scheme; 2/3-rule dealiasing on the quadratic product; box doubling by
/// spectral zero-extension resampling when the boundary tail grows past
/// tail_tol.
SolutionRun solve(const SolverConfig& config, const Field& u0);

/// A-posteriori PDE residual || d_t u - Lap u - a.grad f(u) ||_L2 at inner
/// checkpoint i, time derivative by a three-point difference, space spectral.
double residual_check(const SolutionRun& run, int i);

/// Samplers for standard test data.
Field gaussian_field(const Grid& g, double M0, double t0, const std::vector<double>& shift);
Field dipole_field(const Grid& g, double amp, double t0, const std::vector<double>& offset);

/// Norm series CSV: t, L1, L2, Linf, mass, w1, w2.
void write_norm_csv(const SolutionRun& run, const std::string& path);

}  // namespace cdb
