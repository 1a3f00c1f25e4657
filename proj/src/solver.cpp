#include "cdb/solver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>

namespace cdb {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// phi_k(z) for real z <= 0, series near zero to avoid cancellation.
void phi123(double z, double& p1, double& p2, double& p3) {
  if (std::abs(z) < 0.5) {
    double term = 1.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    // phi1 = sum z^k/(k+1)!, phi2 = sum z^k/(k+2)!, phi3 = sum z^k/(k+3)!
    double f1 = 1.0;  // (k+1)!
    for (int k = 0; k <= 14; ++k) {
      f1 *= (k + 1);
      const double f2 = f1 * (k + 2);
      const double f3 = f2 * (k + 3);
      s1 += term / f1;
      s2 += term / f2;
      s3 += term / f3;
      term *= z;
    }
    p1 = s1;
    p2 = s2;
    p3 = s3;
  } else {
    const double ez = std::exp(z);
    p1 = (ez - 1.0) / z;
    p2 = (ez - 1.0 - z) / (z * z);
    p3 = (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
  }
}

using Complex = std::complex<double>;

// FFT workspace + ETDRK4 tables for one (n, N, L, dt) state.
class Stepper {
 public:
  Stepper(const SolverConfig& cfg, const Grid& grid) : cfg_(cfg), grid_(grid) {
    const int n = grid.n;
    nreal_ = grid.size();
    std::vector<int> dims(static_cast<std::size_t>(n), grid.N);
    ncplx_ = 1;
    for (int j = 0; j < n - 1; ++j) ncplx_ *= static_cast<std::size_t>(grid.N);
    ncplx_ *= static_cast<std::size_t>(grid.N / 2 + 1);

    real_ = fftw_alloc_real(nreal_);
    cplx_ = fftw_alloc_complex(ncplx_);
    fwd_ = fftw_plan_dft_r2c(n, dims.data(), real_, cplx_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r(n, dims.data(), cplx_, real_, FFTW_ESTIMATE);

    k2_.resize(ncplx_);
    adotk_.resize(ncplx_);
    keep_.resize(ncplx_);
    mmax_.resize(ncplx_);
    const int cut = grid.N / 3;
    const double kb = kPi / grid.L;
    for (std::size_t c = 0; c < ncplx_; ++c) {
      std::size_t rem = c;
      int m[5];
      m[n - 1] = static_cast<int>(rem % static_cast<std::size_t>(grid.N / 2 + 1));
      rem /= static_cast<std::size_t>(grid.N / 2 + 1);
      for (int j = n - 2; j >= 0; --j) {
        int mi = static_cast<int>(rem % static_cast<std::size_t>(grid.N));
        rem /= static_cast<std::size_t>(grid.N);
        m[j] = (mi <= grid.N / 2) ? mi : mi - grid.N;
      }
      double k2 = 0.0, ak = 0.0;
      bool keep = true;
      for (int j = 0; j < n; ++j) {
        const double kj = kb * m[j];
        k2 += kj * kj;
        ak += (cfg.a.dim() == n ? cfg.a[j] : 0.0) * kj;
        if (cfg.dealias && std::abs(m[j]) > cut) keep = false;
      }
      k2_[c] = k2;
      adotk_[c] = ak;
      keep_[c] = keep ? 1 : 0;
      int mm = std::abs(m[n - 1]);
      for (int j = 0; j < n - 1; ++j) mm = std::max(mm, std::abs(m[j]));
      mmax_[c] = mm;
    }
  }

  ~Stepper() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(cplx_);
  }

  Stepper(const Stepper&) = delete;
  Stepper& operator=(const Stepper&) = delete;

  const Grid& grid() const { return grid_; }

  std::vector<Complex> forward(const Field& f) {
    std::memcpy(real_, f.values.data(), nreal_ * sizeof(double));
    fftw_execute(fwd_);
    std::vector<Complex> out(ncplx_);
    std::memcpy(static_cast<void*>(out.data()), cplx_, ncplx_ * sizeof(Complex));
    project(out);
    return out;
  }

  /// Inverse transform with modes above |m| = keep_max removed; the doubled
  /// box halves the resolution, so resampling must band-limit first or the
  /// top octave aliases into the retained band.
  Field inverse_band_limited(std::vector<Complex> uh, double t, int keep_max) {
    for (std::size_t c = 0; c < ncplx_; ++c)
      if (mmax_[c] > keep_max) uh[c] = 0.0;
    return inverse(uh, t);
  }

  Field inverse(const std::vector<Complex>& uh, double t) {
    std::memcpy(cplx_, uh.data(), ncplx_ * sizeof(Complex));
    fftw_execute(bwd_);
    Field f(grid_, t);
    const double inv = 1.0 / static_cast<double>(nreal_);
    for (std::size_t i = 0; i < nreal_; ++i) f.values[i] = real_[i] * inv;
    return f;
  }

  void project(std::vector<Complex>& uh) const {
    if (!cfg_.dealias) return;
    for (std::size_t c = 0; c < ncplx_; ++c)
      if (!keep_[c]) uh[c] = 0.0;
  }

  void set_dt(double dt) {
    if (dt == dt_) return;
    dt_ = dt;
    e_.resize(ncplx_);
    e2_.resize(ncplx_);
    fh_.resize(ncplx_);
    fu_.resize(ncplx_);
    fab_.resize(ncplx_);
    fc_.resize(ncplx_);
    for (std::size_t c = 0; c < ncplx_; ++c) {
      const double z = -k2_[c] * dt;
      e_[c] = std::exp(z);
      e2_[c] = std::exp(0.5 * z);
      double p1h, p2h, p3h;
      phi123(0.5 * z, p1h, p2h, p3h);
      fh_[c] = 0.5 * dt * p1h;
      double p1, p2, p3;
      phi123(z, p1, p2, p3);
      fu_[c] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
      fab_[c] = dt * (2.0 * p2 - 4.0 * p3);
      fc_[c] = dt * (-p2 + 4.0 * p3);
    }
  }

  /// i (a.k) F[f(u)] with dealiasing; also reports max|u| and the boundary
  /// tail ratio of the physical field it transformed.
  void nonlinear(const std::vector<Complex>& uh, std::vector<Complex>& out,
                 double* u_max = nullptr, double* tail_ratio = nullptr) {
    std::memcpy(cplx_, uh.data(), ncplx_ * sizeof(Complex));
    fftw_execute(bwd_);
    const double inv = 1.0 / static_cast<double>(nreal_);
    double umax = 0.0;
    for (std::size_t i = 0; i < nreal_; ++i) {
      const double u = real_[i] * inv;
      umax = std::max(umax, std::abs(u));
      real_[i] = (cfg_.nonlinearity == Nonlinearity::Squared) ? u * u : std::abs(u) * u;
    }
    if (u_max) *u_max = umax;
    if (tail_ratio) {
      // outermost shell of f(u); monotone proxy for the u tail
      double shell = 0.0;
      const int N = grid_.N;
      int idx[5];
      for (std::size_t i = 0; i < nreal_; ++i) {
        std::size_t rem = i;
        bool on_shell = false;
        for (int j = grid_.n - 1; j >= 0; --j) {
          idx[j] = static_cast<int>(rem % static_cast<std::size_t>(N));
          rem /= static_cast<std::size_t>(N);
        }
        for (int j = 0; j < grid_.n; ++j)
          if (idx[j] == 0 || idx[j] == N - 1) {
            on_shell = true;
            break;
          }
        if (on_shell) shell = std::max(shell, std::abs(real_[i]));
      }
      const double denom = std::max(umax * umax, 1e-300);
      *tail_ratio = std::sqrt(shell / denom);  // back to |u| scale
    }
    fftw_execute(fwd_);
    const Complex iu(0.0, 1.0);
    out.resize(ncplx_);
    for (std::size_t c = 0; c < ncplx_; ++c)
      out[c] = keep_or(c, iu * adotk_[c] * Complex(cplx_[c][0], cplx_[c][1]));
  }

  /// One ETDRK4 step of the current dt.
  void step(std::vector<Complex>& uh, double* u_max, double* tail_ratio) {
    nonlinear(uh, nu_, u_max, tail_ratio);
    sa_.resize(ncplx_);
    sb_.resize(ncplx_);
    for (std::size_t c = 0; c < ncplx_; ++c) sa_[c] = e2_[c] * uh[c] + fh_[c] * nu_[c];
    nonlinear(sa_, na_);
    for (std::size_t c = 0; c < ncplx_; ++c) sb_[c] = e2_[c] * uh[c] + fh_[c] * na_[c];
    nonlinear(sb_, nb_);
    for (std::size_t c = 0; c < ncplx_; ++c)
      sb_[c] = e2_[c] * sa_[c] + fh_[c] * (2.0 * nb_[c] - nu_[c]);
    nonlinear(sb_, nc_);
    for (std::size_t c = 0; c < ncplx_; ++c)
      uh[c] = e_[c] * uh[c] + fu_[c] * nu_[c] + fab_[c] * (na_[c] + nb_[c]) + fc_[c] * nc_[c];
  }

 private:
  Complex keep_or(std::size_t c, Complex v) const {
    return (cfg_.dealias && !keep_[c]) ? Complex(0.0, 0.0) : v;
  }

  SolverConfig cfg_;
  Grid grid_;
  std::size_t nreal_ = 0, ncplx_ = 0;
  double* real_ = nullptr;
  fftw_complex* cplx_ = nullptr;
  fftw_plan fwd_{}, bwd_{};
  std::vector<double> k2_, adotk_;
  std::vector<char> keep_;
  std::vector<int> mmax_;
  double dt_ = -1.0;
  std::vector<double> e_, e2_, fh_, fu_, fab_, fc_;
  std::vector<Complex> nu_, na_, nb_, nc_, sa_, sb_;
};

// Zero-extension resampling onto the doubled box: the new grid keeps every
// second sample of the old one in the middle half, zeros outside.
Field doubled_box(const Field& f) {
  Grid g2 = f.grid;
  g2.L = 2.0 * f.grid.L;
  Field out(g2, f.t);
  const int N = f.grid.N;
  const int n = f.grid.n;
  int idx[5];
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    std::size_t rem = i;
    bool inside = true;
    std::size_t src = 0;
    for (int j = n - 1; j >= 0; --j) {
      idx[j] = static_cast<int>(rem % static_cast<std::size_t>(N));
      rem /= static_cast<std::size_t>(N);
    }
    for (int j = 0; j < n && inside; ++j) {
      if (idx[j] < N / 4 || idx[j] >= 3 * N / 4) inside = false;
    }
    if (!inside) continue;
    for (int j = 0; j < n; ++j) {
      const int oi = 2 * idx[j] - N / 2;
      src = src * static_cast<std::size_t>(N) + static_cast<std::size_t>(oi);
    }
    out.values[i] = f.values[src];
  }
  return out;
}

NormSample sample_norms(const Field& f) {
  NormSample s;
  s.t = f.t;
  s.l1 = f.l1();
  s.l2 = f.l2();
  s.linf = f.linf();
  s.mass = f.mass();
  s.w1 = f.weighted_l1(1.0);
  s.w2 = f.weighted_l1(2.0);
  return s;
}

}  // namespace

std::vector<double> dyadic_checkpoints(double t_first, double t_end) {
  std::vector<double> out;
  for (double t = t_first; t < t_end * (1.0 + 1e-12); t *= 2.0) out.push_back(t);
  if (std::abs(out.back() - t_end) > 1e-9 * t_end)
    throw std::invalid_argument("dyadic_checkpoints: t_end must be t_first * 2^k");
  out.back() = t_end;
  return out;
}

int SolutionRun::index_of(double t) const {
  for (int i = 0; i < count(); ++i)
    if (std::abs(times[static_cast<std::size_t>(i)] - t) <= 1e-9 * std::max(1.0, t)) return i;
  throw std::out_of_range("SolutionRun: no checkpoint at requested time");
}

SolutionRun solve(const SolverConfig& config, const Field& u0) {
  if (!is_power_of_two(config.N))
    throw std::invalid_argument("solve: N must be a power of two");
  if (config.n < 1 || config.n > 4)
    throw std::invalid_argument("solve: n must be 1..4");
  if (!(u0.grid == Grid{config.n, config.N, config.L}))
    throw std::invalid_argument("solve: initial data grid does not match config");
  if (config.checkpoint_times.empty())
    throw std::invalid_argument("solve: no checkpoint times");
  for (std::size_t i = 1; i < config.checkpoint_times.size(); ++i)
    if (config.checkpoint_times[i] <= config.checkpoint_times[i - 1])
      throw std::invalid_argument("solve: checkpoint times must be strictly increasing");
  const double u0max = u0.linf();
  if (u0.boundary_shell_max() > config.tail_tol * u0max)
    throw TailViolation("solve: initial data violates the boundary-tail bound");

  SolutionRun run;
  run.config = config;
  if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);

  auto record = [&run](const Field& f) {
    run.times.push_back(f.t);
    run.norms.push_back(sample_norms(f));
    if (!run.config.out_dir.empty()) {
      char name[64];
      std::snprintf(name, sizeof(name), "checkpoint_%03d.cdbf",
                    static_cast<int>(run.times.size() - 1));
      const std::string path = run.config.out_dir + "/" + name;
      save_field(f, path);
      run.paths.push_back(path);
    }
    run.push(f);
  };

  Field u = u0;
  u.t = 0.0;
  record(u);

  auto stepper = std::make_unique<Stepper>(config, u.grid);
  std::vector<Complex> uh = stepper->forward(u);
  double t = 0.0;
  double last_umax = u0max;
  // Doubling fires well before tail_tol so that the resampling jump (which
  // rings at the trigger scale) never threatens the invariant; the trigger is
  // re-armed once the ringing has diffused back below half the trigger.
  const double trigger = config.tail_tol / 32.0;
  bool armed = true;

  for (double t_next : config.checkpoint_times) {
    // choose dt for this interval
    const double len = t_next - t;
    double dt;
    int steps;
    if (config.dt_fixed > 0.0) {
      dt = config.dt_fixed;
      steps = static_cast<int>(std::llround(len / dt));
      if (steps < 1 || std::abs(steps * dt - len) > 1e-9 * len)
        throw std::invalid_argument("solve: dt_fixed does not divide a checkpoint interval");
    } else {
      double dt_target = len / config.steps_per_interval;
      const double anorm = [&] {
        double s = 0.0;
        for (int j = 0; j < config.a.dim(); ++j) s += config.a[j] * config.a[j];
        return std::sqrt(s);
      }();
      if (anorm > 0.0 && last_umax > 0.0) {
        const double dt_cfl =
            config.cfl * stepper->grid().h() / (2.0 * anorm * last_umax + 1e-300);
        dt_target = std::min(dt_target, dt_cfl);
      }
      steps = std::max(1, static_cast<int>(std::ceil(len / dt_target - 1e-12)));
      dt = len / steps;
    }
    stepper->set_dt(dt);

    for (int s = 0; s < steps; ++s) {
      double umax = 0.0, tail = 0.0;
      stepper->step(uh, &umax, &tail);
      last_umax = umax;
      t = (s + 1 == steps) ? t_next : t + dt;
      if (!std::isfinite(umax)) throw BlowupDetected("solve: NaN detected (blow-up?)");
      if (std::getenv("CDB_DEBUG_TAIL"))
        std::fprintf(stderr, "DBG t=%.6f umax=%g tail=%g\n", t, umax, tail);
      if (!armed && tail < 0.5 * trigger) armed = true;
      const bool violated = tail > config.tail_tol;
      if (!config.box_double) {
        if (violated)
          throw TailViolation("solve: boundary tail exceeded tail_tol (box_double off)");
      } else if ((armed && tail > trigger) || violated) {
        // Doubling must actually cure the violation: if the field is
        // under-resolved the dealias ringing only grows on a coarser grid.
        bool cured = false;
        for (int attempt = 0; attempt < 3 && !cured; ++attempt) {
          Field big = doubled_box(stepper->inverse_band_limited(uh, t, config.N / 4));
          stepper = std::make_unique<Stepper>(config, big.grid);
          uh = stepper->forward(big);
          stepper->set_dt(dt);
          ++run.box_doublings;
          const Field phys = stepper->inverse(uh, t);
          cured = phys.boundary_shell_max() <= 0.5 * config.tail_tol * phys.linf();
          if (std::getenv("CDB_DEBUG_TAIL"))
            std::fprintf(stderr, "DBG cure attempt=%d L=%g ratio=%g\n", attempt,
                         big.grid.L, phys.boundary_shell_max() / phys.linf());
        }
        if (!cured)
          throw TailViolation("solve: box doubling cannot cure the tail (under-resolved)");
        armed = false;
      }
    }

    Field snap = stepper->inverse(uh, t_next);
    if (snap.has_nan()) throw BlowupDetected("solve: NaN in checkpoint field");
    record(snap);
  }
  return run;
}

double residual_check(const SolutionRun& run, int i) {
  if (i <= 0 || i + 1 >= run.count())
    throw std::invalid_argument("residual_check: need three consecutive checkpoints");
  const Field& fm = run.field(i - 1);
  const Field& f0 = run.field(i);
  const Field& fp = run.field(i + 1);
  if (!(fm.grid == f0.grid) || !(fp.grid == f0.grid))
    throw std::invalid_argument("residual_check: checkpoints live on different grids");
  if (fm.has_nan() || f0.has_nan() || fp.has_nan())
    throw std::invalid_argument("residual_check: NaN field");

  const double hm = f0.t - fm.t, hp = fp.t - f0.t;
  const Grid& g = f0.grid;
  const std::size_t M = g.size();

  // d_t u by the nonuniform central difference
  std::vector<double> dudt(M);
  const double denom = hm * hp * (hm + hp);
  for (std::size_t k = 0; k < M; ++k)
    dudt[k] = (hm * hm * fp.values[k] - hp * hp * fm.values[k] +
               (hp * hp - hm * hm) * f0.values[k]) /
              denom;

  // spectral Lap u and a.grad f(u) on the middle slice
  SolverConfig cfg = run.config;
  cfg.N = g.N;
  cfg.L = g.L;
  cfg.dealias = run.config.dealias;
  Stepper st(cfg, g);
  auto uh = st.forward(f0);

  // Lap u
  std::vector<Complex> lap = uh;
  {
    // reuse the stepper's transform: build -|k|^2 from scratch here
    const double kb = kPi / g.L;
    const std::size_t ncplx = lap.size();
    const int n = g.n, N = g.N;
    for (std::size_t c = 0; c < ncplx; ++c) {
      std::size_t rem = c;
      int m[5];
      m[n - 1] = static_cast<int>(rem % static_cast<std::size_t>(N / 2 + 1));
      rem /= static_cast<std::size_t>(N / 2 + 1);
      for (int j = n - 2; j >= 0; --j) {
        int mi = static_cast<int>(rem % static_cast<std::size_t>(N));
        rem /= static_cast<std::size_t>(N);
        m[j] = (mi <= N / 2) ? mi : mi - N;
      }
      double k2 = 0.0;
      for (int j = 0; j < n; ++j) k2 += (kb * m[j]) * (kb * m[j]);
      lap[c] *= -k2;
    }
  }
  Field lap_u = st.inverse(lap, f0.t);

  std::vector<Complex> ngrad;
  st.nonlinear(uh, ngrad);
  Field agrad = st.inverse(ngrad, f0.t);

  double ss = 0.0;
  for (std::size_t k = 0; k < M; ++k) {
    const double r = dudt[k] - lap_u.values[k] - agrad.values[k];
    ss += r * r;
  }
  return std::sqrt(ss * g.cell_volume());
}

Field gaussian_field(const Grid& g, double M0, double t0, const std::vector<double>& shift) {
  Field f(g, 0.0);
  int idx[5];
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    unflatten(g, i, idx);
    double r2 = 0.0;
    for (int j = 0; j < g.n; ++j) {
      const double x = g.coord(idx[j]) - (j < static_cast<int>(shift.size()) ? shift[static_cast<std::size_t>(j)] : 0.0);
      r2 += x * x;
    }
    f.values[i] = M0 * std::pow(4.0 * kPi * t0, -0.5 * g.n) * std::exp(-r2 / (4.0 * t0));
  }
  return f;
}

Field dipole_field(const Grid& g, double amp, double t0, const std::vector<double>& offset) {
  Field plus = gaussian_field(g, amp, t0, offset);
  std::vector<double> neg(offset);
  for (auto& v : neg) v = -v;
  Field minus = gaussian_field(g, amp, t0, neg);
  for (std::size_t i = 0; i < plus.values.size(); ++i) plus.values[i] -= minus.values[i];
  return plus;
}

void write_norm_csv(const SolutionRun& run, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_norm_csv: cannot open " + path);
  out << "t,L1,L2,Linf,mass,w1,w2\n";
  out.precision(16);
  for (const auto& s : run.norms)
    out << s.t << ',' << s.l1 << ',' << s.l2 << ',' << s.linf << ',' << s.mass << ',' << s.w1
        << ',' << s.w2 << '\n';
}

}  // namespace cdb
