/// Acceptance suite: one pass/fail line per criterion.
///
///  1 constant table by quadrature (1e-8) and the assembled cubic scalar (1e-12)
///  2 convolution identity on a 64^3 grid by FFT (1e-6)
///  3 integration-by-parts identity pointwise on 64^3 (1e-8)
///  4 solver exactness, mass conservation, dt self-convergence order
///  5 2-D logarithmic growth of the cumulative squared mass (5%)
///  6 first-order 2-D rates with and without the log subtraction
///  7 3-D remainder-order monotonicity ladder
///  8 parity vanishing of profile-product moments (n = 2..5)
///  9 per-term parabolic scaling laws (1e-10)
/// 10 modulus vs squared nonlinearity on positive and sign-changing data
///
/// Run all criteria (default) or a subset: acceptance [k ...]
#include <fftw3.h>

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "cdb/expansion.hpp"
#include "cdb/moments.hpp"
#include "cdb/quadrature.hpp"
#include "cdb/rates.hpp"
#include "cdb/solver.hpp"

using namespace cdb;

namespace {

constexpr double kPi = std::numbers::pi;

int g_pass = 0, g_fail = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("CRITERION %2d %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  (pass ? g_pass : g_fail) += 1;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_constants() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = verify_constant_table(1e-8);
  double worst = 0.0;
  for (const auto& c : table) worst = std::max(worst, c.rel_err);
  const auto k4 = k4_constant_from_integrals();
  const double k4_rel = std::abs(k4.assembled - k4.closed_form) / std::abs(k4.closed_form);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = constant_table_passes(table) && k4_rel <= 1e-12 && secs < 10.0;
  report(1, pass,
         fmt("%zu table entries, worst rel %.2e; assembled K4 rel %.2e; %.2f s",
             table.size(), worst, k4_rel, secs));
}

// ---------------------------------------------------------------- criterion 2
// grid FFT evaluation of a.grad G(t-s) * G^2(s) vs the closed form
double conv_identity_error(double t, double s) {
  const int N = 64, n = 3;
  const double L = 16.0, h = 2.0 * L / N;
  const DirectionVector a{1.0, -0.5, 0.25};
  const std::size_t total = static_cast<std::size_t>(N) * N * N;
  std::vector<double> f(total), g(total);
  KernelTerm base;
  base.alpha = MultiIndex(n);
  base.time_map = TimeMap{1.0, 0.0};
  const auto adot = apply_direction_gradient({base}, a);
  int idx[3];
  const Grid grid{3, N, L};
  for (std::size_t i = 0; i < total; ++i) {
    unflatten(grid, i, idx);
    const std::array<double, 3> x{grid.coord(idx[0]), grid.coord(idx[1]), grid.coord(idx[2])};
    double fv = 0.0;
    for (const auto& k : adot) fv += eval_kernel_term_point(k, t - s, x);
    f[i] = fv;
    const double gg = eval_kernel_term_point(base, s, x);
    g[i] = gg * gg;
  }
  const int dims[3] = {N, N, N};
  const std::size_t ncplx = static_cast<std::size_t>(N) * N * (N / 2 + 1);
  std::vector<std::complex<double>> fh(ncplx), gh(ncplx);
  fftw_plan p = fftw_plan_dft_r2c(3, dims, f.data(), reinterpret_cast<fftw_complex*>(fh.data()),
                                  FFTW_ESTIMATE);
  fftw_execute(p);
  fftw_destroy_plan(p);
  p = fftw_plan_dft_r2c(3, dims, g.data(), reinterpret_cast<fftw_complex*>(gh.data()),
                        FFTW_ESTIMATE);
  fftw_execute(p);
  fftw_destroy_plan(p);
  // -L grid origin: compensate the N/2 circular shift per axis
  for (std::size_t c = 0; c < ncplx; ++c) {
    std::size_t rem = c;
    int msum = static_cast<int>(rem % static_cast<std::size_t>(N / 2 + 1));
    rem /= static_cast<std::size_t>(N / 2 + 1);
    for (int j = 1; j >= 0; --j) {
      msum += static_cast<int>(rem % static_cast<std::size_t>(N));
      rem /= static_cast<std::size_t>(N);
    }
    fh[c] *= gh[c] * ((msum % 2 == 0) ? 1.0 : -1.0);
  }
  std::vector<double> conv(total);
  p = fftw_plan_dft_c2r(3, dims, reinterpret_cast<fftw_complex*>(fh.data()), conv.data(),
                        FFTW_ESTIMATE);
  fftw_execute(p);
  fftw_destroy_plan(p);
  const double scale = (h * h * h) / static_cast<double>(total);

  const auto closed = convolve_selfsquare(t, s, a, 3);
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    unflatten(grid, i, idx);
    const std::array<double, 3> x{grid.coord(idx[0]), grid.coord(idx[1]), grid.coord(idx[2])};
    double want = 0.0;
    for (const auto& k : closed) want += eval_kernel_term_point(k, t, x);
    peak = std::max(peak, std::abs(want));
    worst = std::max(worst, std::abs(conv[i] * scale - want));
  }
  return worst / peak;
}

void criterion_convolution() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (auto [t, s] : {std::pair{2.0, 1.0}, std::pair{4.0, 1.0}, std::pair{4.0, 3.0}})
    worst = std::max(worst, conv_identity_error(t, s));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(2, worst <= 1e-6 && secs < 30.0,
         fmt("max relative error %.2e over three (t,s) pairs; %.1f s", worst, secs));
}

// ---------------------------------------------------------------- criterion 3
void criterion_ibp() {
  const DirectionVector a{1.0, 0.0, 0.0};
  const double t = 1.0;
  KernelTerm base;
  base.alpha = MultiIndex(3);
  const auto adot = apply_direction_gradient({base}, a);
  const auto lap_adot = apply_laplacian(adot);

  // RHS pieces as profile terms; LHS by a dense composite rule in sigma
  ProfileTerm ti;
  ti.kind = TermKind::TimeIntegral;
  ti.kernels = lap_adot;

  const Grid g{3, 64, 12.0};
  Field rhs(g, t);
  accumulate_term_on_grid(rhs, ti, t, -1.0);
  ProfileTerm half;
  half.kernels = adot;
  for (auto& k : half.kernels) {
    k.time_map = TimeMap{0.5, 0.0};
    k.t_power = -0.5;
  }
  accumulate_term_on_grid(rhs, half, t, -2.0);
  ProfileTerm at_t;
  at_t.kernels = adot;
  for (auto& k : at_t.kernels) k.t_power = -0.5;
  accumulate_term_on_grid(rhs, at_t, t, 2.0);

  Field lhs(g, t);
  const int panels = 4000;
  const double dsig = std::sqrt(t) / panels;
  ProfileTerm plain;
  plain.kernels = adot;
  for (int k = 0; k < panels; ++k) {
    const double sig = (k + 0.5) * dsig;
    // s^{-3/2} ds = 2 sigma^{-2} dsigma on the difference of kernels
    ProfileTerm moved = plain;
    for (auto& kt : moved.kernels) kt.time_map = TimeMap{1.0, -0.5 * sig * sig};
    accumulate_term_on_grid(lhs, moved, t, 2.0 * dsig / (sig * sig));
    accumulate_term_on_grid(lhs, plain, t, -2.0 * dsig / (sig * sig));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i)
    worst = std::max(worst, std::abs(lhs.values[i] - rhs.values[i]));
  report(3, worst <= 1e-8, fmt("max pointwise violation %.2e on 64^3 at t = 1", worst));
}

// ---------------------------------------------------------------- solver runs
SolutionRun run_config(const SolverConfig& base, const Field& u0) { return solve(base, u0); }

SolverConfig cfg_2d(int N, double L, double t_end, double a1) {
  SolverConfig cfg;
  cfg.n = 2;
  cfg.N = N;
  cfg.L = L;
  cfg.a = DirectionVector{a1, 0.0};
  cfg.t_end = t_end;
  cfg.checkpoint_times = dyadic_checkpoints(0.0625, t_end);
  return cfg;
}

double mass_drift(const SolutionRun& run) {
  const double m0 = run.norms.front().mass;
  double worst = 0.0;
  for (const auto& s : run.norms) worst = std::max(worst, std::abs(s.mass - m0));
  return worst / std::abs(m0);
}

void criterion_solver_health(const SolutionRun& std2d_run) {
  // linear exactness at t = 8 on 128^2
  SolverConfig cfg;
  cfg.n = 2;
  cfg.N = 128;
  cfg.L = 32.0;
  cfg.a = DirectionVector{0.0, 0.0};
  cfg.t_end = 8.0;
  cfg.checkpoint_times = dyadic_checkpoints(1.0, 8.0);
  cfg.box_double = false;
  cfg.dealias = false;
  const Grid g{2, 128, 32.0};
  const auto lin = solve(cfg, gaussian_field(g, 1.0, 1.0, {0.0, 0.0}));
  const Field& u8 = lin.field(lin.index_of(8.0));
  KernelTerm base;
  base.alpha = MultiIndex(2);
  double worst = 0.0, peak = 0.0;
  int idx[2];
  for (std::size_t i = 0; i < u8.values.size(); ++i) {
    unflatten(g, i, idx);
    const std::array<double, 2> x{g.coord(idx[0]), g.coord(idx[1])};
    const double want = eval_kernel_term_point(base, 9.0, x);
    peak = std::max(peak, want);
    worst = std::max(worst, std::abs(u8.values[i] - want));
  }
  const double lin_err = worst / peak;

  // self-convergence order in dt
  auto short_run = [](double dt) {
    SolverConfig c;
    c.n = 2;
    c.N = 128;
    c.L = 16.0;
    c.a = DirectionVector{1.0, 0.0};
    c.t_end = 1.0;
    c.checkpoint_times = {1.0};
    c.dt_fixed = dt;
    c.box_double = false;
    return solve(c, gaussian_field(Grid{2, 128, 16.0}, 4.0, 1.0, {0.0, 0.0}));
  };
  const Field fa = short_run(0.05).field(1);
  const Field fb = short_run(0.025).field(1);
  const Field fc = short_run(0.0125).field(1);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < fa.values.size(); ++i) {
    e1 += (fa.values[i] - fb.values[i]) * (fa.values[i] - fb.values[i]);
    e2 += (fb.values[i] - fc.values[i]) * (fb.values[i] - fc.values[i]);
  }
  const double order = 0.5 * std::log2(e1 / e2);

  const double drift = mass_drift(std2d_run);
  const bool pass = lin_err <= 1e-6 && drift <= 1e-8 && order >= 3.0;
  report(4, pass,
         fmt("linear L-inf error %.2e; std2d mass drift %.2e; dt order %.2f", lin_err, drift,
             order));
}

// ---------------------------------------------------------------- criterion 5
void criterion_log_growth(const SolutionRun& std2d_run) {
  const double M0 = std2d_run.field(0).mass();
  const auto I = cumulative_mass_integral(std2d_run);
  const double want = M0 * M0 / (8.0 * kPi);
  double worst = 0.0;
  int panels = 0;
  for (std::size_t i = 1; i < I.size(); ++i) {
    if (I[i - 1].s < 100.0 || I[i].s > 1024.0 * 1.001) continue;
    const double slope =
        (I[i].value - I[i - 1].value) / (std::log1p(I[i].s) - std::log1p(I[i - 1].s));
    worst = std::max(worst, std::abs(slope / want - 1.0));
    ++panels;
  }
  report(5, panels >= 2 && worst <= 0.05,
         fmt("dI/dlog(1+t): worst relative deviation %.4f over %d panels in [100, 1024]",
             worst, panels));
}

// ---------------------------------------------------------------- criterion 6
void criterion_thm2d(const SolutionRun& run) {
  const MomentTable table = compute_moment_table(run, 1);
  const auto spec = build_expansion(2, table, run.config.a, 0);
  const double M0 = table.M0;
  const double K = M0 * M0 / (8.0 * kPi);

  // (a) with the log term subtracted: plain exponents = gamma_q + 1/2
  auto rep_log = remainder_report(run, spec, 0, true, 8.0);
  bool pass = true;
  std::string detail = "with log:";
  for (int q : {1, 2, 0}) {
    const double predicted = gamma_q(2, q) + 0.5;
    const double fitted = rep_log.at_q(q).fit.preferred_exponent();
    pass = pass && std::abs(fitted - predicted) <= 0.15;
    detail += fmt(" q%s %.3f/%.1f", q == 0 ? "inf" : std::to_string(q).c_str(), fitted,
                  predicted);
  }

  // (b) without: the log-corrected model carries the right exponent, and the
  // compensated remainder grows along log t with slope K ||a.grad G(1)||_q
  auto rep = remainder_report(run, spec, 0, false, 8.0);
  Field kern(Grid{2, 512, 16.0}, 1.0);
  ProfileTerm pt;
  pt.kernels = apply_direction_gradient({KernelTerm{1.0, 0, MultiIndex(2), {}, 0.0}},
                                        run.config.a);
  accumulate_term_on_grid(kern, pt, 1.0);
  detail += "; no log:";
  for (int q : {1, 2, 0}) {
    const double predicted = gamma_q(2, q) + 0.5;
    const auto& fit = rep.at_q(q).fit;
    const bool log_consistent =
        std::abs(fit.p_log - predicted) <= 0.15 &&
        std::abs(fit.p_log - predicted) < std::abs(fit.p_plain - predicted);
    const double Sq = (q == 0) ? kern.linf() : (q == 1 ? kern.l1() : kern.l2());
    const auto aff = fit_log_affine(rep.at_q(q).series, predicted, 8.0);
    const bool slope_ok = aff.slope > 0.0 && std::abs(aff.slope / (K * Sq) - 1.0) <= 0.1;
    pass = pass && log_consistent && slope_ok;
    detail += fmt(" q%s slope/KS %.3f", q == 0 ? "inf" : std::to_string(q).c_str(),
                  aff.slope / (K * Sq));
  }
  report(6, pass, detail);
}

// ---------------------------------------------------------------- criterion 7
void criterion_thm3d(const SolutionRun& run) {
  const MomentTable table = compute_moment_table(run, 3);
  for (const auto& [k, e] : table.st_moments) {
    if (k.renorm_level == -9) continue;
    if (!e.converged && e.flag != "parity") {
      report(7, false, fmt("moment (l=%d, beta=%s) not converged", k.l, k.beta.str().c_str()));
      return;
    }
  }
  const auto spec = build_expansion(3, table, run.config.a, 3);
  double prev = 0.0;
  bool pass = true;
  std::string detail;
  for (int cutoff = 0; cutoff <= 2; ++cutoff) {
    auto rep = remainder_report(run, spec, cutoff, false, 4.0);
    const double p2 = rep.at_q(2).fit.preferred_exponent();
    detail += fmt("cutoff %d: %.3f  ", cutoff, p2);
    if (cutoff > 0) pass = pass && (p2 - prev >= 0.4);
    if (cutoff == 2) pass = pass && (p2 >= gamma_q(3, 2) + 1.3);
    prev = p2;
  }
  report(7, pass, detail + fmt("(floor %.2f)", gamma_q(3, 2) + 1.3));
}

// ---------------------------------------------------------------- criterion 8
void criterion_parity() {
  double worst_ratio = 0.0;
  for (int n : {2, 3, 4, 5}) {
    std::vector<double> av(static_cast<std::size_t>(n), 0.0);
    av[0] = 1.0;
    av[static_cast<std::size_t>(n - 1)] = -0.7;
    const DirectionVector a{av};
    std::vector<std::vector<KernelTerm>> um;
    for (int m = 0; m <= 2; ++m) um.push_back(synthetic_um_kernels(n, m, a));

    auto product_moment = [&](int m1, int m2, const MultiIndex& beta) {
      IntegralSpec sp;
      sp.n = n;
      sp.monomial = beta;
      sp.sum_factors = {{um[static_cast<std::size_t>(m1)], 1.0},
                        {um[static_cast<std::size_t>(m2)], 1.0}};
      sp.tol = 1e-11;
      return integrate(sp).value;
    };

    for (int m1 = 0; m1 <= 2; ++m1)
      for (int m2 = m1; m2 <= 2; ++m2) {
        // one even-parity reference scale per product
        double even_scale = 0.0;
        for (int border = 0; border <= 3; ++border) {
          MultiIndex ref(n);
          ref[0] = border;
          if (!parity_vanishes(ref, m1, m2))
            even_scale = std::max(even_scale, std::abs(product_moment(m1, m2, ref)));
        }
        for (int border = 0; border <= 3; ++border)
          for (const auto& beta : MultiIndex::all_of_order(n, border)) {
            if (!parity_vanishes(beta, m1, m2)) continue;
            const double value = product_moment(m1, m2, beta);
            worst_ratio = std::max(worst_ratio, std::abs(value) / even_scale);
          }
      }
  }
  // structure-builder slot enumeration at n = 5
  const auto st = build_odd_n_structure(5);
  int slots = 0, subs = 0;
  for (const auto& slot : st.orders[4].slots) {
    ++slots;
    subs += static_cast<int>(slot.subtraction.size());
  }
  int expect_slots = 0, expect_subs = 0;
  for (int l = 0; 2 * l <= 3; ++l)
    for (const auto& beta : MultiIndex::all_of_order(5, 3 - 2 * l)) {
      ++expect_slots;
      if (beta.order() % 2 == 0) ++expect_subs;
    }
  const bool pass = worst_ratio <= 1e-10 && slots == expect_slots && subs == expect_subs;
  report(8, pass,
         fmt("worst odd/even moment ratio %.2e; n=5 slots %d/%d subtraction %d/%d",
             worst_ratio, slots, expect_slots, subs, expect_subs));
}

// ---------------------------------------------------------------- criterion 9
void criterion_scaling() {
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    MomentTable t;
    t.n = n;
    t.M0 = 1.3;
    t.alpha_moments[MultiIndex(n)] = t.M0;
    if (n >= 3) {
      t.M1.assign(static_cast<std::size_t>(n), 0.0);
      t.M1[0] = 0.21;
      t.M1[static_cast<std::size_t>(n - 1)] = -0.4;
    }
    int i = 0;
    for (int m = 1; m <= std::min(3, n); ++m)
      for (const auto& alpha : MultiIndex::all_of_order(n, m))
        t.alpha_moments[alpha] = 0.05 * (++i % 5) - 0.11;
    int j = 0;
    for (int k = 0; k < n; ++k)
      t.st_moments[StKey{0, MultiIndex::unit(n, k), (n == 3) ? 0 : -1}] =
          StMomentEntry{0.03 * (++j), true, 0.0, ""};
    if (n == 3) {
      t.st_moments[StKey{1, MultiIndex(n), 0}] = StMomentEntry{-0.017, true, 0.0, ""};
      for (const auto& beta : MultiIndex::all_of_order(n, 2))
        t.st_moments[StKey{0, beta, 0}] = StMomentEntry{0.011 * (++j), true, 0.0, ""};
    }
    std::vector<double> av(static_cast<std::size_t>(n), 0.0);
    av[0] = 1.0;
    av[static_cast<std::size_t>(n - 1)] = -0.5;
    const auto spec = build_expansion(n, t, DirectionVector{av}, (n == 3) ? 3 : n - 2);
    for (const auto& term : spec.terms) {
      ProfileTerm probe = term;
      if (probe.kind == TermKind::LogKernel) probe.kind = TermKind::PlainKernel;
      for (double lam : {0.5, 2.0}) {
        std::vector<double> x(static_cast<std::size_t>(n)), lx(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) {
          x[static_cast<std::size_t>(d)] = 0.37 + 0.31 * d;
          lx[static_cast<std::size_t>(d)] = lam * x[static_cast<std::size_t>(d)];
        }
        const double v = eval_term_point(probe, 1.3, x);
        const double vl = eval_term_point(probe, lam * lam * 1.3, lx);
        const double rel =
            std::abs(std::pow(lam, term.scale_degree) * vl - v) / std::max(std::abs(v), 1e-30);
        worst = std::max(worst, rel);
      }
    }
  }
  report(9, worst <= 1e-10, fmt("worst scaling-law violation %.2e over all terms", worst));
}

// --------------------------------------------------------------- criterion 10
void criterion_modulus() {
  // positive data: the two nonlinearities agree
  SolverConfig cfg = cfg_2d(256, 24.0, 8.0, 1.0);
  const Field u0 = gaussian_field(Grid{2, 256, 24.0}, 1.0, 1.0, {0.0, 0.0});
  const auto squared = solve(cfg, u0);
  cfg.nonlinearity = Nonlinearity::Modulus;
  const auto modulus = solve(cfg, u0);
  double agree = 0.0;
  {
    const Field& a = squared.field(squared.count() - 1);
    const Field& b = modulus.field(modulus.count() - 1);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      agree = std::max(agree, std::abs(a.values[i] - b.values[i]));
    agree /= a.linf();
  }

  // sign-changing dipole: the runs separate measurably.  |u|u has a kink on
  // the zero set, so its spectrum decays only algebraically; the run cannot
  // hold 1e-10 spectral tails and the comparison does not need them.
  SolverConfig dcfg = cfg_2d(256, 24.0, 8.0, 1.0);
  dcfg.tail_tol = 1e-4;  // above the kink-ring floor; the box needs no doubling
  const Field d0 = dipole_field(Grid{2, 256, 24.0}, 4.0, 0.5, {1.0, 0.0});
  const auto dsq = solve(dcfg, d0);
  dcfg.nonlinearity = Nonlinearity::Modulus;
  const auto dmod = solve(dcfg, d0);
  double l2diff = 0.0;
  {
    const Field& a = dsq.field(dsq.index_of(8.0));
    const Field& b = dmod.field(dmod.index_of(8.0));
    double ss = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      const double d = a.values[i] - b.values[i];
      ss += d * d;
    }
    l2diff = std::sqrt(ss * a.grid.cell_volume());
  }
  const bool pass = agree <= 1e-8 && l2diff > 1e-3;
  report(10, pass,
         fmt("positive-data agreement %.2e (rel L-inf); dipole L2 separation %.3e", agree,
             l2diff));
}

}  // namespace

void guarded(int criterion, void (*fn)()) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(criterion, false, std::string("exception: ") + e.what());
  }
}

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto want = [&wanted](int k) { return wanted.empty() || wanted.count(k) > 0; };

  // fast analytic criteria first
  if (want(1)) guarded(1, criterion_constants);
  if (want(2)) guarded(2, criterion_convolution);
  if (want(3)) guarded(3, criterion_ibp);
  if (want(8)) guarded(8, criterion_parity);
  if (want(9)) guarded(9, criterion_scaling);

  // shared solver runs
  if (want(4) || want(5)) {
    try {
      SolverConfig cfg = cfg_2d(256, 12.0, 1024.0, 1.0);
      const auto std2d = solve(cfg, gaussian_field(Grid{2, 256, 12.0}, 1.0, 1.0, {0.0, 0.0}));
      if (want(4)) criterion_solver_health(std2d);
      if (want(5)) criterion_log_growth(std2d);
    } catch (const std::exception& e) {
      if (want(4)) report(4, false, std::string("exception: ") + e.what());
      if (want(5)) report(5, false, std::string("exception: ") + e.what());
    }
  }
  if (want(6)) {
    try {
      SolverConfig cfg = cfg_2d(256, 12.0, 1024.0, 1.0);
      // moment-matched data: vanishing second moments
      Field u0 = gaussian_field(Grid{2, 256, 12.0}, 4.0, 0.25, {0.0, 0.0});
      const Field wide = gaussian_field(Grid{2, 256, 12.0}, 2.0, 0.5, {0.0, 0.0});
      for (std::size_t i = 0; i < u0.values.size(); ++i) u0.values[i] -= wide.values[i];
      const auto run = solve(cfg, u0);
      criterion_thm2d(run);
    } catch (const std::exception& e) {
      report(6, false, std::string("exception: ") + e.what());
    }
  }
  if (want(10)) guarded(10, criterion_modulus);
  if (want(7)) {
    try {
      SolverConfig cfg;
      cfg.n = 3;
      cfg.N = 128;
      cfg.L = 18.0;
      cfg.a = DirectionVector{1.0, 0.0, 0.0};
      cfg.t_end = 64.0;
      cfg.checkpoint_times = dyadic_checkpoints(0.0625, 64.0);
      cfg.tail_tol = 3e-9;
      // moment-matched shifted data: strong first moment, vanishing second
      // moments about the center
      Field u0 = gaussian_field(Grid{3, 128, 18.0}, 8.0, 1.0, {0.75, 0.0, 0.0});
      const Field wide = gaussian_field(Grid{3, 128, 18.0}, 4.0, 2.0, {0.75, 0.0, 0.0});
      for (std::size_t i = 0; i < u0.values.size(); ++i) u0.values[i] -= wide.values[i];
      const auto run = solve(cfg, u0);
      criterion_thm3d(run);
    } catch (const std::exception& e) {
      report(7, false, std::string("exception: ") + e.what());
    }
  }

  std::printf("acceptance: %d passed, %d failed\n", g_pass, g_fail);
  return g_fail == 0 ? 0 : 1;
}
