#include "cdb/moments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "cdb/gaussian_poly.hpp"
#include "cdb/quadrature.hpp"

namespace cdb {

namespace {

constexpr double kPi = std::numbers::pi;

// beta-moment with the (-y)^beta sign convention
double signed_poly_moment(const GaussianPoly& gp, const MultiIndex& beta) {
  const double sgn = (beta.order() % 2 == 0) ? 1.0 : -1.0;
  return sgn * gp.moment(beta);
}

// (-y)^beta moment of u(s)^2 on the grid
double squared_field_moment(const Field& f, const MultiIndex& beta) {
  Field sq = f;
  for (auto& v : sq.values) v *= v;
  return sq.signed_moment(beta);
}

// \int (-y)^beta [M0 G(s) * term](y) dy for one profile term, s fixed.
double g_times_term_moment(int n, double M0, const ProfileTerm& term, double s,
                           const MultiIndex& beta) {
  const GaussianPoly g0 = GaussianPoly::from_kernel(MultiIndex(n), s).scale(M0);
  auto plain_sum = [&](double at_time) {
    double tot = 0.0;
    for (const auto& k : term.kernels)
      tot += signed_poly_moment(g0 * GaussianPoly::from_term(k, at_time), beta);
    return tot;
  };
  switch (term.kind) {
    case TermKind::PlainKernel:
      return plain_sum(s);
    case TermKind::LogKernel:
      throw std::invalid_argument("g_times_term_moment: log terms are not subtraction terms");
    case TermKind::TimeIntegral: {
      // \int_0^s w^{s_power} K(s - w/2) dw, w = sig^2
      const auto [gz, gw] = gauss_legendre(48);
      const double smax_r = std::sqrt(s);
      double tot = 0.0;
      for (std::size_t k = 0; k < gz.size(); ++k) {
        const double sig = 0.5 * smax_r * (gz[k] + 1.0);
        const double w = sig * sig;
        const double jac = 2.0 * std::pow(sig, 2.0 * term.s_power + 1.0);
        double inner = 0.0;
        for (const auto& kt : term.kernels)
          inner += signed_poly_moment(g0 * GaussianPoly::from_term(kt, s - 0.5 * w), beta);
        tot += gw[k] * 0.5 * smax_r * jac * inner;
      }
      return tot;
    }
  }
  return 0.0;
}

struct SubtractionSet {
  std::vector<PowerMoment> powers;  // one per product pair, parity-zero included as C = 0
};

SubtractionSet build_subtraction(int n, int l, const MultiIndex& beta, int level, double M0,
                                 const std::vector<double>& M1,
                                 const ExpansionSpec* profiles) {
  SubtractionSet out;
  for (int m1 = 0; m1 <= level; ++m1)
    for (int m2 = m1; m1 + m2 <= level; ++m2)
      out.powers.push_back(profile_product_moment_power(n, l, beta, m1, m2, M0, M1, profiles));
  return out;
}

double subtraction_value(const SubtractionSet& sub, double s) {
  double v = 0.0;
  for (const auto& p : sub.powers)
    if (p.C != 0.0) v += p.C * std::pow(s, p.rho);
  return v;
}

}  // namespace

MomentTable initial_moments(const Field& u0, int max_order) {
  const int n = u0.grid.n;
  if (max_order > 2 * n - 3 && n >= 2)
    throw std::invalid_argument("initial_moments: max_order above 2n-3");
  const double umax = u0.linf();
  if (u0.boundary_shell_max() > 1e-12 * umax)
    throw std::runtime_error("initial_moments: boundary tail violation, moments untrustworthy");

  MomentTable t;
  t.n = n;
  // half-resolution field for the refinement error estimate
  Grid gh{n, u0.grid.N / 2, u0.grid.L};
  Field coarse(gh, u0.t);
  {
    int idx[5];
    for (std::size_t i = 0; i < coarse.values.size(); ++i) {
      unflatten(gh, i, idx);
      std::size_t src = 0;
      for (int j = 0; j < n; ++j)
        src = src * static_cast<std::size_t>(u0.grid.N) + static_cast<std::size_t>(2 * idx[j]);
      coarse.values[i] = u0.values[src];
    }
  }
  for (int m = 0; m <= max_order; ++m)
    for (const auto& alpha : MultiIndex::all_of_order(n, m)) {
      const double v = u0.signed_moment(alpha);
      t.alpha_moments[alpha] = v;
      const double vc = coarse.signed_moment(alpha);
      StKey err_key{-1, alpha, -9};  // stash the error estimates in st space
      t.st_moments[err_key] = StMomentEntry{std::abs(v - vc), true, 0.0, "alpha-err"};
    }
  t.M0 = t.alpha_moment(MultiIndex(n));
  return t;
}

double initial_moment_error(const MomentTable& t, const MultiIndex& alpha) {
  const auto* e = t.st_moment(-1, alpha, -9);
  return e ? e->value : 0.0;
}

PowerMoment profile_product_moment_power(int n, int l, const MultiIndex& beta, int m1,
                                         int m2, double M0, const std::vector<double>& M1,
                                         const ExpansionSpec* profiles) {
  if (m1 > m2) std::swap(m1, m2);
  PowerMoment out;
  out.rho = l + 0.5 * (beta.order() - n - m1 - m2);
  if (parity_vanishes(beta, m1, m2)) {
    out.parity_zero = true;
    return out;
  }
  const double lsign = (l % 2 == 0) ? 1.0 : -1.0;
  const MultiIndex zero(n);

  double c = 0.0;
  if (m1 == 0 && m2 == 0) {
    GaussianPoly g = GaussianPoly::from_kernel(zero, 1.0);
    c = M0 * M0 * signed_poly_moment(g * g, beta);
  } else if (m1 == 0 && m2 == 1) {
    if (static_cast<int>(M1.size()) != n)
      throw std::invalid_argument("profile_product_moment_power: M1 required");
    GaussianPoly g = GaussianPoly::from_kernel(zero, 1.0);
    double tot = 0.0;
    for (int j = 0; j < n; ++j) {
      if (M1[static_cast<std::size_t>(j)] == 0.0) continue;
      GaussianPoly dg = GaussianPoly::from_kernel(MultiIndex::unit(n, j), 1.0);
      tot += M1[static_cast<std::size_t>(j)] * signed_poly_moment(g * dg, beta);
    }
    c = 2.0 * M0 * tot;
  } else if (m1 == 1 && m2 == 1) {
    if (static_cast<int>(M1.size()) != n)
      throw std::invalid_argument("profile_product_moment_power: M1 required");
    double tot = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double w = M1[static_cast<std::size_t>(j)] * M1[static_cast<std::size_t>(k)];
        if (w == 0.0) continue;
        GaussianPoly a = GaussianPoly::from_kernel(MultiIndex::unit(n, j), 1.0);
        GaussianPoly b = GaussianPoly::from_kernel(MultiIndex::unit(n, k), 1.0);
        tot += w * signed_poly_moment(a * b, beta);
      }
    c = tot;
  } else if (m1 == 0 && m2 == 2) {
    if (!profiles)
      throw std::invalid_argument("profile_product_moment_power: profiles required for U2");
    double tot = 0.0;
    for (const auto& term : profiles->terms) {
      if (term.kind == TermKind::LogKernel || term.order_m != 2) continue;
      tot += g_times_term_moment(n, M0, term, 1.0, beta);
    }
    c = 2.0 * tot;
  } else {
    throw std::invalid_argument("profile_product_moment_power: products beyond order 2");
  }
  out.C = lsign * c;
  return out;
}

StMomentEntry analytic_profile_product_st_moment(int n, int l, const MultiIndex& beta,
                                                 int m1, int m2, double M0,
                                                 const std::vector<double>& M1,
                                                 const ExpansionSpec* profiles) {
  const PowerMoment p = profile_product_moment_power(n, l, beta, m1, m2, M0, M1, profiles);
  StMomentEntry e;
  if (p.parity_zero || p.C == 0.0) {
    e.value = 0.0;
    e.converged = true;
    e.flag = "parity";
    return e;
  }
  // A pure power C s^rho is never integrable over (0, inf).
  e.value = 0.0;
  e.converged = false;
  e.flag = (p.rho <= -1.0) ? "divergent-origin" : "divergent-tail";
  return e;
}

double fit_series_exponent(const std::vector<StSeriesPoint>& series, double s_min,
                           double s_max) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (const auto& p : series) {
    if (p.s < s_min || p.s > s_max || p.value == 0.0) continue;
    const double x = std::log(p.s), y = std::log(std::abs(p.value));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw std::runtime_error("fit_series_exponent: fewer than 2 usable points");
  const double denom = m * sxx - sx * sx;
  return (m * sxy - sx * sy) / denom;
}

StMomentComputation renormalized_st_moment(const SolutionRun& run, int l,
                                           const MultiIndex& beta, int renorm_level,
                                           double M0, const std::vector<double>& M1,
                                           const ExpansionSpec* profiles, double delta) {
  const int n = run.config.n;
  if (beta.dim() != n) throw std::invalid_argument("renormalized_st_moment: dim mismatch");
  if (run.count() < 4)
    throw std::invalid_argument("renormalized_st_moment: missing checkpoints");

  StMomentComputation out;
  const SubtractionSet sub =
      build_subtraction(n, l, beta, renorm_level, M0, M1, profiles);

  // weighted grid series p_i = (-s)^l moment(u^2) including s = 0, plus the
  // absolute-moment scale used as the noise floor for near-zero entries
  const int count = run.count();
  std::vector<double> s(static_cast<std::size_t>(count)), p(static_cast<std::size_t>(count));
  const double lsign = (l % 2 == 0) ? 1.0 : -1.0;
  double abs_scale = 0.0;
  for (int i = 0; i < count; ++i) {
    s[static_cast<std::size_t>(i)] = run.times[static_cast<std::size_t>(i)];
    const double w =
        (l == 0) ? 1.0 : lsign * std::pow(run.times[static_cast<std::size_t>(i)], l);
    const Field& f = run.field(i);
    p[static_cast<std::size_t>(i)] = w * squared_field_moment(f, beta);
    Field absf = f;
    for (auto& v : absf.values) v = std::abs(v * v);
    double am = absf.signed_moment(MultiIndex(n));
    {
      // |y^beta| scale via even doubling of beta
      MultiIndex beta2(n);
      for (int j = 0; j < n; ++j) beta2[j] = 2 * ((beta[j] + 1) / 2);
      if (beta2.order() > 0) am = std::sqrt(am * absf.signed_moment(beta2));
    }
    abs_scale = std::max(abs_scale, std::abs(w) * am);
  }
  const double noise = 1e-6 * abs_scale;

  // renormalized integrand at s > 0
  for (int i = 1; i < count; ++i) {
    const double si = s[static_cast<std::size_t>(i)];
    out.integrand.push_back({si, p[static_cast<std::size_t>(i)] - subtraction_value(sub, si)});
  }

  double value = 0.0;
  std::string flag;

  // [0, s1]: grid part by trapezoid, subtraction part exactly
  const double s1 = s[1];
  value += 0.5 * s1 * (p[0] + p[1]);
  for (const auto& pm : sub.powers) {
    if (pm.C == 0.0) continue;
    if (pm.rho <= -1.0) {
      flag = "divergent-origin";
      continue;
    }
    value -= pm.C * std::pow(s1, pm.rho + 1.0) / (pm.rho + 1.0);
  }

  // [s1, S]: power-law panels in the (1+s) basis (our integrands carry the
  // data width as an offset), sigma-trapezoid fallback where the sign changes
  for (std::size_t i = 0; i + 1 < out.integrand.size(); ++i) {
    const auto& a = out.integrand[i];
    const auto& b = out.integrand[i + 1];
    if (a.value * b.value > 0.0) {
      const double rho =
          std::log(std::abs(b.value / a.value)) / std::log((1.0 + b.s) / (1.0 + a.s));
      if (std::abs(rho) < 24.0) {
        if (std::abs(rho + 1.0) > 1e-9)
          value += a.value * (1.0 + a.s) *
                   (std::pow((1.0 + b.s) / (1.0 + a.s), rho + 1.0) - 1.0) / (rho + 1.0);
        else
          value += a.value * (1.0 + a.s) * std::log((1.0 + b.s) / (1.0 + a.s));
        continue;
      }
    }
    const double sa = std::sqrt(a.s), sb = std::sqrt(b.s);
    value += (sb - sa) * (sa * a.value + sb * b.value);
  }

  // tail beyond the last checkpoint: local decay exponent in ln(1+s) from the
  // last above-noise points (global window fits are biased at desk scale)
  const double S = out.integrand.back().s;
  const double rS = out.integrand.back().value;
  double fitted = 0.0;
  bool converged = false;
  if (std::abs(rS) <= noise) {
    converged = true;
    fitted = -99.0;
    if (flag.empty()) flag = "noise-floor";
  } else {
    std::vector<StSeriesPoint> late;
    for (std::size_t i = out.integrand.size() >= 4 ? out.integrand.size() - 4 : 0;
         i < out.integrand.size(); ++i)
      if (std::abs(out.integrand[i].value) > noise)
        late.push_back({1.0 + out.integrand[i].s, out.integrand[i].value});
    fitted = (late.size() >= 2) ? fit_series_exponent(late, 0.0, 1e300) : 0.0;
    if (fitted <= -(1.0 + delta)) {
      value += rS * (1.0 + S) / (-1.0 - fitted);
      out.entry.tail_bound = std::abs(rS * (1.0 + S) / (-1.0 - fitted));
      converged = true;
    } else {
      out.entry.tail_bound = std::abs(rS) * S;  // not meaningful; rate too slow
      flag = flag.empty() ? "rate-too-slow" : flag;
    }
  }
  out.fitted_decay = fitted;
  out.entry.value = value;
  out.entry.converged = converged && flag != "divergent-origin";
  out.entry.flag = flag;
  return out;
}

MomentTable compute_moment_table(const SolutionRun& run, int max_alpha_order) {
  const int n = run.config.n;
  MomentTable t = initial_moments(run.field(0), max_alpha_order);

  // raw mass-square integral, needed for the corrected first moment
  if (n >= 3) {
    auto raw = renormalized_st_moment(run, 0, MultiIndex(n), -1, t.M0, {});
    t.st_moments[StKey{0, MultiIndex(n), -1}] = raw.entry;
    t.M1.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      t.M1[static_cast<std::size_t>(j)] = t.alpha_moment(MultiIndex::unit(n, j)) +
                                          run.config.a[j] * raw.entry.value;
  }

  if (n == 3) {
    for (int j = 0; j < n; ++j) {
      const MultiIndex beta = MultiIndex::unit(n, j);
      auto c = renormalized_st_moment(run, 0, beta, 0, t.M0, t.M1);
      t.st_moments[StKey{0, beta, 0}] = c.entry;
    }
    {
      auto c = renormalized_st_moment(run, 1, MultiIndex(n), 0, t.M0, t.M1);
      t.st_moments[StKey{1, MultiIndex(n), 0}] = c.entry;
    }
    for (const auto& beta : MultiIndex::all_of_order(n, 2)) {
      auto c = renormalized_st_moment(run, 0, beta, 0, t.M0, t.M1);
      t.st_moments[StKey{0, beta, 0}] = c.entry;
    }
  } else if (n == 4) {
    for (int j = 0; j < n; ++j) {
      const MultiIndex beta = MultiIndex::unit(n, j);
      auto c = renormalized_st_moment(run, 0, beta, -1, t.M0, t.M1);
      t.st_moments[StKey{0, beta, -1}] = c.entry;
    }
  }
  return t;
}

std::vector<StSeriesPoint> cumulative_mass_integral(const SolutionRun& run) {
  const int count = run.count();
  std::vector<StSeriesPoint> mass2(static_cast<std::size_t>(count));
  const MultiIndex zero(run.config.n);
  for (int i = 0; i < count; ++i) {
    mass2[static_cast<std::size_t>(i)] = {run.times[static_cast<std::size_t>(i)],
                                          squared_field_moment(run.field(i), zero)};
  }
  std::vector<StSeriesPoint> out(static_cast<std::size_t>(count));
  double acc = 0.0;
  out[0] = {mass2[0].s, 0.0};
  for (int i = 1; i < count; ++i) {
    const auto& a = mass2[static_cast<std::size_t>(i - 1)];
    const auto& b = mass2[static_cast<std::size_t>(i)];
    if (a.s == 0.0 || a.value * b.value <= 0.0) {
      acc += 0.5 * (b.s - a.s) * (a.value + b.value);
    } else {
      const double rho = std::log(std::abs(b.value / a.value)) / std::log(b.s / a.s);
      if (std::abs(rho + 1.0) > 1e-9)
        acc += a.value * a.s * (std::pow(b.s / a.s, rho + 1.0) - 1.0) / (rho + 1.0);
      else
        acc += a.value * a.s * std::log(b.s / a.s);
    }
    out[static_cast<std::size_t>(i)] = {b.s, acc};
  }
  return out;
}

void write_moments_csv(const MomentTable& table, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_moments_csv: cannot open " + path);
  f << "l,beta,renorm_level,value,tail_bound,converged\n";
  f.precision(16);
  for (const auto& [k, e] : table.st_moments) {
    if (k.renorm_level == -9) continue;  // internal error-estimate entries
    f << k.l << ',' << k.beta.str() << ',' << k.renorm_level << ',' << e.value << ','
      << e.tail_bound << ',' << (e.converged ? 1 : 0) << '\n';
  }
}

}  // namespace cdb
