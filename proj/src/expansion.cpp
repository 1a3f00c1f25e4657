#include "cdb/expansion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cdb/quadrature.hpp"
#include "json.hpp"

namespace cdb {

namespace {

constexpr double kPi = std::numbers::pi;

// 1-D factor (-r)^k H_k(r x), r = 1/(2 sqrt(tau)).
double axis_factor(int k, double tau, double x) {
  if (k == 0) return 1.0;
  const double r = 1.0 / (2.0 * std::sqrt(tau));
  const double z = r * x;
  double hm1 = 1.0, h = 2.0 * z;
  for (int m = 1; m < k; ++m) {
    const double hp = 2.0 * z * h - 2.0 * m * hm1;
    hm1 = h;
    h = hp;
  }
  double s = 1.0;
  for (int m = 0; m < k; ++m) s *= -r;
  return s * h;
}

// Sum of kernels evaluated at one point and absolute time.
double eval_kernel_sum_point(const std::vector<KernelTerm>& kernels, double t,
                             std::span<const double> x) {
  double v = 0.0;
  for (const auto& k : kernels) v += eval_kernel_term_point(k, t, x);
  return v;
}

// Adaptive Gauss-Legendre for \int_0^t s^p K(t - s/2, x) ds after s = sigma^2.
double time_integral_point(const ProfileTerm& term, double t, std::span<const double> x) {
  const double smax_r = std::sqrt(t);
  auto eval_m = [&](int m) {
    const auto [gz, gw] = gauss_legendre(m);
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
      const double sig = 0.5 * smax_r * (gz[static_cast<std::size_t>(k)] + 1.0);
      const double s = sig * sig;
      const double jac = 2.0 * std::pow(sig, 2.0 * term.s_power + 1.0);
      total += gw[static_cast<std::size_t>(k)] * 0.5 * smax_r * jac *
               eval_kernel_sum_point(term.kernels, t - 0.5 * s, x);
    }
    return total;
  };
  double prev = eval_m(24);
  for (int m = 48; m <= 384; m *= 2) {
    const double cur = eval_m(m);
    if (std::abs(cur - prev) <= 1e-10 * std::max(1e-14, std::abs(cur))) return cur;
    prev = cur;
  }
  throw std::runtime_error("time_integral_point: quadrature tolerance 1e-10 not met");
}

// Add c * t^p * grad^alpha G(tau, .) to a field via separable axis tables.
void accumulate_reduced_kernel(Field& out, const KernelTerm& red, double t, double scale) {
  const Grid& g = out.grid;
  const double tau = red.time_map(t);
  if (tau <= 0.0) throw std::domain_error("accumulate: non-positive mapped time");
  const double tp = (red.t_power == 0.0) ? 1.0 : std::pow(t, red.t_power);
  const double amp = red.coeff * tp * std::pow(4.0 * kPi * tau, -0.5 * g.n) * scale;
  std::vector<std::vector<double>> tab(static_cast<std::size_t>(g.n));
  for (int j = 0; j < g.n; ++j) {
    auto& tj = tab[static_cast<std::size_t>(j)];
    tj.resize(static_cast<std::size_t>(g.N));
    for (int i = 0; i < g.N; ++i) {
      const double x = g.coord(i);
      tj[static_cast<std::size_t>(i)] =
          axis_factor(red.alpha[j], tau, x) * std::exp(-x * x / (4.0 * tau));
    }
  }
  // innermost axis contiguous
  const std::size_t rows = g.size() / static_cast<std::size_t>(g.N);
  const auto& last = tab[static_cast<std::size_t>(g.n - 1)];
  int idx[5];
  for (std::size_t row = 0; row < rows; ++row) {
    std::size_t r = row;
    double partial = amp;
    for (int j = g.n - 2; j >= 0; --j) {
      idx[j] = static_cast<int>(r % static_cast<std::size_t>(g.N));
      r /= static_cast<std::size_t>(g.N);
    }
    for (int j = 0; j < g.n - 1; ++j)
      partial *= tab[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[j])];
    double* dst = out.values.data() + row * static_cast<std::size_t>(g.N);
    for (int i = 0; i < g.N; ++i) dst[static_cast<std::size_t>(i)] += partial * last[static_cast<std::size_t>(i)];
  }
}

void accumulate_kernel_sum(Field& out, const std::vector<KernelTerm>& kernels, double t,
                           double scale) {
  for (const auto& k : kernels) {
    if (k.t_order == 0) {
      accumulate_reduced_kernel(out, k, t, scale);
    } else {
      for (const auto& r : reduce_time_derivatives(k)) accumulate_reduced_kernel(out, r, t, scale);
    }
  }
}

}  // namespace

double eval_term_point(const ProfileTerm& term, double t, std::span<const double> x) {
  switch (term.kind) {
    case TermKind::PlainKernel:
      return eval_kernel_sum_point(term.kernels, t, x);
    case TermKind::LogKernel:
      return std::log(t) * eval_kernel_sum_point(term.kernels, t, x);
    case TermKind::TimeIntegral:
      return time_integral_point(term, t, x);
  }
  return 0.0;
}

void accumulate_term_on_grid(Field& out, const ProfileTerm& term, double t, double scale) {
  switch (term.kind) {
    case TermKind::PlainKernel:
      accumulate_kernel_sum(out, term.kernels, t, scale);
      return;
    case TermKind::LogKernel:
      accumulate_kernel_sum(out, term.kernels, t, scale * std::log(t));
      return;
    case TermKind::TimeIntegral: {
      // pick a node count once by probing, then sweep the grid
      const double smax_r = std::sqrt(t);
      std::vector<double> probe(static_cast<std::size_t>(out.grid.n), 0.0);
      int m_use = 48;
      {
        // probe at a characteristic width point of the kernel family
        for (int j = 0; j < out.grid.n; ++j)
          probe[static_cast<std::size_t>(j)] = std::sqrt(std::max(t, 1.0));
        auto eval_m = [&](int m) {
          const auto [gz, gw] = gauss_legendre(m);
          double total = 0.0;
          for (int k = 0; k < m; ++k) {
            const double sig = 0.5 * smax_r * (gz[static_cast<std::size_t>(k)] + 1.0);
            const double s = sig * sig;
            const double jac = 2.0 * std::pow(sig, 2.0 * term.s_power + 1.0);
            total += gw[static_cast<std::size_t>(k)] * 0.5 * smax_r * jac *
                     eval_kernel_sum_point(term.kernels, t - 0.5 * s, probe);
          }
          return total;
        };
        double prev = eval_m(24);
        bool ok = false;
        for (int m = 48; m <= 384; m *= 2) {
          const double cur = eval_m(m);
          if (std::abs(cur - prev) <= 1e-11 * std::max(1e-14, std::abs(cur))) {
            m_use = m;
            ok = true;
            break;
          }
          prev = cur;
        }
        if (!ok) throw std::runtime_error("accumulate_term_on_grid: quadrature not converged");
      }
      const auto [gz, gw] = gauss_legendre(m_use);
      for (int k = 0; k < m_use; ++k) {
        const double sig = 0.5 * smax_r * (gz[static_cast<std::size_t>(k)] + 1.0);
        const double s = sig * sig;
        if (s <= 0.0) continue;
        const double jac = 2.0 * std::pow(sig, 2.0 * term.s_power + 1.0);
        const double wt = gw[static_cast<std::size_t>(k)] * 0.5 * smax_r * jac * scale;
        accumulate_kernel_sum(out, term.kernels, t - 0.5 * s, wt);
      }
      return;
    }
  }
}

Field eval_expansion(const ExpansionSpec& spec, double t, const Grid& grid,
                     bool include_log, int order_cutoff) {
  if (grid.n != spec.n) throw std::invalid_argument("eval_expansion: dimension mismatch");
  if (t <= 0.0) throw std::domain_error("eval_expansion: t must be positive");
  Field out(grid, t);
  for (const auto& term : spec.terms) {
    if (term.kind == TermKind::LogKernel) {
      if (!include_log) continue;
    } else if (term.order_m > order_cutoff) {
      continue;
    }
    accumulate_term_on_grid(out, term, t);
  }
  return out;
}

namespace {

KernelTerm bare_g(int n) {
  KernelTerm t;
  t.alpha = MultiIndex(n);
  return t;
}

std::vector<KernelTerm> scaled(std::vector<KernelTerm> ks, double c) {
  for (auto& k : ks) k.coeff *= c;
  return ks;
}

const StMomentEntry& require_st(const MomentTable& mt, int l, const MultiIndex& beta,
                                int level) {
  const auto* e = mt.st_moment(l, beta, level);
  if (!e)
    throw std::runtime_error("build_expansion: missing st-moment (l=" + std::to_string(l) +
                             ", beta=" + beta.str() + ", level=" + std::to_string(level) + ")");
  if (!e->converged && e->flag != "parity")
    throw std::runtime_error("build_expansion: st-moment not converged (l=" +
                             std::to_string(l) + ", beta=" + beta.str() + ")");
  return *e;
}

}  // namespace

ExpansionSpec build_expansion(int n, const MomentTable& moments, const DirectionVector& a,
                              int max_order) {
  if (moments.n != n || a.dim() != n)
    throw std::invalid_argument("build_expansion: dimension mismatch");
  const int cap = (n == 3) ? 3 : n - 2;
  if (max_order < 0 || max_order > cap)
    throw std::invalid_argument("build_expansion: unsupported (n, max_order) pair");
  if (n < 2 || n > 4)
    throw std::invalid_argument("build_expansion: concrete expansions cover n = 2, 3, 4");

  const double M0 = moments.M0;
  const double c2 = std::sqrt(2.0 * kPi) / (32.0 * kPi * kPi);
  ExpansionSpec spec;
  spec.n = n;
  spec.M0 = M0;
  spec.a = a;
  spec.max_order = max_order;

  // m = 0: mass term
  {
    ProfileTerm t;
    t.order_m = 0;
    t.scale_degree = n;
    t.kernels = {bare_g(n)};
    t.kernels[0].coeff = M0;
    t.provenance = "mass";
    spec.terms.push_back(std::move(t));
  }

  if (max_order >= 1) {
    if (static_cast<int>(moments.M1.size()) != n)
      throw std::runtime_error("build_expansion: corrected first moment unavailable");
    ProfileTerm t;
    t.order_m = 1;
    t.scale_degree = n + 1;
    t.kernels = apply_direction_gradient({bare_g(n)}, DirectionVector{moments.M1});
    t.provenance = "first-moment";
    if (!t.kernels.empty()) spec.terms.push_back(std::move(t));
  }

  if (max_order >= 2) {
    // initial second moments
    ProfileTerm ti;
    ti.order_m = 2;
    ti.scale_degree = n + 2;
    for (const auto& alpha : MultiIndex::all_of_order(n, 2)) {
      KernelTerm k = bare_g(n);
      k.alpha = alpha;
      k.coeff = moments.alpha_moment(alpha) / alpha.factorial();
      if (k.coeff != 0.0) ti.kernels.push_back(k);
    }
    ti.provenance = "initial-moments-2";
    if (!ti.kernels.empty()) spec.terms.push_back(std::move(ti));

    // first-order space-time moments of u^2 (renormalized for n = 3, raw for n = 4)
    const int level1 = (n == 3) ? 0 : -1;
    ProfileTerm ts;
    ts.order_m = 2;
    ts.scale_degree = n + 2;
    for (int j = 0; j < n; ++j) {
      const MultiIndex beta = MultiIndex::unit(n, j);
      const auto& e = require_st(moments, 0, beta, level1);
      if (e.value == 0.0) continue;
      KernelTerm k = bare_g(n);
      k.alpha = beta;
      k.coeff = e.value;
      for (auto& kk : apply_direction_gradient({k}, a)) ts.kernels.push_back(kk);
    }
    ts.kernels = combine_terms(std::move(ts.kernels));
    ts.provenance = "st-moments-1";
    if (!ts.kernels.empty()) spec.terms.push_back(std::move(ts));

    if (n == 3) {
      // U2^odd: -c2 M0^2 (2 t^{-1/2} a.grad G(t/2) + int_0^t s^{-1/2} Lap a.grad G(t-s/2))
      ProfileTerm th;
      th.order_m = 2;
      th.scale_degree = n + 2;
      KernelTerm base = bare_g(3);
      base.time_map = TimeMap{0.5, 0.0};
      base.t_power = -0.5;
      th.kernels = scaled(apply_direction_gradient({base}, a), -2.0 * c2 * M0 * M0);
      th.provenance = "u2-odd-half";
      spec.terms.push_back(std::move(th));

      ProfileTerm tq;
      tq.kind = TermKind::TimeIntegral;
      tq.order_m = 2;
      tq.scale_degree = n + 2;
      tq.kernels = scaled(apply_laplacian(apply_direction_gradient({bare_g(3)}, a)),
                          -c2 * M0 * M0);
      tq.provenance = "u2-odd-integral";
      spec.terms.push_back(std::move(tq));
    }
  }

  if (max_order >= 3 && n == 3) {
    ProfileTerm ti;
    ti.order_m = 3;
    ti.scale_degree = 6;
    for (const auto& alpha : MultiIndex::all_of_order(3, 3)) {
      KernelTerm k = bare_g(3);
      k.alpha = alpha;
      k.coeff = moments.alpha_moment(alpha) / alpha.factorial();
      if (k.coeff != 0.0) ti.kernels.push_back(k);
    }
    ti.provenance = "initial-moments-3";
    if (!ti.kernels.empty()) spec.terms.push_back(std::move(ti));

    ProfileTerm ts;
    ts.order_m = 3;
    ts.scale_degree = 6;
    {
      // l = 1, beta = 0
      const auto& e = require_st(moments, 1, MultiIndex(3), 0);
      if (e.value != 0.0) {
        KernelTerm k = bare_g(3);
        k.t_order = 1;
        k.coeff = e.value;
        for (auto& kk : apply_direction_gradient({k}, a)) ts.kernels.push_back(kk);
      }
      // l = 0, |beta| = 2
      for (const auto& beta : MultiIndex::all_of_order(3, 2)) {
        const auto& e2 = require_st(moments, 0, beta, 0);
        if (e2.value == 0.0) continue;
        KernelTerm k = bare_g(3);
        k.alpha = beta;
        k.coeff = e2.value / beta.factorial();
        for (auto& kk : apply_direction_gradient({k}, a)) ts.kernels.push_back(kk);
      }
    }
    ts.kernels = combine_terms(std::move(ts.kernels));
    ts.provenance = "st-moments-2";
    if (!ts.kernels.empty()) spec.terms.push_back(std::move(ts));

    if (static_cast<int>(moments.M1.size()) == 3) {
      const DirectionVector m1{moments.M1};
      ProfileTerm th;
      th.order_m = 3;
      th.scale_degree = 6;
      KernelTerm base = bare_g(3);
      base.time_map = TimeMap{0.5, 0.0};
      base.t_power = -0.5;
      th.kernels = scaled(
          apply_direction_gradient(apply_direction_gradient({base}, a), m1), -2.0 * c2 * M0);
      th.provenance = "u3-odd-half";
      if (!th.kernels.empty()) spec.terms.push_back(std::move(th));

      ProfileTerm tq;
      tq.kind = TermKind::TimeIntegral;
      tq.order_m = 3;
      tq.scale_degree = 6;
      tq.kernels = scaled(
          apply_laplacian(apply_direction_gradient(apply_direction_gradient({bare_g(3)}, a), m1)),
          -c2 * M0);
      tq.provenance = "u3-odd-integral";
      if (!tq.kernels.empty()) spec.terms.push_back(std::move(tq));
    }
  }

  // logarithmic coefficient
  if (n == 2) {
    ProfileTerm tl;
    tl.kind = TermKind::LogKernel;
    tl.order_m = 1;  // m = n - 1
    tl.scale_degree = 3;
    tl.kernels = scaled(apply_direction_gradient({bare_g(2)}, a), M0 * M0 / (8.0 * kPi));
    tl.provenance = "log-coefficient";
    if (!tl.kernels.empty()) spec.terms.push_back(std::move(tl));
  } else if (n == 4) {
    ProfileTerm tl;
    tl.kind = TermKind::LogKernel;
    tl.order_m = 3;  // m = n - 1
    tl.scale_degree = 7;
    tl.kernels = scaled(apply_laplacian(apply_direction_gradient({bare_g(4)}, a)),
                        -M0 * M0 / (128.0 * kPi * kPi));
    tl.provenance = "log-coefficient";
    if (!tl.kernels.empty()) spec.terms.push_back(std::move(tl));
  } else if (n == 3) {
    ProfileTerm tl;
    tl.kind = TermKind::LogKernel;
    tl.order_m = 4;  // m = 2n - 2
    tl.scale_degree = 7;
    const double k4 = -std::sqrt(3.0) / (8640.0 * kPi * kPi * kPi) * M0 * M0 * M0;
    auto adot = apply_direction_gradient({bare_g(3)}, a);
    tl.kernels = scaled(apply_laplacian(apply_direction_gradient(adot, a)), k4);
    tl.provenance = "log-coefficient";
    if (!tl.kernels.empty()) spec.terms.push_back(std::move(tl));
  }

  return spec;
}

K4Assembly k4_constant_from_integrals() {
  K4Assembly k;
  const double s6pi = std::sqrt(6.0 * kPi);
  const double pi2 = kPi * kPi;
  k.i1 = -s6pi / (54.0 * pi2);
  k.i2 = -s6pi / (81.0 * pi2);
  k.i3 = -s6pi / (27.0 * pi2);
  k.i4 = 7.0 * s6pi / (216.0 * pi2);
  k.i5 = 11.0 * s6pi / (810.0 * pi2);
  k.i6 = 11.0 * s6pi / (270.0 * pi2);
  k.one_d = 14.0 * std::sqrt(6.0) / 135.0;
  // The three sums of the assembly carry 1, 1/2!, 1/3!; the j^3 group and the
  // (k != j) group must cancel anisotropically for the result to be a pure
  // Lap (a.grad)^2 G multiple.
  k.anisotropic_residual = (2.0 * k.i3 + k.i6) - 3.0 * (2.0 * k.i2 + k.i5);
  const double front = std::sqrt(2.0 * kPi) / (16.0 * pi2);
  k.assembled = front * (-(2.0 * k.i1 + k.i4) + 0.5 * (2.0 * k.i2 + k.i5));
  k.closed_form = -std::sqrt(3.0) / (8640.0 * kPi * kPi * kPi);
  return k;
}

std::vector<KernelTerm> synthetic_um_kernels(int n, int m, const DirectionVector& a) {
  std::vector<KernelTerm> out;
  int i = 0;
  for (const auto& alpha : MultiIndex::all_of_order(n, m)) {
    KernelTerm k;
    k.alpha = alpha;
    k.coeff = (1.0 + 0.13 * ++i) / alpha.factorial();
    out.push_back(k);
  }
  if (m >= 1) {
    int j = 0;
    for (int l = 0; 2 * l <= m - 1; ++l)
      for (const auto& beta : MultiIndex::all_of_order(n, m - 1 - 2 * l)) {
        KernelTerm k;
        k.alpha = beta;
        k.t_order = l;
        double lf = 1.0;
        for (int q = 2; q <= l; ++q) lf *= q;
        k.coeff = (1.0 + 0.29 * ++j) / (lf * beta.factorial());
        for (auto& kk : apply_direction_gradient({k}, a)) out.push_back(kk);
      }
  }
  return combine_terms(std::move(out));
}

OddStructure build_odd_n_structure(int n) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("build_odd_n_structure: n must be odd and >= 3");
  OddStructure st;
  st.n = n;
  st.log_coefficient_resolved = (n == 3);
  for (int m = 0; m <= 2 * n - 3; ++m) {
    OrderStructure os;
    os.m = m;
    os.scale_degree = n + m;
    os.initial_alphas = MultiIndex::all_of_order(n, m);
    if (m >= 1) {
      const int k = m - 1;  // 2l + |beta| = k
      for (int l = 0; 2 * l <= k; ++l)
        for (const auto& beta : MultiIndex::all_of_order(n, k - 2 * l)) {
          NonlinearSlot slot;
          slot.l = l;
          slot.beta = beta;
          slot.renorm_cap = (k <= n - 3) ? -1 : std::min(k - n + 2, n - 2);
          for (int m1 = 0; m1 <= slot.renorm_cap; ++m1)
            for (int m2 = m1; m1 + m2 <= slot.renorm_cap; ++m2)
              if (!parity_vanishes(beta, m1, m2)) slot.subtraction.emplace_back(m1, m2);
          os.slots.push_back(std::move(slot));
        }
    }
    os.has_jm = (m >= n - 1);
    st.orders.push_back(std::move(os));
  }
  return st;
}

std::string expansion_to_json(const ExpansionSpec& spec) {
  nlohmann::json j;
  j["n"] = spec.n;
  j["M0"] = spec.M0;
  j["a"] = spec.a.a;
  j["max_order"] = spec.max_order;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : spec.terms) {
    nlohmann::json jt;
    jt["kind"] = (t.kind == TermKind::PlainKernel ? "plain-kernel"
                  : t.kind == TermKind::TimeIntegral ? "time-integral"
                                                     : "log-kernel");
    jt["order"] = t.order_m;
    jt["scale_degree"] = t.scale_degree;
    jt["provenance"] = t.provenance;
    if (t.kind == TermKind::TimeIntegral) jt["s_power"] = t.s_power;
    nlohmann::json ks = nlohmann::json::array();
    for (const auto& k : t.kernels) {
      nlohmann::json jk;
      jk["coefficient"] = k.coeff;
      jk["l"] = k.t_order;
      jk["alpha"] = k.alpha.str();
      jk["time_map"] = {{"sigma", k.time_map.sigma}, {"tau", k.time_map.tau}};
      if (k.t_power != 0.0) jk["t_power"] = k.t_power;
      ks.push_back(jk);
    }
    jt["kernels"] = ks;
    terms.push_back(jt);
  }
  j["terms"] = terms;
  return j.dump(2);
}

}  // namespace cdb
