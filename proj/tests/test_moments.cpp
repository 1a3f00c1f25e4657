/// Moment engine: initial moments against 1-D quadrature, the parity rule,
/// closed-form subtraction powers, renormalized space-time moments against
/// exact values on a linear run, and the renormalization gain on a nonlinear
/// run.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "cdb/moments.hpp"
#include "cdb/quadrature.hpp"
#include "cdb/rates.hpp"
#include "doctest.h"

using namespace cdb;

namespace {

constexpr double kPi = std::numbers::pi;

SolutionRun linear_3d_run(double M0, const std::vector<double>& shift) {
  SolverConfig cfg;
  cfg.n = 3;
  cfg.N = 64;
  cfg.L = 20.0;
  cfg.a = DirectionVector{0.0, 0.0, 0.0};
  cfg.t_end = 32.0;
  cfg.checkpoint_times = dyadic_checkpoints(0.0625, 32.0);
  cfg.steps_per_interval = 24;
  cfg.tail_tol = 1e-5;
  cfg.dealias = false;  // 64^3 cannot hold the 2/3-mask ringing of G(1) data
  const Field u0 = gaussian_field(Grid{3, 64, 20.0}, M0, 1.0, shift);
  return solve(cfg, u0);
}

SolutionRun nonlinear_3d_run() {
  SolverConfig cfg;
  cfg.n = 3;
  cfg.N = 64;
  cfg.L = 18.0;
  cfg.a = DirectionVector{1.0, 0.0, 0.0};
  cfg.t_end = 8.0;
  cfg.checkpoint_times = dyadic_checkpoints(0.0625, 8.0);
  cfg.steps_per_interval = 24;
  cfg.tail_tol = 1e-5;
  cfg.dealias = false;  // as above; product aliasing sits at ~1e-7, well below use
  const Field u0 = gaussian_field(Grid{3, 64, 18.0}, 4.0, 1.0, {0.75, 0.0, 0.0});
  return solve(cfg, u0);
}

}  // namespace

TEST_CASE("initial moments of sampled Gaussian data") {
  const Grid g{3, 64, 14.0};
  const Field u0 = gaussian_field(g, 1.0, 1.0, {0.0, 0.0, 0.0});
  const MomentTable t = initial_moments(u0, 3);

  CHECK(t.M0 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(t.alpha_moment(MultiIndex{0, 1, 0})) < 1e-12);

  // second moment against a 1-D Gauss-Hermite oracle:
  // \int y^2 (4 pi)^{-1/2} e^{-y^2/4} dy with y = 2x -> 2
  const auto [z, w] = gauss_hermite(24);
  double oracle = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double y = 2.0 * z[i];
    oracle += w[i] * (2.0 / std::sqrt(4.0 * kPi)) * y * y;
  }
  CHECK(oracle == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(t.alpha_moment(MultiIndex{2, 0, 0}) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(initial_moment_error(t, MultiIndex{2, 0, 0}) < 1e-8);

  CHECK_THROWS(initial_moments(u0, 4));  // above 2n-3
}

TEST_CASE("boundary-tail precondition for moments") {
  const Grid g{2, 64, 5.0};
  const Field u0 = gaussian_field(g, 1.0, 1.0, {0.0, 0.0});
  CHECK_THROWS(initial_moments(u0, 1));
}

TEST_CASE("parity rule") {
  CHECK(parity_vanishes(MultiIndex{0, 0, 0}, 0, 1));
  CHECK(parity_vanishes(MultiIndex{1, 0, 0}, 0, 0));
  CHECK_FALSE(parity_vanishes(MultiIndex{2, 0, 0}, 1, 1));
  CHECK_FALSE(parity_vanishes(MultiIndex{1, 0, 0}, 1, 0));
}

TEST_CASE("closed subtraction powers") {
  // U0^2 mass: (-s)^0 \int G^2(s) dy = (8 pi s)^{-3/2}, rho = -3/2
  const auto p = profile_product_moment_power(3, 0, MultiIndex(3), 0, 0, 1.0, {}, nullptr);
  CHECK(p.rho == doctest::Approx(-1.5));
  CHECK(p.C == doctest::Approx(std::sqrt(2.0 * kPi) / (32.0 * kPi * kPi)).epsilon(1e-13));

  // the printed tail: \int_1^inf C s^{-3/2} ds = 2C = sqrt(2 pi)/(16 pi^2)
  CHECK(2.0 * p.C == doctest::Approx(std::sqrt(2.0 * kPi) / (16.0 * kPi * kPi)).epsilon(1e-13));
  CHECK(2.0 * p.C == doctest::Approx(0.0158731).epsilon(1e-4));

  // \int y_k d_j (G^2) dy = 0 for j != k: the 2 U0 U1 moment with M1 = e_j
  const auto q =
      profile_product_moment_power(3, 0, MultiIndex{0, 1, 0}, 0, 1, 1.0, {1.0, 0.0, 0.0},
                                   nullptr);
  CHECK_FALSE(q.parity_zero);
  CHECK(q.C == doctest::Approx(0.0));

  // same but aligned (k = j) is nonzero
  const auto r =
      profile_product_moment_power(3, 0, MultiIndex{1, 0, 0}, 0, 1, 1.0, {1.0, 0.0, 0.0},
                                   nullptr);
  CHECK(std::abs(r.C) > 1e-4);
}

TEST_CASE("pure powers never integrate over (0, inf)") {
  const auto e = analytic_profile_product_st_moment(3, 0, MultiIndex(3), 0, 0, 1.0, {},
                                                    nullptr);
  CHECK_FALSE(e.converged);
  CHECK(e.flag == "divergent-origin");

  // parity-forced zero is stored as exactly zero and converged
  const auto z = analytic_profile_product_st_moment(3, 0, MultiIndex(3), 0, 1, 1.0,
                                                    {1.0, 0.0, 0.0}, nullptr);
  CHECK(z.converged);
  CHECK(z.value == 0.0);
  CHECK(z.flag == "parity");
}

TEST_CASE("space-time moments on a linear run match exact values") {
  // u(s) = M0 G(1+s): every moment of u^2 has a closed form
  const double M0 = 2.0;
  const auto run = linear_3d_run(M0, {0.0, 0.0, 0.0});

  // mass conservation across checkpoints
  for (const auto& s : run.norms)
    CHECK(std::abs(s.mass - M0) <= 1e-8 * M0);

  // raw \int_0^inf \int u^2 = 2 M0^2 (8 pi)^{-3/2}
  const auto raw = renormalized_st_moment(run, 0, MultiIndex(3), -1, M0, {});
  const double want_raw = 2.0 * M0 * M0 * std::pow(8.0 * kPi, -1.5);
  CHECK(raw.entry.converged);
  CHECK(raw.entry.value == doctest::Approx(want_raw).epsilon(0.02));

  // renormalized (l=1, beta=0, level 0):
  // -M0^2 (8 pi)^{-3/2} \int_0^inf s [(1+s)^{-3/2} - s^{-3/2}] ds = 4 M0^2 (8 pi)^{-3/2}
  const auto lv = renormalized_st_moment(run, 1, MultiIndex(3), 0, M0, {});
  const double want_lv = 4.0 * M0 * M0 * std::pow(8.0 * kPi, -1.5);
  CHECK(lv.entry.converged);
  CHECK(lv.entry.value == doctest::Approx(want_lv).epsilon(0.03));

  // first moments of u^2 vanish for centered data
  const auto fm = renormalized_st_moment(run, 0, MultiIndex{1, 0, 0}, 0, M0, {});
  CHECK(std::abs(fm.entry.value) < 1e-3 * want_raw);

  // weighted norm growth: fitted exponent of || |x|^mu u ||_L1 is <= mu/2 + 0.1
  for (int mu : {1, 2}) {
    std::vector<std::pair<double, double>> series;
    for (const auto& s : run.norms)
      if (s.t >= 2.0) series.emplace_back(s.t, mu == 1 ? s.w1 : s.w2);
    const auto fit = fit_rates(series, 2.0);
    CHECK(-fit.p_plain <= 0.5 * mu + 0.1);  // growth exponent = -decay exponent
  }
}

TEST_CASE("corrected first moment of shifted data") {
  const double M0 = 2.0;
  const auto run = linear_3d_run(M0, {1.0, 0.0, 0.0});
  const MomentTable t = compute_moment_table(run, 3);
  // a = 0: M1 = -\int x u0 = -M0 * shift
  REQUIRE(t.M1.size() == 3);
  CHECK(t.M1[0] == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(std::abs(t.M1[1]) < 1e-8);
}

TEST_CASE("renormalization gains on a nonlinear run") {
  const auto run = nonlinear_3d_run();
  const MomentTable table = compute_moment_table(run, 3);
  REQUIRE(table.M1.size() == 3);

  // every theorem moment must have converged
  for (const auto& [k, e] : table.st_moments) {
    if (k.renorm_level == -9) continue;
    INFO("l=", k.l, " beta=", k.beta.str(), " level=", k.renorm_level, " flag=", e.flag);
    CHECK(e.converged);
  }

  const auto spec = build_expansion(3, table, run.config.a, 2);

  // fitted decay of the (l=0, beta=0) integrand improves by >= 0.4 per valid level
  const MultiIndex zero(3);
  auto decay_at = [&](int level, const ExpansionSpec* profiles) {
    const auto c = renormalized_st_moment(run, 0, zero, level, table.M0, table.M1, profiles);
    std::vector<StSeriesPoint> shifted;  // fit in the (1+s) basis
    for (const auto& pt : c.integrand)
      if (pt.s >= 0.4) shifted.push_back({1.0 + pt.s, pt.value});
    return fit_series_exponent(shifted, 0.0, 1e300);
  };
  const double d_raw = decay_at(-1, nullptr);
  const double d_l0 = decay_at(0, nullptr);
  const double d_l2 = decay_at(2, &spec);
  INFO("decays ", d_raw, " ", d_l0, " ", d_l2);
  CHECK(d_raw <= -1.3);          // raw mass integrand ~ s^{-3/2}
  CHECK(d_l0 <= d_raw - 0.4);    // removing U0^2 gains a full order (parity)
  CHECK(d_l2 <= d_l0 - 0.4);     // removing up to U2 products gains again

  // the level-0 and level-1 values agree exactly for 2l + |beta| = 2 entries
  // (the added 2 U0 U1 moment is parity-forced to zero)
  const auto l0 = renormalized_st_moment(run, 1, zero, 0, table.M0, table.M1);
  const auto l1 = renormalized_st_moment(run, 1, zero, 1, table.M0, table.M1);
  CHECK(l0.entry.value == l1.entry.value);
}

TEST_CASE("cumulative squared-mass integral grows logarithmically in 2-D") {
  SolverConfig cfg;
  cfg.n = 2;
  cfg.N = 256;
  cfg.L = 12.0;
  cfg.a = DirectionVector{1.0, 0.0};
  cfg.t_end = 32.0;
  cfg.checkpoint_times = dyadic_checkpoints(0.0625, 32.0);
  const Field u0 = gaussian_field(Grid{2, 256, 12.0}, 1.0, 1.0, {0.0, 0.0});
  const auto run = solve(cfg, u0);
  const auto I = cumulative_mass_integral(run);
  // slope of I against log(1+t) approaches 1/(8 pi); at t ~ 16..32 the
  // correction is O(1/t), allow 12%
  const auto& a = I[I.size() - 2];
  const auto& b = I.back();
  const double slope = (b.value - a.value) / (std::log1p(b.s) - std::log1p(a.s));
  CHECK(slope == doctest::Approx(1.0 / (8.0 * kPi)).epsilon(0.12));
}

TEST_CASE("moments CSV schema") {
  MomentTable t;
  t.n = 3;
  t.st_moments[StKey{0, MultiIndex{1, 0, 0}, 0}] = StMomentEntry{0.5, true, 1e-4, ""};
  t.st_moments[StKey{1, MultiIndex(3), 0}] = StMomentEntry{-0.25, false, 2e-2, "rate-too-slow"};
  write_moments_csv(t, "test_moments.csv");
  std::ifstream in("test_moments.csv");
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  std::filesystem::remove("test_moments.csv");
  CHECK(header == "l,beta,renorm_level,value,tail_bound,converged");
  CHECK(row1.find("0,1:0:0,0,0.5") == 0);
  CHECK(row2.find("1,0:0:0,0,-0.25") == 0);
}
