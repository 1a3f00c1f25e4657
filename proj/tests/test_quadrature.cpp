/// Gauss rules and the printed-constant table.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "cdb/quadrature.hpp"
#include "doctest.h"

using namespace cdb;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Gauss-Hermite rule integrates exactly") {
  for (int m : {1, 4, 13, 48, 128}) {
    const auto [x, w] = gauss_hermite(m);
    double mass = 0.0, mom2 = 0.0, mom4 = 0.0;
    for (int i = 0; i < m; ++i) {
      mass += w[static_cast<std::size_t>(i)];
      mom2 += w[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      mom4 += w[static_cast<std::size_t>(i)] * std::pow(x[static_cast<std::size_t>(i)], 4);
    }
    CHECK(mass == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    if (m >= 4) {
      CHECK(mom2 == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-12));
      CHECK(mom4 == doctest::Approx(0.75 * std::sqrt(kPi)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Gauss-Legendre rule integrates exactly") {
  const auto [x, w] = gauss_legendre(16);
  double mass = 0.0, mom2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mass += w[i];
    mom2 += w[i] * x[i] * x[i];
  }
  CHECK(mass == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mom2 == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("constant table reproduces every printed value at 1e-8") {
  const auto report = verify_constant_table(1e-8);
  CHECK(report.size() >= 12);
  for (const auto& c : report) {
    INFO(c.name, ": closed ", c.closed_form, " quad ", c.quadrature, " rel ", c.rel_err);
    CHECK(c.pass);
  }
  CHECK(constant_table_passes(report));
}

TEST_CASE("an over-tight tolerance fails cleanly") {
  const auto report = verify_constant_table(1e-15);
  CHECK_FALSE(constant_table_passes(report));
}

TEST_CASE("selected spec values") {
  // quoted closed forms, fixed here as independent anchors
  const double s6pi = std::sqrt(6.0 * kPi);
  CHECK(-s6pi / (81.0 * kPi * kPi) == doctest::Approx(-0.0054308).epsilon(2e-4));
  CHECK(-s6pi / (27.0 * kPi * kPi) == doctest::Approx(-0.0162925).epsilon(2e-4));
  CHECK(11.0 * s6pi / (270.0 * kPi * kPi) == doctest::Approx(0.0179217).epsilon(2e-4));
  CHECK(11.0 * s6pi / (810.0 * kPi * kPi) == doctest::Approx(0.0059739).epsilon(2e-4));
  CHECK(1.0 / (64.0 * kPi * kPi) == doctest::Approx(1.5832e-3).epsilon(1e-4));
  CHECK(14.0 * std::sqrt(6.0) / 135.0 == doctest::Approx(0.2540212).epsilon(1e-5));
}

TEST_CASE("isotropy: axis choice does not matter") {
  auto axis_spec = [](int j) {
    IntegralSpec sp;
    sp.n = 3;
    sp.monomial = MultiIndex::unit(3, j);
    KernelTerm g;
    g.alpha = MultiIndex(3);
    KernelTerm dg;
    dg.alpha = MultiIndex::unit(3, j);
    sp.factors = {{g, 1.0}, {dg, 0.5}};
    return sp;
  };
  const double v0 = integrate(axis_spec(0)).value;
  const double v2 = integrate(axis_spec(2)).value;
  CHECK(v0 == doctest::Approx(v2).epsilon(1e-12));
}

TEST_CASE("error estimate is honest") {
  IntegralSpec sp;
  sp.n = 3;
  sp.monomial = MultiIndex{1, 2, 0};
  KernelTerm g;
  g.alpha = MultiIndex(3);
  KernelTerm dg;
  dg.alpha = MultiIndex::unit(3, 0);
  sp.factors = {{g, 1.0}, {dg, 0.5}};
  const auto r = integrate(sp);
  // polynomial-times-Gaussian integrands converge superexponentially: the
  // doubling estimate must bound the true error against the closed form
  const double truth = -std::sqrt(6.0 * kPi) / (81.0 * kPi * kPi);
  CHECK(std::abs(r.value - truth) <= std::max(r.err_est, 1e-13 * std::abs(truth)));
}

TEST_CASE("tolerance below the floor is rejected") {
  IntegralSpec sp;
  sp.n = 2;
  sp.monomial = MultiIndex(2);
  KernelTerm g;
  g.alpha = MultiIndex(2);
  sp.factors = {{g, 1.0}};
  sp.tol = 1e-14;
  CHECK_THROWS(integrate(sp));
}
