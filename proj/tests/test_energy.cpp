#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "axisym/energy.hpp"
#include "axisym/grid.hpp"
#include "axisym/jacobian.hpp"
#include "builders.hpp"
#include "oracles.hpp"

using namespace axisym;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("volumetric penalty: value, slope, convexity") {
  CHECK(VolumetricPenalty::value(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  const double tmin = std::cbrt(0.5);
  CHECK(VolumetricPenalty::deriv(tmin) == doctest::Approx(0.0).epsilon(1e-13));
  for (double t : {0.05, 0.3, 1.0, 2.5, 10.0}) {
    CHECK(VolumetricPenalty::second(t) > 0.0);
    // finite-difference agreement of the derivative
    const double e = 1e-6;
    const double fd =
        (VolumetricPenalty::value(t + e) - VolumetricPenalty::value(t - e)) /
        (2 * e);
    CHECK(VolumetricPenalty::deriv(t) == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK(VolumetricPenalty::value(1e-4) > 1e3);  // blow-up as t -> 0+
}

TEST_CASE("identity energies on the exact cylinder tiling") {
  auto g = make_cylinder_grid(96, 96);
  const AxisymMap id = identity_map(g);
  // |Du|^2 = 3 and H(1) = 2, so the two terms are 3 and 2 times the
  // cylinder volume 2*pi; the midpoint rule is exact for the linear
  // integrand 2*pi*r*const.
  CHECK(dirichlet_energy(id) == doctest::Approx(6.0 * kPi).epsilon(1e-12));
  CHECK(penalty_energy(id) == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  const EnergyBreakdown eb = energy_E(id);
  CHECK(eb.E == doctest::Approx(10.0 * kPi).epsilon(1e-12));
  CHECK(eb.E == doctest::Approx(eb.dirichlet + eb.h_term).epsilon(1e-15));
  CHECK(eb.F == doctest::Approx(eb.E).epsilon(1e-15));
  CHECK(eb.singular_tv == 0.0);
}

TEST_CASE("identity energies on the collar grid, both domains") {
  auto g = make_collar_grid(128, 128);
  const AxisymMap id = identity_map(g);
  // The full box is the cylinder r < 1.25, |x3| < 1.25 tiled exactly.
  const double full = 5.0 * kPi * 1.25 * 1.25 * 2.5;
  CHECK(energy_E(id, EnergyDomain::Full).E ==
        doctest::Approx(full).epsilon(1e-12));
  // The interior is the r < 1, |x3| < 1 body up to half-cell raggedness.
  const double body = energy_E(id, EnergyDomain::Body).E;
  CHECK(body == doctest::Approx(10.0 * kPi).epsilon(0.02));
  CHECK(body < energy_E(id, EnergyDomain::Full).E);
}

TEST_CASE("masked quadrature edge cases") {
  auto g = make_cylinder_grid(16, 16);
  const AxisymMap id = identity_map(g);
  BoolMask none = BoolMask::Constant(16, 16, false);
  CHECK(dirichlet_energy(id, none) == 0.0);
  CHECK(penalty_energy(id, none) == 0.0);
  BoolMask wrong = BoolMask::Constant(8, 16, true);
  CHECK_THROWS_AS(dirichlet_energy(id, wrong), std::invalid_argument);
  CHECK_THROWS_AS(energy_with_singular(id, -1.0), std::invalid_argument);
  // Half mask is strictly between zero and the total.
  BoolMask half = BoolMask::Constant(16, 16, false);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 16; ++i) half(i, j) = true;
  const double part = dirichlet_energy(id, half);
  CHECK(part > 0.0);
  CHECK(part < dirichlet_energy(id));
}

TEST_CASE("orientation reversal is reported with the offending cell") {
  auto g = make_cylinder_grid(12, 12);
  const AxisymMap flip = map_from_functions(
      g, [](double r, double) { return r; },
      [](double, double z) { return -z; });
  CHECK_THROWS_AS(penalty_energy(flip), OrientationError);
  try {
    penalty_energy(flip);
  } catch (const OrientationError& e) {
    CHECK(e.det < 0.0);
    CHECK(e.i >= 0);
    CHECK(e.i < 12);
    CHECK(e.j >= 0);
    CHECK(e.j < 12);
  }
  // Dirichlet term is orientation-agnostic and still integrates.
  CHECK(dirichlet_energy(flip) == doctest::Approx(6.0 * kPi).epsilon(1e-12));
}

TEST_CASE("cylindrical reduction matches brute-force 3D quadrature") {
  // Identity first: the 3D box oracle must hit the known closed values.
  const auto id3 = oracle::lift_closed_form(
      [](double r, double) { return r; }, [](double, double z) { return z; });
  const oracle::BoxEnergy box_id = oracle::box_energy(id3, 64);
  CHECK(box_id.volume == doctest::Approx(2.0 * kPi).epsilon(2e-3));
  CHECK(box_id.dirichlet == doctest::Approx(6.0 * kPi).epsilon(5e-3));
  CHECK(box_id.h_term == doctest::Approx(4.0 * kPi).epsilon(5e-3));

  // Then a nontrivial smooth map: grid route vs box route.
  const auto pair = builders::smooth_pair(11);
  const AxisymMap m = builders::realize(make_cylinder_grid(96, 96), pair);
  const oracle::BoxEnergy box =
      oracle::box_energy(oracle::lift_closed_form(pair.f1, pair.f2), 64);
  CHECK(dirichlet_energy(m) == doctest::Approx(box.dirichlet).epsilon(0.01));
  CHECK(penalty_energy(m) == doctest::Approx(box.h_term).epsilon(0.01));
}

TEST_CASE("norm-vs-cofactor field check across map families") {
  auto g = make_cylinder_grid(48, 48);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const AxisymMap m = builders::realize(g, builders::rough_pair(s));
    const Sqrt3Check chk = check_sqrt3(cyl_jacobian(m));
    CHECK(chk.holds);
    CHECK(chk.violations == 0);
  }
  const Sqrt3Check at_id = check_sqrt3(cyl_jacobian(identity_map(g)));
  CHECK(at_id.holds);
  CHECK(at_id.min_margin == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("axial cofactor bound and its near-extremal family") {
  auto g = make_cylinder_grid(48, 48);
  for (std::uint64_t s = 10; s < 20; ++s) {
    const AxisymMap m = builders::realize(g, builders::rough_pair(s));
    const AdjE3Check chk = check_adj_e3(m);
    CHECK(chk.holds);
    CHECK(chk.max_ratio <= 1.0 + 1e-12);
  }
  // v = (r, eps*x3) drives the ratio to 1/(1 + eps^2/2) >= 1 - eps^2/2.
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const AxisymMap m = map_from_functions(
        g, [](double r, double) { return r; },
        [eps](double, double z) { return eps * z; });
    const AdjE3Check chk = check_adj_e3(m);
    CHECK(chk.holds);
    CHECK(chk.max_ratio ==
          doctest::Approx(1.0 / (1.0 + eps * eps / 2.0)).epsilon(1e-12));
    CHECK(chk.max_ratio >= 1.0 - eps * eps / 2.0);
  }
}

TEST_CASE("analytic gradients match finite differences") {
  auto collar = make_collar_grid(40, 40);
  const AxisymMap m = builders::realize(collar, builders::smooth_pair(21, 0.08));

  auto run = [&m](EnergyDomain dom, auto valf, auto gradf) {
    const GradCheckReport rep = grad_check(
        m, [&](const AxisymMap& q) { return valf(q); },
        [&](const AxisymMap& q) { return gradf(q); }, 1e-6, 80, 4242);
    CHECK(rep.cells_checked == 80);
    CHECK(rep.max_rel_err < 1e-5);
    (void)dom;
  };

  run(EnergyDomain::Body,
      [](const AxisymMap& q) { return dirichlet_energy(q, EnergyDomain::Body); },
      [](const AxisymMap& q) { return dirichlet_gradient(q, EnergyDomain::Body); });
  run(EnergyDomain::Body,
      [](const AxisymMap& q) { return penalty_energy(q, EnergyDomain::Body); },
      [](const AxisymMap& q) { return penalty_gradient(q, EnergyDomain::Body); });
  run(EnergyDomain::Full,
      [](const AxisymMap& q) { return energy_E(q, EnergyDomain::Full).E; },
      [](const AxisymMap& q) { return energy_gradient(q, EnergyDomain::Full); });

  // Also exercise the one-sided stencils of a grid whose edges carry
  // interior cells.
  const AxisymMap c = builders::realize(make_cylinder_grid(32, 32),
                                        builders::smooth_pair(22, 0.08));
  const GradCheckReport rep = grad_check(
      c, [](const AxisymMap& q) { return energy_E(q).E; },
      [](const AxisymMap& q) { return energy_gradient(q, EnergyDomain::Body); },
      1e-6, 80, 99);
  CHECK(rep.max_rel_err < 1e-5);
}

TEST_CASE("augmented total includes twice the singular mass") {
  auto g = make_cylinder_grid(24, 24);
  const AxisymMap id = identity_map(g);
  const EnergyBreakdown eb = energy_with_singular(id, 0.25);
  CHECK(eb.singular_tv == doctest::Approx(0.25));
  CHECK(eb.F == doctest::Approx(eb.E + 0.5).epsilon(1e-15));
  CHECK(eb.dirichlet >= 0.0);
  CHECK(eb.h_term >= 0.0);
}
