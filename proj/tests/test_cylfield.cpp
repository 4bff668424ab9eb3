#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "axisym/grid.hpp"
#include "axisym/jacobian.hpp"
#include "axisym/kernels.hpp"
#include "builders.hpp"
#include "oracles.hpp"

using namespace axisym;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("grid construction and labeling") {
  auto g = make_collar_grid(40, 40);
  CHECK(g->nr == 40);
  CHECK(g->h_r == doctest::Approx(1.25 / 40).epsilon(1e-15));
  CHECK(g->r(0) == doctest::Approx(0.5 * g->h_r));
  CHECK(g->z(0) == doctest::Approx(-1.25 + 0.5 * g->h_z));
  // A cell well inside the body vs one in the frame.
  CHECK(g->region(0, 20) == Region::Interior);
  CHECK(g->region(39, 20) == Region::Dirichlet);
  CHECK(g->region(20, 0) == Region::Dirichlet);
  CHECK_FALSE(g->in_bounds(40, 0));
  CHECK(g->in_domain(39, 39));

  auto cyl = make_cylinder_grid(16, 24);
  for (int j = 0; j < cyl->nz; ++j)
    for (int i = 0; i < cyl->nr; ++i) CHECK(cyl->region(i, j) == Region::Interior);

  CHECK_THROWS_AS(make_grid(1, 8, 1, -1, 1, [](double, double) {
                    return Region::Interior;
                  }),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 8, -1, -1, 1, [](double, double) {
                    return Region::Interior;
                  }),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 8, 1, 1, -1, [](double, double) {
                    return Region::Interior;
                  }),
                  std::invalid_argument);
  // An interior cell with an outside 4-neighbor must be rejected: stencils
  // would have no data to read.
  CHECK_THROWS_AS(make_grid(8, 8, 1, -1, 1,
                            [](double r, double) {
                              return r < 0.5 ? Region::Interior : Region::Outside;
                            }),
                  std::invalid_argument);
}

TEST_CASE("identity map has identity differential everywhere") {
  auto g = make_collar_grid(33, 47);  // odd sizes: no special alignment
  const AxisymMap id = identity_map(g);
  const JacobianField jac = cyl_jacobian(id);
  for (int j = 0; j < g->nz; ++j)
    for (int i = 0; i < g->nr; ++i) {
      if (!g->in_domain(i, j)) continue;
      CHECK(jac.matrix(i, j).isApprox(Eigen::Matrix3d::Identity(), 1e-13));
      CHECK(jac.cofactor(i, j).isApprox(Eigen::Matrix3d::Identity(), 1e-13));
      CHECK(jac.det3(i, j) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(jac.frobenius_sq(i, j) == doctest::Approx(3.0).epsilon(1e-13));
    }
}

TEST_CASE("vertical shear map fills the expected matrix slots") {
  auto g = make_cylinder_grid(32, 32);
  const AxisymMap m = map_from_functions(
      g, [](double r, double) { return r; },
      [](double r, double z) { return z + r; });
  const JacobianField jac = cyl_jacobian(m);
  const int i = 10, j = 20;
  const Eigen::Matrix3d du = jac.matrix(i, j);
  CHECK(du(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(du(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(du(2, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(du(2, 0) == doctest::Approx(1.0).epsilon(1e-12));  // d v2 / d r
  CHECK(du(0, 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(jac.det2(i, j) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(jac.det3(i, j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form cofactor matches the minor-expansion oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    const double d1r = u(rng), d1z = u(rng), d2r = u(rng), d2z = u(rng);
    const double ratio = std::abs(u(rng)) + 0.1;
    const Eigen::Matrix3d a = cyl_differential(d1r, d1z, d2r, d2z, ratio);
    const Eigen::Matrix3d want = oracle::cofactor_minors(a);
    CHECK(cyl_cofactor(d1r, d1z, d2r, d2z, ratio).isApprox(want, 1e-13));
    CHECK(cofactor3(a).isApprox(want, 1e-13));
  }
  for (int k = 0; k < 500; ++k) {
    Eigen::Matrix3d a;
    for (int e = 0; e < 9; ++e) a(e / 3, e % 3) = u(rng);
    CHECK(cofactor3(a).isApprox(oracle::cofactor_minors(a), 1e-12));
  }
}

TEST_CASE("norm-vs-cofactor inequality holds on random matrices, tight at I") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 10000; ++k) {
    Eigen::Matrix3d a;
    for (int e = 0; e < 9; ++e) a(e / 3, e % 3) = u(rng);
    CHECK(check_norm_cofactor(a).holds);
  }
  const auto at_id = check_norm_cofactor(Eigen::Matrix3d::Identity());
  CHECK(std::abs(at_id.lhs - at_id.rhs) < 1e-12);  // 3 == sqrt(3)*sqrt(3)
}

TEST_CASE("interpolation reproduces stored values and bilinear data") {
  auto g = make_cylinder_grid(24, 24);
  const auto pair = builders::smooth_pair(5);
  const AxisymMap m = builders::realize(g, pair);
  for (int j = 0; j < g->nz; j += 5)
    for (int i = 0; i < g->nr; i += 5) {
      const Eigen::Vector2d got = sample_map(m, g->r(i), g->z(j));
      CHECK(got.x() == doctest::Approx(m.v1(i, j)).epsilon(1e-14));
      CHECK(got.y() == doctest::Approx(m.v2(i, j)).epsilon(1e-14));
    }

  // Exactly bilinear data away from the axis reflection zone must be
  // reproduced to rounding, since the scheme is bilinear.
  const AxisymMap bl = map_from_functions(
      g, [](double r, double z) { return 1.0 + 0.3 * r + 0.1 * z + 0.05 * r * z; },
      [](double r, double z) { return 0.2 - 0.15 * r + 0.4 * z + 0.02 * r * z; });
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(2.0 * g->h_r, 1.0 - g->h_r);
  std::uniform_real_distribution<double> uz(-1.0 + g->h_z, 1.0 - g->h_z);
  for (int k = 0; k < 200; ++k) {
    const double r = ur(rng), z = uz(rng);
    const Eigen::Vector2d got = sample_map(bl, r, z);
    CHECK(got.x() ==
          doctest::Approx(1.0 + 0.3 * r + 0.1 * z + 0.05 * r * z).epsilon(1e-13));
    CHECK(got.y() ==
          doctest::Approx(0.2 - 0.15 * r + 0.4 * z + 0.02 * r * z).epsilon(1e-13));
  }
}

TEST_CASE("interpolation converges to the closed form, including near the axis") {
  auto g = make_cylinder_grid(128, 128);
  const auto pair = builders::smooth_pair(3);
  const AxisymMap m = builders::realize(g, pair);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  std::uniform_real_distribution<double> uz(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double r = (k % 4 == 0) ? ur(rng) * g->h_r : ur(rng);  // bias to axis
    const double z = uz(rng);
    const Eigen::Vector2d got = sample_map(m, r, z);
    worst = std::max(worst, std::abs(got.x() - pair.f1(r, z)));
    worst = std::max(worst, std::abs(got.y() - pair.f2(r, z)));
  }
  CHECK(worst < 2e-4);  // O(h^2) for h = 1/128 with O(1) curvature

  // On the axis itself the radial image component must vanish by symmetry.
  CHECK(std::abs(sample_map(m, 0.0, 0.3).x()) < 1e-15);
}

TEST_CASE("sampling outside the grid extents is a hard error") {
  auto g = make_cylinder_grid(8, 8);
  const AxisymMap m = identity_map(g);
  CHECK_THROWS_AS(sample_map(m, -0.01, 0.0), std::domain_error);
  CHECK_THROWS_AS(sample_map(m, 1.01, 0.0), std::domain_error);
  CHECK_THROWS_AS(sample_map(m, 0.5, -1.01), std::domain_error);
  CHECK_THROWS_AS(sample_map(m, 0.5, 1.01), std::domain_error);
  CHECK_NOTHROW(sample_map(m, 0.0, -1.0));
  CHECK_NOTHROW(sample_map(m, 1.0, 1.0));
}

TEST_CASE("3D lift: rotation of the generating pair") {
  auto g = make_cylinder_grid(64, 64);
  const AxisymMap id = identity_map(g);
  const Eigen::Vector3d a = lift_to_3d(id, 0.5, kPi / 2.0, 0.2);
  CHECK(a.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a.y() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a.z() == doctest::Approx(0.2).epsilon(1e-12));

  const AxisymMap twice = map_from_functions(
      g, [](double r, double) { return 2.0 * r; },
      [](double, double z) { return z; });
  const Eigen::Vector3d b = lift_to_3d(twice, 0.3, 0.0, 0.0);
  CHECK(b.x() == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(b.y() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.z() == doctest::Approx(0.0).epsilon(1e-12));

  // Cartesian entry point agrees with the closed-form 3D lift.
  const auto pair = builders::smooth_pair(17);
  const AxisymMap m = builders::realize(make_cylinder_grid(128, 128), pair);
  const auto u3 = oracle::lift_closed_form(pair.f1, pair.f2);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector3d p(u(rng), u(rng), u(rng));
    CHECK((lift_at_cartesian(m, p) - u3(p)).norm() < 5e-4);
  }
}

TEST_CASE("map validation rejects malformed data") {
  auto g = make_cylinder_grid(8, 8);
  AxisymMap m = identity_map(g);
  CHECK_NOTHROW(validate_map(m));
  m.v1(3, 3) = -0.5;
  CHECK_THROWS_AS(validate_map(m), std::invalid_argument);
  AxisymMap bad = identity_map(g);
  bad.v2.resize(4, 8);
  CHECK_THROWS_AS(validate_map(bad), std::invalid_argument);
}

TEST_CASE("derivative stencils: central in the bulk, one-sided at edges") {
  auto g = make_collar_grid(20, 20);
  const DiffStencil mid = diff_stencil(*g, 10, 10, true);
  CHECK(mid.k0 == 9);
  CHECK(mid.k1 == 11);
  CHECK(mid.c0 == doctest::Approx(-0.5 / g->h_r));
  CHECK(mid.c1 == doctest::Approx(+0.5 / g->h_r));

  const DiffStencil axis = diff_stencil(*g, 0, 10, true);  // no cell below axis
  CHECK(axis.k0 == 0);
  CHECK(axis.k1 == 1);
  CHECK(axis.c0 == doctest::Approx(-1.0 / g->h_r));

  const DiffStencil top = diff_stencil(*g, 10, 19, false);
  CHECK(top.k0 == 18);
  CHECK(top.k1 == 19);

  // A lone cell with no in-domain neighbor in a direction gets the
  // zero stencil (derivative treated as 0).
  auto lone = make_grid(3, 3, 1.0, -1.0, 1.0, [](double r, double z) {
    return (r < 1.0 / 3.0 && z < -1.0 / 3.0) ? Region::Dirichlet : Region::Outside;
  });
  const DiffStencil none = diff_stencil(*lone, 0, 0, true);
  CHECK(none.c0 == 0.0);
  CHECK(none.c1 == 0.0);
}
