#include "axisym/grid.hpp"

#include <cmath>
#include <string>

namespace axisym {

GridPtr make_grid(int nr, int nz, double r_max, double z_min, double z_max,
                  const std::function<Region(double, double)>& label) {
  if (nr < 2 || nz < 2)
    throw std::invalid_argument("grid: need at least 2 cells per direction");
  if (!(r_max > 0.0) || !(z_max > z_min))
    throw std::invalid_argument("grid: degenerate extents");

  auto g = std::make_shared<AxisymGrid>();
  g->nr = nr;
  g->nz = nz;
  g->r_max = r_max;
  g->z_min = z_min;
  g->z_max = z_max;
  g->h_r = r_max / nr;
  g->h_z = (z_max - z_min) / nz;
  g->mask.resize(nr, nz);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nz; ++j)
      g->mask(i, j) = static_cast<std::uint8_t>(label(g->r(i), g->z(j)));

  // Interior cells must never touch an outside cell: derivative stencils
  // and boundary freezing both assume data exists on all 4-neighbors that
  // are inside the array.
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nz; ++j) {
      if (g->region(i, j) != Region::Interior) continue;
      const int di[4] = {1, -1, 0, 0};
      const int dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int ii = i + di[k], jj = j + dj[k];
        if (g->in_bounds(ii, jj) && g->region(ii, jj) == Region::Outside)
          throw std::invalid_argument(
              "grid: interior cell (" + std::to_string(i) + "," +
              std::to_string(j) + ") touches an outside cell");
      }
    }
  }
  return g;
}

GridPtr make_collar_grid(int nr, int nz) {
  return make_grid(nr, nz, 1.25, -1.25, 1.25, [](double r, double z) {
    return (r < 1.0 && std::abs(z) < 1.0) ? Region::Interior
                                          : Region::Dirichlet;
  });
}

GridPtr make_cylinder_grid(int nr, int nz) {
  return make_grid(nr, nz, 1.0, -1.0, 1.0,
                   [](double, double) { return Region::Interior; });
}

BoolMask interior_mask(const AxisymGrid& g) {
  BoolMask m(g.nr, g.nz);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) m(i, j) = g.interior(i, j);
  return m;
}

BoolMask domain_mask(const AxisymGrid& g) {
  BoolMask m(g.nr, g.nz);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) m(i, j) = g.in_domain(i, j);
  return m;
}

AxisymMap identity_map(GridPtr grid) {
  AxisymMap m;
  m.grid = std::move(grid);
  const auto& g = *m.grid;
  m.v1.resize(g.nr, g.nz);
  m.v2.resize(g.nr, g.nz);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) {
      m.v1(i, j) = g.r(i);
      m.v2(i, j) = g.z(j);
    }
  return m;
}

AxisymMap map_from_functions(
    GridPtr grid, const std::function<double(double, double)>& f1,
    const std::function<double(double, double)>& f2) {
  AxisymMap m;
  m.grid = std::move(grid);
  const auto& g = *m.grid;
  m.v1.resize(g.nr, g.nz);
  m.v2.resize(g.nr, g.nz);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) {
      m.v1(i, j) = f1(g.r(i), g.z(j));
      m.v2(i, j) = f2(g.r(i), g.z(j));
    }
  return m;
}

void validate_map(const AxisymMap& m) {
  if (!m.grid) throw std::invalid_argument("map: null grid");
  const auto& g = *m.grid;
  if (m.v1.rows() != g.nr || m.v1.cols() != g.nz || m.v2.rows() != g.nr ||
      m.v2.cols() != g.nz)
    throw std::invalid_argument("map: field shape does not match grid");
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j)
      if (g.in_domain(i, j) && m.v1(i, j) < -1e-12)
        throw std::invalid_argument("map: negative radial value at cell (" +
                                    std::to_string(i) + "," +
                                    std::to_string(j) + ")");
}

Eigen::Vector2d sample_map(const AxisymMap& m, double r, double z) {
  const auto& g = *m.grid;
  const double tol = 1e-12 * (1.0 + std::abs(g.r_max) + std::abs(g.z_max));
  if (r < -tol || r > g.r_max + tol || z < g.z_min - tol || z > g.z_max + tol)
    throw std::domain_error("sample_map: point outside grid extents");

  // Fractional cell coordinates relative to cell centers.
  const double a = r / g.h_r - 0.5;
  const double b = (z - g.z_min) / g.h_z - 0.5;
  // i0 = -1 selects the reflected ghost column across the axis; at the
  // remaining extents the clamped index pair extrapolates linearly over
  // at most half a cell.
  int i0 = static_cast<int>(std::floor(a));
  int j0 = static_cast<int>(std::floor(b));
  i0 = std::max(-1, std::min(i0, g.nr - 2));
  j0 = std::max(0, std::min(j0, g.nz - 2));
  const double ta = a - i0;
  const double tb = b - j0;

  auto value = [&](int i, int j) -> Eigen::Vector2d {
    if (i >= 0) return {m.v1(i, j), m.v2(i, j)};
    // Axis reflection: v1 is odd, v2 even across r = 0.
    return {-m.v1(0, j), m.v2(0, j)};
  };
  const Eigen::Vector2d f00 = value(i0, j0), f10 = value(i0 + 1, j0);
  const Eigen::Vector2d f01 = value(i0, j0 + 1), f11 = value(i0 + 1, j0 + 1);
  return (1 - ta) * (1 - tb) * f00 + ta * (1 - tb) * f10 +
         (1 - ta) * tb * f01 + ta * tb * f11;
}

Eigen::Vector3d lift_to_3d(const AxisymMap& m, double r, double theta,
                           double z) {
  const Eigen::Vector2d v = sample_map(m, r, z);
  return {v[0] * std::cos(theta), v[0] * std::sin(theta), v[1]};
}

Eigen::Vector3d lift_at_cartesian(const AxisymMap& m,
                                  const Eigen::Vector3d& p) {
  const double r = std::hypot(p[0], p[1]);
  const double theta = std::atan2(p[1], p[0]);
  return lift_to_3d(m, r, theta, p[2]);
}

}  // namespace axisym
