#pragma once

// Cell-centered tensor grids on the (r, x3) half-plane and the region
// labeling (interior / Dirichlet collar / outside) used by every field
// operation. Cell centers sit at r_i = (i + 1/2) h_r so no sample ever
// lands on the symmetry axis.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>

namespace axisym {

enum class Region : std::uint8_t { Interior = 0, Dirichlet = 1, Outside = 2 };

using RegionMask = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
using BoolMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Cell-centered grid over [0, r_max] x [z_min, z_max] with per-cell
/// region labels. Index convention: (i, j) = (radial, axial).
struct AxisymGrid {
  int nr = 0;
  int nz = 0;
  double r_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  double h_r = 0.0;
  double h_z = 0.0;
  RegionMask mask;  // nr x nz

  double r(int i) const { return (i + 0.5) * h_r; }
  double z(int j) const { return z_min + (j + 0.5) * h_z; }
  Region region(int i, int j) const { return static_cast<Region>(mask(i, j)); }
  bool in_bounds(int i, int j) const {
    return i >= 0 && i < nr && j >= 0 && j < nz;
  }
  /// True when the cell carries map data (interior or Dirichlet collar).
  bool in_domain(int i, int j) const {
    return in_bounds(i, j) && region(i, j) != Region::Outside;
  }
  bool interior(int i, int j) const {
    return in_bounds(i, j) && region(i, j) == Region::Interior;
  }
};

using GridPtr = std::shared_ptr<const AxisymGrid>;

/// Build a grid with the region of each cell chosen by `label(r, z)`.
/// Throws std::invalid_argument on degenerate extents/counts or if some
/// interior cell has an outside 4-neighbor (stencils would lack data).
GridPtr make_grid(int nr, int nz, double r_max, double z_min, double z_max,
                  const std::function<Region(double, double)>& label);

/// Default working geometry: body {r<1, |x3|<1} inside the enlarged box
/// {r<1.25, |x3|<1.25}; the frame between them is the Dirichlet collar.
GridPtr make_collar_grid(int nr, int nz);

/// Unit cylinder {r<1, |x3|<1}, every cell interior (pure quadrature use).
GridPtr make_cylinder_grid(int nr, int nz);

/// Mask helpers.
BoolMask interior_mask(const AxisymGrid& g);
BoolMask domain_mask(const AxisymGrid& g);  // interior + Dirichlet

/// Generating map (v1, v2) stored per cell. v1 is the radial image
/// coordinate (kept >= 0), v2 the axial one.
struct AxisymMap {
  GridPtr grid;
  Eigen::ArrayXXd v1;  // nr x nz
  Eigen::ArrayXXd v2;  // nr x nz
};

/// v = (r, x3) on every cell.
AxisymMap identity_map(GridPtr grid);

/// Fill a map from closed forms v1 = f1(r,z), v2 = f2(r,z).
AxisymMap map_from_functions(
    GridPtr grid, const std::function<double(double, double)>& f1,
    const std::function<double(double, double)>& f2);

/// Structural validation: shapes match, v1 >= -tol everywhere.
/// Throws std::invalid_argument with a description on failure.
void validate_map(const AxisymMap& m);

/// Bilinearly interpolated map values at an arbitrary half-plane point.
/// Below the first radial cell center the stencil reflects across the
/// axis with the parity of an axisymmetric map (v1 odd, v2 even); in the
/// half-cell margin next to the other extents it extrapolates linearly.
/// Throws std::domain_error outside [0, r_max] x [z_min, z_max].
Eigen::Vector2d sample_map(const AxisymMap& m, double r, double z);

/// Evaluate the full 3D deformation at cylindrical point (r, theta, x3):
/// (v1 cos(theta), v1 sin(theta), v2) with interpolated v1, v2.
Eigen::Vector3d lift_to_3d(const AxisymMap& m, double r, double theta,
                           double z);

/// lift_to_3d at a Cartesian point (x, y, z).
Eigen::Vector3d lift_at_cartesian(const AxisymMap& m,
                                  const Eigen::Vector3d& p);

}  // namespace axisym
