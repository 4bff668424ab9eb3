#pragma once

// Per-cell differential data of an axisymmetric map: the four partials of
// the generating pair, the planar determinant, and the assembled 3x3
// matrices in matched cylindrical frames. The finite-difference stencil
// chooser is exposed so the energy gradient can use the exact same taps.

#include <Eigen/Dense>

#include "axisym/grid.hpp"
#include "axisym/kernels.hpp"

namespace axisym {

/// One-dimensional derivative stencil: f'(k) ~ c0 f(k0) + c1 f(k1).
/// Zero-coefficient taps mean the derivative is undefined there (no
/// in-domain neighbor); callers treat the derivative as 0.
struct DiffStencil {
  int k0 = 0, k1 = 0;
  double c0 = 0.0, c1 = 0.0;
};

/// Stencil for d/dr (radial = true) or d/dx3 at cell (i, j): central where
/// both neighbors carry data, one-sided at the edge of the domain union.
DiffStencil diff_stencil(const AxisymGrid& g, int i, int j, bool radial);

/// SoA per-cell Jacobian data. Arrays are zero on cells outside the
/// domain union; consumers skip those.
struct JacobianField {
  GridPtr grid;
  Eigen::ArrayXXd d1r, d1z;   // partials of v1
  Eigen::ArrayXXd d2r, d2z;   // partials of v2
  Eigen::ArrayXXd ratio;      // v1 / r at the cell center
  Eigen::ArrayXXd det2;       // planar det of the generating map
  Eigen::ArrayXXd det3;       // (v1/r) * det2 = det of the 3D matrix

  Eigen::Matrix3d matrix(int i, int j) const {
    return cyl_differential(d1r(i, j), d1z(i, j), d2r(i, j), d2z(i, j),
                            ratio(i, j));
  }
  Eigen::Matrix3d cofactor(int i, int j) const {
    return cyl_cofactor(d1r(i, j), d1z(i, j), d2r(i, j), d2z(i, j),
                        ratio(i, j));
  }
  /// |Du|^2 = |Dv|^2 + (v1/r)^2 at the cell.
  double frobenius_sq(int i, int j) const {
    const double a = d1r(i, j), b = d1z(i, j), c = d2r(i, j), d = d2z(i, j);
    return a * a + b * b + c * c + d * d + ratio(i, j) * ratio(i, j);
  }
};

/// Differentiate the map on every in-domain cell.
JacobianField cyl_jacobian(const AxisymMap& m);

}  // namespace axisym
