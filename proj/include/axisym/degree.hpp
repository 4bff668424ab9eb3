#pragma once

// Topological degree of an axisymmetric map over a cell region, by three
// mechanisms that the tests play against each other:
//   * signed preimage counting (Newton inversion of bilinear patches),
//   * signed triangle rasterization onto an image grid (the
//     change-of-variables form, giving a per-cell degree field),
//   * boundary quadrature of (g(u)) . (cof Du nu) (the pairing form that
//     needs only boundary data).
// The region geometry is the piecewise-bilinear surface through the map
// sampled at cell corners; edges of the region that lie on the symmetry
// axis carry no revolved area and are not part of the boundary.

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

#include "axisym/grid.hpp"

namespace axisym {

/// Raised when a preimage-count query sits too close to the image of the
/// region boundary, where the degree is not defined.
struct DegreeUndefinedError : std::runtime_error {
  double dist;  ///< achieved distance to the boundary polyline image
  explicit DegreeUndefinedError(double d)
      : std::runtime_error(
            "degree undefined: query point is within one grid spacing of "
            "the boundary image (distance " +
            std::to_string(d) + ")"),
        dist(d) {}
};

using IntField = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic>;

/// Per-cell degree raster on an image grid. `valid` is false within 1.5
/// image-cell diagonals of the rasterized boundary image, where the
/// rasterized count smears.
struct DegreeGrid {
  GridPtr grid;     ///< image grid (all cells, no region labels used)
  IntField degree;  ///< signed cover count per cell
  BoolMask valid;
};

/// Mask of image cells where the degree is nonzero (the open set the map
/// covers, up to grid resolution).
struct TopImage {
  GridPtr grid;
  BoolMask mask;
  BoolMask valid;
};

/// Axisymmetric image-side vector field (components along e_s and e_y as
/// functions of (s, y3)); used by the pairing form of the degree.
struct ImageVectorField {
  std::function<double(double, double)> gs;
  std::function<double(double, double)> gy;
};

/// All-interior grid over [0, s_max] x [y_min, y_max] used as an image
/// raster target.
GridPtr make_image_grid(int ns, int ny, double s_max, double y_min, double y_max);

/// Image grid sized to the map's own image with a small margin.
GridPtr default_image_grid(const AxisymMap& m, int n);

/// Signed count of preimages of image point (ys, yy) inside the cell
/// region U: Newton inversion on every bilinear corner patch, each root
/// contributing the sign of the local Jacobian. Throws
/// DegreeUndefinedError when the point is within max(h_r, h_z) of the
/// image of the region boundary.
int degree_preimage(const AxisymMap& m, const BoolMask& region, double ys,
                    double yy);

/// Batch form of degree_preimage: builds the patch geometry once and
/// answers every query against it.
std::vector<int> degree_preimages(const AxisymMap& m, const BoolMask& region,
                                  const std::vector<Eigen::Vector2d>& ys);

/// Per-cell degree field by signed rasterization of the corner patches
/// split into triangles.
DegreeGrid degree_field(const AxisymMap& m, const BoolMask& region,
                        GridPtr image_grid);

/// Boundary-quadrature pairing: integral over the revolved boundary of
/// region U of (g(u)) . (cof Du nu) with reference area weight 2 pi r.
/// For div g = 1 this is the signed volume of the covered image.
double degree_integral(const AxisymMap& m, const BoolMask& region,
                       const ImageVectorField& g, int quad_per_edge = 4);

/// Cells with nonzero rasterized degree, validity propagated.
TopImage topological_image(const AxisymMap& m, const BoolMask& region,
                           GridPtr image_grid);

/// Image of the axis segment: the body's covered set minus the union of
/// covered sets of the off-axis exhaustion {r > delta_k}, delta_k dyadic
/// down to 2 h_r. What remains is the part of the image created at the
/// axis (plus an O(h) halo).
TopImage image_of_L(const AxisymMap& m, GridPtr image_grid);

/// Weighted area (2 pi s ds dy) of a mask on its grid.
double mask_area(const TopImage& im);

}  // namespace axisym
