#pragma once

// Inverse-deformation reconstruction on an image grid and the total
// variation split of its components. The forward map is supersampled and
// scattered into image cells; per-cell means of the reference coordinates
// reconstruct the inverse; cells the image never reaches are filled from
// their nearest sampled neighbor. Because straddling cells average
// samples from both sides of an interface, reconstructed jumps arrive
// antialiased, which is exactly what the isotropic discrete TV needs to
// converge on curved jump surfaces.

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "axisym/energy.hpp"
#include "axisym/grid.hpp"

namespace axisym {

/// Raised when the image grid is too fine for the scatter to populate it
/// (more than half of the cells receive no sample).
struct ResolutionError : std::runtime_error {
  double empty_fraction;
  explicit ResolutionError(double f)
      : std::runtime_error("image grid too fine: " +
                           std::to_string(100.0 * f) +
                           "% of cells received no forward sample"),
        empty_fraction(f) {}
  ResolutionError(const std::string& msg, double f)
      : std::runtime_error(msg), empty_fraction(f) {}
};

/// Raised when a consumer needs a fully populated field but finds cells
/// that are neither sampled nor filled.
struct IncompleteFieldError : std::runtime_error {
  IncompleteFieldError()
      : std::runtime_error("image field has EMPTY cells; fill it first") {}
};

enum class FillState : std::uint8_t { Empty = 0, Sampled = 1, Filled = 2 };

enum class InverseComponent { Radial, Axial };  // v1^{-1} or v2^{-1}

// Same alias as in degree.hpp; identical redeclarations are harmless.
using IntField = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic>;

struct ImageField {
  GridPtr grid;               ///< image grid over (s, y3)
  Eigen::ArrayXXd inv1, inv2; ///< reconstructed inverse generating pair
  Eigen::ArrayXXd ac_axial;   ///< transported |grad v2^{-1}| density
  Eigen::ArrayXXd ac_radial;  ///< transported |grad v1^{-1}| density
  IntField occupancy;
  Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> state;
  BoolMask multi;             ///< reference spread in a cell >> grid spacing
  double empty_fraction = 0.0;
  bool any_multi = false;

  FillState fill_state(int i, int j) const {
    return static_cast<FillState>(state(i, j));
  }
};

/// Forward-scatter reconstruction. `supersample` is the per-axis
/// subsample count inside every reference cell (default 3, i.e. 9
/// samples per cell). Throws ResolutionError when > 50% of the image
/// cells stay empty; otherwise empty cells are filled from their nearest
/// sampled neighbor (value and transported densities alike).
ImageField build_inverse_field(const AxisymMap& m, GridPtr image_grid,
                               int supersample = 3);

/// All-interior image raster over the reference box, image_n cells per
/// axis (0 = match the reference resolution).
GridPtr inverse_image_grid(const AxisymGrid& ref, int image_n = 0);

/// Per-axis subsample count that keeps every image cell reachable from
/// the scatter (>= 3 samples per image cell per axis, clamped to [3, 15]).
/// A positive `requested` wins.
int inverse_supersample(const AxisymGrid& ref, const AxisymGrid& image,
                        int requested = 0);

/// Reference-side absolutely continuous mass of the axial inverse
/// component: 2 pi * sum v1 * hypot(d1r, d1z) * h_r * h_z over the masked
/// cells -- the change-of-variables value of the image-side integral of
/// |grad v2^{-1}|.
double ac_mass(const AxisymMap& m, const BoolMask& region);
double ac_mass(const AxisymMap& m);  // over the full domain union

/// Discrete total variation of a reconstructed component, weighted by
/// 2 pi s. The isotropic form is authoritative; the anisotropic (L1)
/// form is diagnostic. Throws IncompleteFieldError on EMPTY cells.
struct TVResult {
  double iso = 0.0;
  double aniso = 0.0;
};
TVResult total_variation(const ImageField& f, InverseComponent c);

/// The TV split driving the augmented functional F.
struct TVEstimate {
  double total = 0.0;          ///< isotropic TV of v2^{-1} over the image box
  double ac_part = 0.0;        ///< reference-side AC mass
  double singular_part = 0.0;  ///< max(total - ac_part, 0)
  double total_aniso = 0.0;    ///< diagnostic companion of `total`
  GridPtr image_grid;
  BoolMask support_mask;  ///< cells whose TV density outruns the AC density 3x
};

/// Full pipeline: scatter onto an image grid spanning the map's own
/// extents (image_n cells per axis; 0 = match the reference resolution),
/// take the isotropic TV of v2^{-1}, subtract the reference AC mass.
/// `supersample` 0 picks enough samples per axis to cover the image
/// cells (at least 3 per axis).
TVEstimate singular_split(const AxisymMap& m, int image_n = 0,
                          int supersample = 0);

/// energy_with_singular fed from a TV split (F = E + 2 * singular).
inline EnergyBreakdown energy_F(const AxisymMap& m, const TVEstimate& tv,
                                EnergyDomain dom = EnergyDomain::Body) {
  return energy_with_singular(m, tv.singular_part, dom);
}

/// The same TV-vs-AC comparison for the radial component v1^{-1}, whose
/// continuum counterpart stays Sobolev for maps in the admissible class;
/// a persistent residual flags maps outside it.
struct HorizontalReport {
  double total = 0.0;
  double ac_part = 0.0;
  double residual = 0.0;  ///< max(total - ac_part, 0)
  bool flagged = false;   ///< residual exceeds 5% of ac_part + 0.02
};
HorizontalReport horizontal_sobolev_check(const AxisymMap& m, int image_n = 0,
                                          int supersample = 0);

}  // namespace axisym
