#pragma once

// Closed-form benchmark maps with known singular structure: identity,
// affine stretches, the volume-preserving point-cavitation profile, and a
// dipole construction that transports a blob of material from below the
// equator onto the inside of a sphere while the surrounding material
// wraps its outside — the reconstructed axial inverse then jumps by a
// prescribed height across that sphere. The dipole's transition layers
// (pipe wall) scale with the neck parameter, so a family with shrinking
// neck sharpens toward the singular configuration while every member
// stays smooth and orientation-preserving.

#include <vector>

#include "axisym/grid.hpp"

namespace axisym {

enum class SurrogateKind { Identity, Affine, Cavitation, Dipole };

/// Geometry knobs of the benchmark maps. Only the fields relevant to the
/// chosen kind are read.
struct SurrogateSpec {
  SurrogateKind kind = SurrogateKind::Identity;
  double bubble_radius = 0.4;  ///< dipole: radius of the jump sphere
  double jump_height = 0.3;    ///< dipole: prescribed jump of the axial inverse
  double cavity_radius = 0.3;  ///< cavitation: opened cavity radius
  double neck = 0.05;          ///< dipole: transition scale (pipe wall etc.)
  double stretch_r = 1.0;      ///< affine: radial factor
  double stretch_z = 1.0;      ///< affine: axial factor

  /// Throws std::invalid_argument when a field needed by `kind` is out of
  /// range (nonpositive lengths, dipole geometry exceeding the unit body).
  void validate() const;
};

/// Expected singular mass of the dipole's reconstructed axial inverse:
/// jump height times jump-sphere area, h * 4 pi R^2.
double dipole_jump_mass(const SurrogateSpec& spec);

/// Evaluate the surrogate map on a grid. The dipole construction needs
/// its neck resolved: neck < 2 h_r throws ResolutionError. Cavitation and
/// dipole geometries assume the standard unit body (r < 1, |x3| < 1).
AxisymMap gen_surrogate(const SurrogateSpec& spec, GridPtr grid);

/// Candidate neck widths for a shrinking-neck family on this grid:
/// {0.24, 0.12, 0.06} filtered to resolvable widths, then the floor
/// max(2 h_r, 0.03) — the narrowest width whose wall stays orientation-
/// preserving on fine grids.
std::vector<double> dipole_neck_schedule(const AxisymGrid& g);

/// The dipole family over dipole_neck_schedule (spec.neck is ignored).
/// Members must be orientation-preserving, so the family keeps the safe
/// prefix of the schedule: generation stops at the first candidate whose
/// cellwise determinant is not positive on this grid (coarse grids end
/// early). An empty family throws ResolutionError.
std::vector<AxisymMap> gen_dipole_family(SurrogateSpec spec, GridPtr grid);

}  // namespace axisym
