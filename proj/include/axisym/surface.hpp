#pragma once

// Surface-energy pairings and the distributional-Jacobian defect. Both
// detect interfaces the bulk quadrature cannot see: a diffeomorphism
// pairs to zero with every admissible test pair (integration by parts),
// while a cavitating map leaves a residue proportional to the created
// surface, and its Jacobian defect measures the cavity volume.

#include <functional>
#include <string>
#include <vector>

#include "axisym/grid.hpp"

namespace axisym {

using ScalarField2 = std::function<double(double, double)>;

/// Scalar test function on the reference half-plane with closed-form
/// partial derivatives; compactly supported inside the domain box.
struct ScalarTest {
  std::string label;
  ScalarField2 phi, phi_r, phi_z;
};

/// Axisymmetric vector test field on image space, given by its radial
/// and axial components and closed-form divergence (3-d divergence,
/// including the s-component's geometric term).
struct VectorTest {
  std::string label;
  ScalarField2 g_s, g_3, div_g;
  double sup_norm = 1.0;  ///< certified bound on |g|
};

struct TestPair {
  ScalarTest phi;
  VectorTest g;
};

struct TestDictionary {
  std::vector<TestPair> entries;
};

/// Smooth bump of scale `sigma` centered at (0, c): (1 - rho^2/sigma^2)^3.
ScalarTest bump_test(double sigma, double c);

/// Plateau test equal to 1 for rho <= inner, easing to 0 at rho = outer.
ScalarTest plateau_test(double inner, double outer, double c = 0.0);

/// Capped Newtonian field a^2 * y / max(|y|, a)^3; |g| <= 1, divergence
/// 3/a inside the ball of radius a and 0 outside.
VectorTest newtonian_test(double a);

/// Fixed reproducible dictionary sized to the grid box: product bumps at
/// three scales and three axial centers against four smooth fields, plus
/// four Newtonian pairs against the centered bump (40 entries).
TestDictionary default_dictionary(const AxisymGrid& g);

/// Quadrature of g(u) . (cof Du . Dphi) + phi . div g(u) . det Du over
/// the domain with the cylindrical weight.
double bar_E(const AxisymMap& m, const TestPair& pair);

struct SurfacePairing {
  std::string label;
  double value = 0.0;
};

struct SurfaceReport {
  std::vector<SurfacePairing> pairings;
  double sup = 0.0;  ///< max |pairing|; a lower bound for the true sup
};

SurfaceReport surface_report(const AxisymMap& m, const TestDictionary& dict);
double surf_energy_sup(const AxisymMap& m, const TestDictionary& dict);

/// <Det Du - det Du, phi> = -(1/3) int u . (cof Du . Dphi) - int phi det Du.
/// Zero for diffeomorphisms; the cavity volume times phi(origin) for a
/// map opening a cavity there. The det-Du mass is taken on an image-side
/// raster of image_n cells per axis (0 matches the reference
/// resolution), so the result stays finite on cavitating maps and
/// converges first-order in the reference spacing; phi must be compactly
/// supported inside the open domain.
double dist_jacobian_defect(const AxisymMap& m, const ScalarTest& phi,
                            int image_n = 0);

}  // namespace axisym
