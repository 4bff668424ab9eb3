#pragma once

// The elastic energy of an axisymmetric map: Dirichlet term, volumetric
// penalty, their analytic gradients with respect to the stored cell
// values, the augmented total with the singular-variation term, and two
// sharp pointwise inequalities used as sanity anchors.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>

#include "axisym/grid.hpp"
#include "axisym/jacobian.hpp"

namespace axisym {

/// Which cells the quadrature runs over.
enum class EnergyDomain {
  Body,  ///< interior cells only
  Full   ///< interior + Dirichlet collar
};

/// Raised when the 3D determinant is nonpositive at a quadrature cell.
struct OrientationError : std::runtime_error {
  int i, j;
  double det;
  OrientationError(int i_, int j_, double det_)
      : std::runtime_error("nonpositive determinant " + std::to_string(det_) +
                           " at cell (" + std::to_string(i_) + "," +
                           std::to_string(j_) + ")"),
        i(i_), j(j_), det(det_) {}
};

struct EnergyBreakdown {
  double dirichlet = 0.0;    ///< integral of |Du|^2
  double h_term = 0.0;       ///< integral of H(det Du)
  double singular_tv = 0.0;  ///< singular variation of the inverse's axial part
  double E = 0.0;            ///< dirichlet + h_term
  double F = 0.0;            ///< E + 2 * singular_tv
};

/// Quadrature of |Du|^2 (= |Dv|^2 + (v1/r)^2 pointwise) over the masked
/// cells, weight 2*pi*r*h_r*h_z. Empty mask gives 0.
double dirichlet_energy(const AxisymMap& m, const BoolMask& mask);
double dirichlet_energy(const AxisymMap& m, EnergyDomain dom = EnergyDomain::Body);

/// Quadrature of H(det Du) over the masked cells; throws OrientationError
/// on the first cell with det <= 0.
double penalty_energy(const AxisymMap& m, const BoolMask& mask);
double penalty_energy(const AxisymMap& m, EnergyDomain dom = EnergyDomain::Body);

/// Both terms with E/F assembled (singular_tv = 0 here).
EnergyBreakdown energy_E(const AxisymMap& m, EnergyDomain dom = EnergyDomain::Body);

/// energy_E plus a singular-variation mass supplied by the inverse
/// pipeline; F = E + 2 * singular_tv.
EnergyBreakdown energy_with_singular(const AxisymMap& m, double singular_tv,
                                     EnergyDomain dom = EnergyDomain::Body);

/// Gradients of the discrete quadratures with respect to every in-domain
/// cell value (the caller masks frozen cells). Built from the exact same
/// stencils as cyl_jacobian, so finite differences of the energies match.
using MapGradient = std::pair<Eigen::ArrayXXd, Eigen::ArrayXXd>;
MapGradient dirichlet_gradient(const AxisymMap& m, EnergyDomain dom);
MapGradient penalty_gradient(const AxisymMap& m, EnergyDomain dom);
MapGradient energy_gradient(const AxisymMap& m, EnergyDomain dom);

/// Field-wide summary of |F|^2 >= sqrt(3) |cof F| at every in-domain cell.
struct Sqrt3Check {
  bool holds = true;
  double min_margin = 0.0;  ///< min over cells of lhs - rhs
  int violations = 0;
};
Sqrt3Check check_sqrt3(const JacobianField& jac);

/// Field-wide summary of |adj Du e3| <= 0.5 |Du|^2; the left side has the
/// closed form (v1/r) sqrt((d1r)^2 + (d1z)^2).
struct AdjE3Check {
  bool holds = true;
  double max_ratio = 0.0;  ///< max over cells of lhs / rhs
  int violations = 0;
};
AdjE3Check check_adj_e3(const AxisymMap& m);

/// Relative agreement between an analytic gradient and central finite
/// differences at randomly sampled interior cells.
struct GradCheckReport {
  double max_rel_err = 0.0;
  int cells_checked = 0;
};
GradCheckReport grad_check(
    const AxisymMap& base, const std::function<double(const AxisymMap&)>& value,
    const std::function<MapGradient(const AxisymMap&)>& gradient,
    double step = 1e-6, int samples = 100, std::uint64_t seed = 7u);

}  // namespace axisym
