#pragma once

// Scalar-templated building blocks shared by the field pipeline: smooth ramp
// profiles, the cylindrical-frame differential/cofactor assembly for
// axisymmetric maps, and small matrix checks. Everything here is a pure
// function of its arguments; Eigen is the only dependency.

#include <Eigen/Dense>
#include <cmath>

namespace axisym {

/// C1 cubic ramp: 0 for x <= 0, 1 for x >= 1, 3x^2 - 2x^3 between.
template <class Scalar>
Scalar smoothstep(Scalar x) {
  if (x <= Scalar(0)) return Scalar(0);
  if (x >= Scalar(1)) return Scalar(1);
  return x * x * (Scalar(3) - Scalar(2) * x);
}

/// C2 quintic ramp: 0 for x <= 0, 1 for x >= 1, 10x^3 - 15x^4 + 6x^5 between.
template <class Scalar>
Scalar smootherstep(Scalar x) {
  if (x <= Scalar(0)) return Scalar(0);
  if (x >= Scalar(1)) return Scalar(1);
  return x * x * x * (x * (x * Scalar(6) - Scalar(15)) + Scalar(10));
}

/// Near-linear ramp with maximum slope ~1.16 (vs 1.5 for smoothstep).
/// Continuous with bounded slope everywhere; corners at the endpoints are
/// accepted in exchange for the lower peak slope, which matters when the
/// ramp drives a displacement with a hard orientation bound.
template <class Scalar>
Scalar gentle_ramp(Scalar x) {
  if (x <= Scalar(0)) return Scalar(0);
  if (x >= Scalar(1)) return Scalar(1);
  const Scalar s = smoothstep(x);
  return Scalar(0.69) * x + Scalar(0.31) * s;
}

/// Differential of an axisymmetric map in matched cylindrical frames.
/// Generating map v = (v1, v2): (r, x3) -> (s, y3);
/// arguments are the four partials of v at the evaluation point and the
/// ratio v1 / r. Rows are (radial, angular, axial) image components,
/// columns the same reference directions. Off-pattern entries are zero.
template <class Scalar>
Eigen::Matrix<Scalar, 3, 3> cyl_differential(Scalar d1r, Scalar d1z,
                                             Scalar d2r, Scalar d2z,
                                             Scalar ratio) {
  Eigen::Matrix<Scalar, 3, 3> m;
  m << d1r, Scalar(0), d1z,
       Scalar(0), ratio, Scalar(0),
       d2r, Scalar(0), d2z;
  return m;
}

/// Cofactor matrix of cyl_differential with the same arguments, assembled
/// from its closed form (no generic minors needed for this sparsity).
template <class Scalar>
Eigen::Matrix<Scalar, 3, 3> cyl_cofactor(Scalar d1r, Scalar d1z,
                                         Scalar d2r, Scalar d2z,
                                         Scalar ratio) {
  Eigen::Matrix<Scalar, 3, 3> m;
  const Scalar det2 = d1r * d2z - d1z * d2r;
  m << ratio * d2z, Scalar(0), -(ratio * d2r),
       Scalar(0), det2, Scalar(0),
       -(ratio * d1z), Scalar(0), ratio * d1r;
  return m;
}

/// Planar Jacobian determinant of the generating map.
template <class Scalar>
Scalar planar_det(Scalar d1r, Scalar d1z, Scalar d2r, Scalar d2z) {
  return d1r * d2z - d1z * d2r;
}

/// Cofactor matrix of a generic 3x3 matrix via column cross products:
/// cof(A) has columns a2 x a3, a3 x a1, a1 x a2 for A = [a1 a2 a3].
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 3>
cofactor3(const Eigen::MatrixBase<Derived>& a) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, 3, 3>;
  Mat c;
  c.col(0) = a.col(1).cross(a.col(2));
  c.col(1) = a.col(2).cross(a.col(0));
  c.col(2) = a.col(0).cross(a.col(1));
  return c;
}

/// Result of the squared-norm vs cofactor-norm comparison
/// |A|_F^2 >= sqrt(3) |cof A|_F (equality iff all singular values agree).
template <class Scalar>
struct NormCofactorCheck {
  Scalar lhs;   ///< |A|_F^2
  Scalar rhs;   ///< sqrt(3) |cof A|_F
  bool holds;   ///< lhs >= rhs - 1e-12 * (1 + lhs)
};

template <class Derived>
NormCofactorCheck<typename Derived::Scalar>
check_norm_cofactor(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  NormCofactorCheck<Scalar> out;
  out.lhs = a.squaredNorm();
  out.rhs = std::sqrt(Scalar(3)) * cofactor3(a).norm();
  out.holds = out.lhs >= out.rhs - Scalar(1e-12) * (Scalar(1) + out.lhs);
  return out;
}

/// Convex volumetric penalty t^2 + 1/t: superlinear growth at infinity,
/// blow-up at 0+, value 2 at t = 1, minimizer at t = (1/2)^(1/3).
struct VolumetricPenalty {
  template <class Scalar>
  static Scalar value(Scalar t) { return t * t + Scalar(1) / t; }
  template <class Scalar>
  static Scalar deriv(Scalar t) { return Scalar(2) * t - Scalar(1) / (t * t); }
  template <class Scalar>
  static Scalar second(Scalar t) { return Scalar(2) + Scalar(2) / (t * t * t); }
};

}  // namespace axisym
