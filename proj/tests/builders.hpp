#pragma once

// Deterministic closed-form map families used across the test binaries.
// Every family is parameterized by a seed so tests can sweep many maps
// while staying reproducible. Coefficient bounds keep the planar
// determinant positive for the "diffeomorphic" families (checked where a
// test depends on it).

#include <cmath>
#include <functional>
#include <random>

#include "axisym/grid.hpp"

namespace builders {

struct ClosedPair {
  std::function<double(double, double)> f1;  // v1(r, z), odd-in-r structure
  std::function<double(double, double)> f2;  // v2(r, z), even in r
};

inline axisym::AxisymMap realize(axisym::GridPtr grid, const ClosedPair& p) {
  return axisym::map_from_functions(std::move(grid), p.f1, p.f2);
}

/// Smooth orientation-preserving perturbation of the identity on the
/// cylinder; coefficient magnitudes <= amp keep det > 0 for amp <= 0.15.
/// The perturbations vanish at r = 1 and |z| = 1 so the same closed form
/// is identity-like on a collar.
inline ClosedPair smooth_pair(std::uint64_t seed, double amp = 0.12) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-amp, amp);
  const double a1 = coef(rng), a2 = coef(rng);
  const double b1 = coef(rng), b2 = coef(rng);
  ClosedPair p;
  p.f1 = [a1, a2](double r, double z) {
    const double br = std::max(0.0, 1.0 - r * r);
    const double bz = std::max(0.0, 1.0 - z * z);
    return r * (1.0 + a1 * br * bz + a2 * br * br * bz * z);
  };
  p.f2 = [b1, b2](double r, double z) {
    const double br = std::max(0.0, 1.0 - r * r);
    const double bz = std::max(0.0, 1.0 - z * z);
    return z + bz * br * (b1 + b2 * z) * 0.5;
  };
  return p;
}

/// Gradient-structure family: (v1, v2) = identity + grad psi with
/// psi = c * r^2 (1-r^2)^2 (1-z^2)^2 (a potential even in r), so the
/// cross partials match exactly: d v1/dz == d v2/dr.
inline ClosedPair gradient_pair(std::uint64_t seed, double amp = 0.10) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-amp, amp);
  const double c = coef(rng);
  ClosedPair p;
  p.f1 = [c](double r, double z) {
    const double br = std::max(0.0, 1.0 - r * r);
    const double bz = std::max(0.0, 1.0 - z * z);
    // d/dr of c r^2 (1-r^2)^2 (1-z^2)^2
    return r + c * (2.0 * r * br * br - 4.0 * r * r * r * br) * bz * bz;
  };
  p.f2 = [c](double r, double z) {
    const double br = std::max(0.0, 1.0 - r * r);
    const double bz = std::max(0.0, 1.0 - z * z);
    // d/dz of the same potential
    return z + c * r * r * br * br * (-4.0 * z * bz);
  };
  return p;
}

/// Separable family v1 = g(r), v2 = l(z): radial stretch paired with an
/// axial stretch, both strictly increasing.
inline ClosedPair separable_pair(std::uint64_t seed, double amp = 0.15) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-amp, amp);
  const double a = coef(rng), b = coef(rng);
  ClosedPair p;
  p.f1 = [a](double r, double /*z*/) {
    const double br = std::max(0.0, 1.0 - r * r);
    return r * (1.0 + a * br);
  };
  p.f2 = [b](double /*r*/, double z) {
    const double bz = std::max(0.0, 1.0 - z * z);
    return z * (1.0 + b * bz);
  };
  return p;
}

/// Rough family for inequality stress tests: no positivity of the planar
/// determinant is promised, only v1 >= 0 and the odd/even structure.
inline ClosedPair rough_pair(std::uint64_t seed, double amp = 0.45) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-amp, amp);
  const double a1 = coef(rng), a2 = coef(rng), a3 = coef(rng);
  const double b1 = coef(rng), b2 = coef(rng), b3 = coef(rng);
  ClosedPair p;
  p.f1 = [a1, a2, a3](double r, double z) {
    const double wig = a1 * std::sin(2.1 * z) + a2 * std::cos(1.3 * r) * z +
                       a3 * r * z * z;
    return r * std::max(0.05, 1.0 + wig);
  };
  p.f2 = [b1, b2, b3](double r, double z) {
    return z + b1 * std::sin(1.7 * z) + b2 * r * r + b3 * std::cos(2.3 * z) * r * r;
  };
  return p;
}

}  // namespace builders
