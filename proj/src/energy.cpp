#include "axisym/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "axisym/kernels.hpp"

namespace axisym {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

BoolMask mask_for(const AxisymGrid& g, EnergyDomain dom) {
  return dom == EnergyDomain::Body ? interior_mask(g) : domain_mask(g);
}

/// Per-cell integrand sensitivities with respect to the four partials and
/// to v1 directly (through the ratio v1/r). `dirichlet` / `penalty` switch
/// the two energy terms on or off so each gradient can be tested alone.
struct CellSensitivity {
  double s1r = 0.0, s1z = 0.0;  // d integrand / d (d1r), d (d1z)
  double s2r = 0.0, s2z = 0.0;  // d integrand / d (d2r), d (d2z)
  double sv1 = 0.0;             // direct dependence through v1/r
};

CellSensitivity cell_sensitivity(const JacobianField& jac, int i, int j,
                                 bool dirichlet, bool penalty) {
  const double a = jac.d1r(i, j), b = jac.d1z(i, j);
  const double c = jac.d2r(i, j), d = jac.d2z(i, j);
  const double q = jac.ratio(i, j);
  const double r = jac.grid->r(i);
  CellSensitivity s;
  if (dirichlet) {
    s.s1r += 2.0 * a;
    s.s1z += 2.0 * b;
    s.s2r += 2.0 * c;
    s.s2z += 2.0 * d;
    s.sv1 += 2.0 * q / r;
  }
  if (penalty) {
    const double det3 = jac.det3(i, j);
    if (det3 <= 0.0) throw OrientationError(i, j, det3);
    const double hp = VolumetricPenalty::deriv(det3);
    // det3 = (v1/r)(d1r d2z - d1z d2r)
    s.s1r += hp * q * d;
    s.s1z += hp * (-q * c);
    s.s2r += hp * (-q * b);
    s.s2z += hp * q * a;
    s.sv1 += hp * jac.det2(i, j) / r;
  }
  return s;
}

MapGradient scatter_gradient(const AxisymMap& m, EnergyDomain dom,
                             bool dirichlet, bool penalty) {
  const AxisymGrid& g = *m.grid;
  const JacobianField jac = cyl_jacobian(m);
  const BoolMask mask = mask_for(g, dom);
  Eigen::ArrayXXd g1 = Eigen::ArrayXXd::Zero(g.nr, g.nz);
  Eigen::ArrayXXd g2 = Eigen::ArrayXXd::Zero(g.nr, g.nz);
  for (int j = 0; j < g.nz; ++j) {
    for (int i = 0; i < g.nr; ++i) {
      if (!mask(i, j)) continue;
      const double w = kTwoPi * g.r(i) * g.h_r * g.h_z;
      const CellSensitivity s = cell_sensitivity(jac, i, j, dirichlet, penalty);
      const DiffStencil sr = diff_stencil(g, i, j, /*radial=*/true);
      const DiffStencil sz = diff_stencil(g, i, j, /*radial=*/false);
      g1(sr.k0, j) += w * s.s1r * sr.c0;
      g1(sr.k1, j) += w * s.s1r * sr.c1;
      g1(i, sz.k0) += w * s.s1z * sz.c0;
      g1(i, sz.k1) += w * s.s1z * sz.c1;
      g2(sr.k0, j) += w * s.s2r * sr.c0;
      g2(sr.k1, j) += w * s.s2r * sr.c1;
      g2(i, sz.k0) += w * s.s2z * sz.c0;
      g2(i, sz.k1) += w * s.s2z * sz.c1;
      g1(i, j) += w * s.sv1;
    }
  }
  return {std::move(g1), std::move(g2)};
}

}  // namespace

double dirichlet_energy(const AxisymMap& m, const BoolMask& mask) {
  const AxisymGrid& g = *m.grid;
  if (mask.rows() != g.nr || mask.cols() != g.nz)
    throw std::invalid_argument("dirichlet_energy: mask shape mismatch");
  if (!mask.any()) return 0.0;
  const JacobianField jac = cyl_jacobian(m);
  double acc = 0.0;
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i)
      if (mask(i, j) && g.in_domain(i, j))
        acc += kTwoPi * g.r(i) * g.h_r * g.h_z * jac.frobenius_sq(i, j);
  return acc;
}

double dirichlet_energy(const AxisymMap& m, EnergyDomain dom) {
  return dirichlet_energy(m, mask_for(*m.grid, dom));
}

double penalty_energy(const AxisymMap& m, const BoolMask& mask) {
  const AxisymGrid& g = *m.grid;
  if (mask.rows() != g.nr || mask.cols() != g.nz)
    throw std::invalid_argument("penalty_energy: mask shape mismatch");
  if (!mask.any()) return 0.0;
  const JacobianField jac = cyl_jacobian(m);
  double acc = 0.0;
  for (int j = 0; j < g.nz; ++j) {
    for (int i = 0; i < g.nr; ++i) {
      if (!mask(i, j) || !g.in_domain(i, j)) continue;
      const double det3 = jac.det3(i, j);
      if (det3 <= 0.0) throw OrientationError(i, j, det3);
      acc += kTwoPi * g.r(i) * g.h_r * g.h_z * VolumetricPenalty::value(det3);
    }
  }
  return acc;
}

double penalty_energy(const AxisymMap& m, EnergyDomain dom) {
  return penalty_energy(m, mask_for(*m.grid, dom));
}

EnergyBreakdown energy_E(const AxisymMap& m, EnergyDomain dom) {
  return energy_with_singular(m, 0.0, dom);
}

EnergyBreakdown energy_with_singular(const AxisymMap& m, double singular_tv,
                                     EnergyDomain dom) {
  if (singular_tv < 0.0)
    throw std::invalid_argument("energy_with_singular: negative singular mass");
  EnergyBreakdown out;
  const BoolMask mask = mask_for(*m.grid, dom);
  out.dirichlet = dirichlet_energy(m, mask);
  out.h_term = penalty_energy(m, mask);
  out.singular_tv = singular_tv;
  out.E = out.dirichlet + out.h_term;
  out.F = out.E + 2.0 * singular_tv;
  return out;
}

MapGradient dirichlet_gradient(const AxisymMap& m, EnergyDomain dom) {
  return scatter_gradient(m, dom, true, false);
}

MapGradient penalty_gradient(const AxisymMap& m, EnergyDomain dom) {
  return scatter_gradient(m, dom, false, true);
}

MapGradient energy_gradient(const AxisymMap& m, EnergyDomain dom) {
  return scatter_gradient(m, dom, true, true);
}

Sqrt3Check check_sqrt3(const JacobianField& jac) {
  const AxisymGrid& g = *jac.grid;
  Sqrt3Check out;
  out.min_margin = std::numeric_limits<double>::infinity();
  bool seen = false;
  for (int j = 0; j < g.nz; ++j) {
    for (int i = 0; i < g.nr; ++i) {
      if (!g.in_domain(i, j)) continue;
      const auto chk = check_norm_cofactor(jac.matrix(i, j));
      out.min_margin = std::min(out.min_margin, chk.lhs - chk.rhs);
      if (!chk.holds) ++out.violations;
      seen = true;
    }
  }
  if (!seen) out.min_margin = 0.0;
  out.holds = out.violations == 0;
  return out;
}

AdjE3Check check_adj_e3(const AxisymMap& m) {
  const AxisymGrid& g = *m.grid;
  const JacobianField jac = cyl_jacobian(m);
  AdjE3Check out;
  for (int j = 0; j < g.nz; ++j) {
    for (int i = 0; i < g.nr; ++i) {
      if (!g.in_domain(i, j)) continue;
      const double lhs = jac.ratio(i, j) *
                         std::hypot(jac.d1r(i, j), jac.d1z(i, j));
      const double rhs = 0.5 * jac.frobenius_sq(i, j);
      if (rhs > 0.0) out.max_ratio = std::max(out.max_ratio, lhs / rhs);
      if (lhs > rhs + 1e-12 * (1.0 + rhs)) ++out.violations;
    }
  }
  out.holds = out.violations == 0;
  return out;
}

GradCheckReport grad_check(
    const AxisymMap& base, const std::function<double(const AxisymMap&)>& value,
    const std::function<MapGradient(const AxisymMap&)>& gradient,
    double step, int samples, std::uint64_t seed) {
  if (step <= 0.0) throw std::invalid_argument("grad_check: step must be > 0");
  const AxisymGrid& g = *base.grid;
  std::vector<std::pair<int, int>> cells;
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i)
      if (g.interior(i, j)) cells.emplace_back(i, j);
  if (cells.empty()) return {};

  const MapGradient an = gradient(base);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  std::bernoulli_distribution component(0.5);

  GradCheckReport rep;
  AxisymMap work = base;
  for (int k = 0; k < samples; ++k) {
    const auto [i, j] = cells[pick(rng)];
    const bool first = component(rng);
    Eigen::ArrayXXd& field = first ? work.v1 : work.v2;
    const double saved = field(i, j);
    field(i, j) = saved + step;
    const double up = value(work);
    field(i, j) = saved - step;
    const double dn = value(work);
    field(i, j) = saved;
    const double fd = (up - dn) / (2.0 * step);
    const double a = first ? an.first(i, j) : an.second(i, j);
    const double err = std::abs(fd - a) / (1.0 + std::abs(a));
    rep.max_rel_err = std::max(rep.max_rel_err, err);
    ++rep.cells_checked;
  }
  return rep;
}

}  // namespace axisym
