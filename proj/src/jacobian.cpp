#include "axisym/jacobian.hpp"

namespace axisym {

DiffStencil diff_stencil(const AxisymGrid& g, int i, int j, bool radial) {
  DiffStencil s;
  if (!g.in_domain(i, j)) return s;
  const double h = radial ? g.h_r : g.h_z;
  const int im = radial ? i - 1 : i, jm = radial ? j : j - 1;
  const int ip = radial ? i + 1 : i, jp = radial ? j : j + 1;
  const bool has_m = g.in_domain(im, jm);
  const bool has_p = g.in_domain(ip, jp);
  const int km = radial ? im : jm;
  const int kp = radial ? ip : jp;
  const int kc = radial ? i : j;
  if (has_m && has_p) {
    s = {km, kp, -0.5 / h, 0.5 / h};
  } else if (has_p) {
    s = {kc, kp, -1.0 / h, 1.0 / h};
  } else if (has_m) {
    s = {km, kc, -1.0 / h, 1.0 / h};
  }
  return s;
}

JacobianField cyl_jacobian(const AxisymMap& m) {
  const auto& g = *m.grid;
  JacobianField f;
  f.grid = m.grid;
  f.d1r = Eigen::ArrayXXd::Zero(g.nr, g.nz);
  f.d1z = Eigen::ArrayXXd::Zero(g.nr, g.nz);
  f.d2r = Eigen::ArrayXXd::Zero(g.nr, g.nz);
  f.d2z = Eigen::ArrayXXd::Zero(g.nr, g.nz);
  f.ratio = Eigen::ArrayXXd::Zero(g.nr, g.nz);
  f.det2 = Eigen::ArrayXXd::Zero(g.nr, g.nz);
  f.det3 = Eigen::ArrayXXd::Zero(g.nr, g.nz);

  for (int i = 0; i < g.nr; ++i) {
    for (int j = 0; j < g.nz; ++j) {
      if (!g.in_domain(i, j)) continue;
      const DiffStencil sr = diff_stencil(g, i, j, true);
      const DiffStencil sz = diff_stencil(g, i, j, false);
      f.d1r(i, j) = sr.c0 * m.v1(sr.k0, j) + sr.c1 * m.v1(sr.k1, j);
      f.d2r(i, j) = sr.c0 * m.v2(sr.k0, j) + sr.c1 * m.v2(sr.k1, j);
      f.d1z(i, j) = sz.c0 * m.v1(i, sz.k0) + sz.c1 * m.v1(i, sz.k1);
      f.d2z(i, j) = sz.c0 * m.v2(i, sz.k0) + sz.c1 * m.v2(i, sz.k1);
      f.ratio(i, j) = m.v1(i, j) / g.r(i);
      f.det2(i, j) = planar_det(f.d1r(i, j), f.d1z(i, j), f.d2r(i, j),
                                f.d2z(i, j));
      f.det3(i, j) = f.ratio(i, j) * f.det2(i, j);
    }
  }
  return f;
}

}  // namespace axisym
