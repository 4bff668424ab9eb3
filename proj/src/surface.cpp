#include "axisym/surface.hpp"

#include <algorithm>
#include <cmath>

#include "axisym/degree.hpp"
#include "axisym/inverse.hpp"
#include "axisym/jacobian.hpp"
#include "axisym/kernels.hpp"

namespace axisym {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

}  // namespace

ScalarTest bump_test(double sigma, double c) {
  const double s2 = sigma * sigma;
  auto t_of = [s2, c](double r, double z) {
    return (r * r + (z - c) * (z - c)) / s2;
  };
  ScalarTest out;
  out.label = "bump(s=" + std::to_string(sigma) + ",c=" + std::to_string(c) + ")";
  out.phi = [t_of](double r, double z) {
    const double t = t_of(r, z);
    if (t >= 1.0) return 0.0;
    const double u = 1.0 - t;
    return u * u * u;
  };
  // d/dr (1-t)^3 = -3 (1-t)^2 * 2r / s2, similarly in z.
  out.phi_r = [t_of, s2](double r, double z) {
    const double t = t_of(r, z);
    if (t >= 1.0) return 0.0;
    const double u = 1.0 - t;
    return -6.0 * r / s2 * u * u;
  };
  out.phi_z = [t_of, s2, c](double r, double z) {
    const double t = t_of(r, z);
    if (t >= 1.0) return 0.0;
    const double u = 1.0 - t;
    return -6.0 * (z - c) / s2 * u * u;
  };
  return out;
}

ScalarTest plateau_test(double inner, double outer, double c) {
  if (!(0.0 < inner && inner < outer))
    throw std::invalid_argument("plateau_test: need 0 < inner < outer");
  const double w = outer - inner;
  auto rho_of = [c](double r, double z) { return std::hypot(r, z - c); };
  ScalarTest out;
  out.label = "plateau(" + std::to_string(inner) + "," +
              std::to_string(outer) + ",c=" + std::to_string(c) + ")";
  out.phi = [rho_of, inner, w](double r, double z) {
    const double t = (rho_of(r, z) - inner) / w;
    return 1.0 - smootherstep(t);
  };
  auto slope = [rho_of, inner, w](double r, double z) {
    const double rho = rho_of(r, z);
    const double t = (rho - inner) / w;
    if (t <= 0.0 || t >= 1.0 || rho == 0.0) return 0.0;
    // d/dt smootherstep = 30 t^2 (1-t)^2
    const double dt = 30.0 * t * t * (1.0 - t) * (1.0 - t);
    return -dt / (w * rho);
  };
  out.phi_r = [slope](double r, double z) { return slope(r, z) * r; };
  out.phi_z = [slope, c](double r, double z) { return slope(r, z) * (z - c); };
  return out;
}

VectorTest newtonian_test(double a) {
  if (a <= 0.0) throw std::invalid_argument("newtonian_test: a > 0 required");
  VectorTest out;
  out.label = "newtonian(a=" + std::to_string(a) + ")";
  out.sup_norm = 1.0;
  auto scale = [a](double s, double y) {
    const double rho = std::hypot(s, y);
    const double m = std::max(rho, a);
    return a * a / (m * m * m);
  };
  out.g_s = [scale](double s, double y) { return scale(s, y) * s; };
  out.g_3 = [scale](double s, double y) { return scale(s, y) * y; };
  out.div_g = [a](double s, double y) {
    return (std::hypot(s, y) < a) ? 3.0 / a : 0.0;
  };
  return out;
}

namespace {

// Smooth fields used against the product bumps. All are built from
// s * w(s^2) radial components so they are smooth across the axis, and
// each carries a certified sup bound of 1.
std::vector<VectorTest> smooth_fields() {
  std::vector<VectorTest> out;
  const double tau = 0.5, t2 = tau * tau;

  VectorTest axial;
  axial.label = "axial-gauss";
  axial.g_s = [](double, double) { return 0.0; };
  axial.g_3 = [t2](double s, double y) {
    return std::exp(-(s * s + y * y) / t2);
  };
  axial.div_g = [t2](double s, double y) {
    return -2.0 * y / t2 * std::exp(-(s * s + y * y) / t2);
  };
  out.push_back(axial);

  VectorTest axial_odd;
  axial_odd.label = "axial-odd";
  // sup_y |y/tau e^{-y^2/(2 tau^2)}| = e^{-1/2}; the e^{1/2} prefactor
  // normalizes the sup to 1.
  axial_odd.g_s = [](double, double) { return 0.0; };
  axial_odd.g_3 = [tau, t2](double s, double y) {
    return (y / tau) * std::exp(0.5 - y * y / (2.0 * t2)) *
           std::exp(-s * s / t2);
  };
  axial_odd.div_g = [tau, t2](double s, double y) {
    return (1.0 / tau) * (1.0 - y * y / t2) *
           std::exp(0.5 - y * y / (2.0 * t2)) * std::exp(-s * s / t2);
  };
  out.push_back(axial_odd);

  VectorTest radial;
  radial.label = "radial-gauss";
  // g_s = C s e^{-s^2/t2} q(y), C = sqrt(2) e^{1/2} / tau makes sup = 1.
  const double C = std::sqrt(2.0) * std::exp(0.5) / tau;
  radial.g_s = [C, t2](double s, double y) {
    return C * s * std::exp(-s * s / t2) * std::exp(-y * y / t2);
  };
  radial.g_3 = [](double, double) { return 0.0; };
  // div = (d/ds + 1/s) g_s = C e^{-s^2/t2} q(y) (2 - 2 s^2/t2).
  radial.div_g = [C, t2](double s, double y) {
    return C * std::exp(-s * s / t2) * std::exp(-y * y / t2) *
           (2.0 - 2.0 * s * s / t2);
  };
  out.push_back(radial);

  VectorTest mixed;
  mixed.label = "mixed";
  const double isq = 1.0 / std::sqrt(2.0);
  mixed.g_s = [C, t2, isq](double s, double y) {
    return isq * C * s * std::exp(-s * s / t2) * std::exp(-y * y / t2);
  };
  mixed.g_3 = [t2, isq](double s, double y) {
    return isq * std::exp(-(s * s + y * y) / t2);
  };
  mixed.div_g = [C, t2, isq](double s, double y) {
    const double qs = C * std::exp(-s * s / t2) * std::exp(-y * y / t2) *
                      (2.0 - 2.0 * s * s / t2);
    const double qy = -2.0 * y / t2 * std::exp(-(s * s + y * y) / t2);
    return isq * (qs + qy);
  };
  out.push_back(mixed);

  return out;
}

}  // namespace

TestDictionary default_dictionary(const AxisymGrid& g) {
  TestDictionary dict;
  const double half_z = 0.5 * (g.z_max - g.z_min);
  const double mid_z = 0.5 * (g.z_max + g.z_min);
  const double box = std::min(g.r_max, half_z);

  const double scales[3] = {0.2 * box, 0.36 * box, 0.6 * box};
  const double centers[3] = {mid_z - 0.35 * half_z, mid_z,
                             mid_z + 0.35 * half_z};
  const std::vector<VectorTest> fields = smooth_fields();
  for (double sigma : scales)
    for (double c : centers)
      for (const VectorTest& f : fields)
        dict.entries.push_back({bump_test(sigma, c), f});

  const ScalarTest center_bump = bump_test(0.6 * box, mid_z);
  for (double a : {0.15, 0.20, 0.25, 0.35})
    dict.entries.push_back({center_bump, newtonian_test(a)});
  return dict;
}

double bar_E(const AxisymMap& m, const TestPair& pair) {
  const AxisymGrid& g = *m.grid;
  const JacobianField jf = cyl_jacobian(m);
  double acc = 0.0;
  for (int i = 0; i < g.nr; ++i) {
    const double r = g.r(i);
    for (int j = 0; j < g.nz; ++j) {
      if (!g.in_domain(i, j)) continue;
      const double z = g.z(j);
      const double pr = pair.phi.phi_r(r, z), pz = pair.phi.phi_z(r, z);
      const double p = pair.phi.phi(r, z);
      if (p == 0.0 && pr == 0.0 && pz == 0.0) continue;
      const Eigen::Matrix3d cof = jf.cofactor(i, j);
      const double s = m.v1(i, j), y = m.v2(i, j);
      const double flux = pair.g.g_s(s, y) * (cof(0, 0) * pr + cof(0, 2) * pz) +
                          pair.g.g_3(s, y) * (cof(2, 0) * pr + cof(2, 2) * pz);
      acc += r * (flux + p * pair.g.div_g(s, y) * jf.det3(i, j));
    }
  }
  return kTwoPi * acc * g.h_r * g.h_z;
}

SurfaceReport surface_report(const AxisymMap& m, const TestDictionary& dict) {
  SurfaceReport rep;
  rep.pairings.reserve(dict.entries.size());
  for (const TestPair& pair : dict.entries) {
    const double v = bar_E(m, pair);
    rep.pairings.push_back({pair.phi.label + " * " + pair.g.label, v});
    rep.sup = std::max(rep.sup, std::abs(v));
  }
  return rep;
}

double surf_energy_sup(const AxisymMap& m, const TestDictionary& dict) {
  if (dict.entries.empty())
    throw std::invalid_argument("surf_energy_sup: empty dictionary");
  return surface_report(m, dict).sup;
}

double dist_jacobian_defect(const AxisymMap& m, const ScalarTest& phi,
                            int image_n) {
  const AxisymGrid& g = *m.grid;
  const JacobianField jf = cyl_jacobian(m);
  double pairing = 0.0;
  for (int i = 0; i < g.nr; ++i) {
    const double r = g.r(i);
    for (int j = 0; j < g.nz; ++j) {
      if (!g.in_domain(i, j)) continue;
      const double z = g.z(j);
      const double pr = phi.phi_r(r, z), pz = phi.phi_z(r, z);
      if (pr == 0.0 && pz == 0.0) continue;
      const Eigen::Matrix3d cof = jf.cofactor(i, j);
      pairing += r * (m.v1(i, j) * (cof(0, 0) * pr + cof(0, 2) * pz) +
                      m.v2(i, j) * (cof(2, 0) * pr + cof(2, 2) * pz));
    }
  }

  // The pointwise-Jacobian mass int phi det Du dx is evaluated on the
  // image side through the area formula: summing phi at the reconstructed
  // preimages over covered raster cells. That stays meaningful even when
  // the map tears a cavity open, where a reference-side det quadrature
  // picks up mesh-size-independent garbage from the cells the jump
  // crosses. Near such a jump the scatter's interpolation still bleeds
  // some coverage past the created boundary, so the result converges
  // first-order in the reference spacing rather than second.
  const int n = image_n > 0 ? image_n : std::max(g.nr, g.nz);
  const double s_hi = m.v1.maxCoeff();
  const double y_lo = m.v2.minCoeff(), y_hi = m.v2.maxCoeff();
  const double pad = 0.01 * std::max(s_hi, y_hi - y_lo) + 1e-12;
  GridPtr ig = make_image_grid(n, n, s_hi + pad, y_lo - pad, y_hi + pad);
  const ImageField f =
      build_inverse_field(m, ig, inverse_supersample(g, *ig));
  double covered = 0.0;
  for (int i = 0; i < ig->nr; ++i)
    for (int j = 0; j < ig->nz; ++j)
      if (f.fill_state(i, j) == FillState::Sampled)
        covered += ig->r(i) * phi.phi(f.inv1(i, j), f.inv2(i, j));

  return -(1.0 / 3.0) * pairing * kTwoPi * g.h_r * g.h_z -
         covered * kTwoPi * ig->h_r * ig->h_z;
}

}  // namespace axisym
