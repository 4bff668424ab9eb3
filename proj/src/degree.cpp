#include "axisym/degree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "axisym/jacobian.hpp"
#include "axisym/kernels.hpp"

namespace axisym {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using Eigen::Vector2d;

double point_segment_dist(const Vector2d& p, const Vector2d& a,
                          const Vector2d& b) {
  const Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

/// Piecewise-bilinear geometry of the map over a cell region: the map
/// sampled at cell corners (so patch edges are straight segments in the
/// image), the patch list, and the oriented boundary chain. Edges lying
/// on the symmetry axis are not boundary: the revolved solid continues
/// across the axis and contributes no surface there.
struct PatchComplex {
  const AxisymGrid* g = nullptr;
  Eigen::ArrayXXd cs, cy;  // (nr+1) x (nz+1) image coordinates of corners
  std::vector<std::pair<int, int>> patches;
  struct Seg {
    Vector2d ra, rb;  // reference endpoints, inside of the region on the left
    Vector2d ia, ib;  // image endpoints
  };
  std::vector<Seg> boundary;

  double cr(int ci) const { return ci * g->h_r; }
  double cz(int cj) const { return g->z_min + cj * g->h_z; }
  Vector2d ref_corner(int ci, int cj) const { return {cr(ci), cz(cj)}; }
  Vector2d img_corner(int ci, int cj) const { return {cs(ci, cj), cy(ci, cj)}; }
};

PatchComplex build_complex(const AxisymMap& m, const BoolMask& region) {
  const AxisymGrid& g = *m.grid;
  if (region.rows() != g.nr || region.cols() != g.nz)
    throw std::invalid_argument("degree: region mask shape mismatch");
  PatchComplex c;
  c.g = &g;
  c.cs.resize(g.nr + 1, g.nz + 1);
  c.cy.resize(g.nr + 1, g.nz + 1);
  for (int cj = 0; cj <= g.nz; ++cj)
    for (int ci = 0; ci <= g.nr; ++ci) {
      const Vector2d v = sample_map(m, c.cr(ci), c.cz(cj));
      c.cs(ci, cj) = v.x();
      c.cy(ci, cj) = v.y();
    }
  auto in = [&](int i, int j) {
    return i >= 0 && i < g.nr && j >= 0 && j < g.nz && region(i, j);
  };
  auto add_seg = [&c](int ca_i, int ca_j, int cb_i, int cb_j) {
    c.boundary.push_back({c.ref_corner(ca_i, ca_j), c.ref_corner(cb_i, cb_j),
                          c.img_corner(ca_i, ca_j), c.img_corner(cb_i, cb_j)});
  };
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i) {
      if (!in(i, j)) continue;
      c.patches.emplace_back(i, j);
      // Counterclockwise around the cell keeps the inside on the left.
      if (!in(i, j - 1)) add_seg(i, j, i + 1, j);          // bottom
      if (!in(i + 1, j)) add_seg(i + 1, j, i + 1, j + 1);  // right
      if (!in(i, j + 1)) add_seg(i + 1, j + 1, i, j + 1);  // top
      if (!in(i - 1, j) && i != 0) add_seg(i, j + 1, i, j);  // left, off-axis
    }
  return c;
}

double boundary_image_distance(const PatchComplex& c, const Vector2d& y) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : c.boundary)
    d = std::min(d, point_segment_dist(y, s.ia, s.ib));
  return d;
}

/// Uniform-bin index over patch image bounding boxes for preimage queries.
struct PatchIndex {
  double x0 = 0, y0 = 0, wx = 1, wy = 1;
  int n = 1;
  std::vector<std::vector<int>> bins;

  void build(const PatchComplex& c) {
    double x1 = -std::numeric_limits<double>::infinity(), y1 = x1;
    x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    for (const auto& [i, j] : c.patches)
      for (int di = 0; di <= 1; ++di)
        for (int dj = 0; dj <= 1; ++dj) {
          x0 = std::min(x0, c.cs(i + di, j + dj));
          x1 = std::max(x1, c.cs(i + di, j + dj));
          y0 = std::min(y0, c.cy(i + di, j + dj));
          y1 = std::max(y1, c.cy(i + di, j + dj));
        }
    n = std::max(1, (int)std::sqrt((double)c.patches.size() / 4.0 + 1.0));
    n = std::min(n, 128);
    wx = std::max(x1 - x0, 1e-30) / n;
    wy = std::max(y1 - y0, 1e-30) / n;
    bins.assign((std::size_t)n * n, {});
    for (int p = 0; p < (int)c.patches.size(); ++p) {
      const auto& [i, j] = c.patches[p];
      double bx0 = std::numeric_limits<double>::infinity(), bx1 = -bx0;
      double by0 = bx0, by1 = -bx0;
      for (int di = 0; di <= 1; ++di)
        for (int dj = 0; dj <= 1; ++dj) {
          bx0 = std::min(bx0, c.cs(i + di, j + dj));
          bx1 = std::max(bx1, c.cs(i + di, j + dj));
          by0 = std::min(by0, c.cy(i + di, j + dj));
          by1 = std::max(by1, c.cy(i + di, j + dj));
        }
      const int ix0 = bin_of(bx0, x0, wx), ix1 = bin_of(bx1, x0, wx);
      const int iy0 = bin_of(by0, y0, wy), iy1 = bin_of(by1, y0, wy);
      for (int ix = ix0; ix <= ix1; ++ix)
        for (int iy = iy0; iy <= iy1; ++iy)
          bins[(std::size_t)ix * n + iy].push_back(p);
    }
  }
  int bin_of(double v, double o, double w) const {
    return std::clamp((int)std::floor((v - o) / w), 0, n - 1);
  }
  const std::vector<int>& candidates(const Vector2d& y) const {
    return bins[(std::size_t)bin_of(y.x(), x0, wx) * n + bin_of(y.y(), y0, wy)];
  }
};

struct PatchRoot {
  double xi, eta;
  int sign;
};

/// All roots of the bilinear patch equation v(xi, eta) = y on the unit
/// parameter square, by damped Newton from a 2x2 grid of starts.
void patch_roots(const Vector2d& p00, const Vector2d& p10, const Vector2d& p01,
                 const Vector2d& p11, const Vector2d& y,
                 std::vector<PatchRoot>& out) {
  const double scale = 1e-11 * (1.0 + y.norm() + (p11 - p00).norm());
  const double starts[4][2] = {
      {0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
  for (const auto& s : starts) {
    double xi = s[0], eta = s[1];
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      const Vector2d f = (1 - xi) * (1 - eta) * p00 + xi * (1 - eta) * p10 +
                         (1 - xi) * eta * p01 + xi * eta * p11 - y;
      if (f.norm() <= scale) {
        ok = true;
        break;
      }
      Eigen::Matrix2d jm;
      jm.col(0) = (p10 - p00) * (1 - eta) + (p11 - p01) * eta;
      jm.col(1) = (p01 - p00) * (1 - xi) + (p11 - p10) * xi;
      const double det = jm.determinant();
      if (std::abs(det) < 1e-30) break;
      const Vector2d step = jm.inverse() * f;
      xi = std::clamp(xi - step.x(), -0.25, 1.25);
      eta = std::clamp(eta - step.y(), -0.25, 1.25);
    }
    if (!ok) continue;
    if (xi < -1e-9 || xi > 1 + 1e-9 || eta < -1e-9 || eta > 1 + 1e-9) continue;
    Eigen::Matrix2d jm;
    jm.col(0) = (p10 - p00) * (1 - eta) + (p11 - p01) * eta;
    jm.col(1) = (p01 - p00) * (1 - xi) + (p11 - p10) * xi;
    const double det = jm.determinant();
    if (det == 0.0) continue;  // critical preimage: not a regular value
    bool dup = false;
    for (const auto& r : out)
      if (std::abs(r.xi - xi) < 1e-7 && std::abs(r.eta - eta) < 1e-7) dup = true;
    if (!dup) out.push_back({xi, eta, det > 0 ? 1 : -1});
  }
}

/// Finite-difference partials of the sampled map at an arbitrary point,
/// clamping the probe points into the grid extents (one-sided at edges).
void sampled_partials(const AxisymMap& m, double r, double z, double& d1r,
                      double& d1z, double& d2r, double& d2z) {
  const AxisymGrid& g = *m.grid;
  const double dr = std::min(g.h_r, g.h_z) / 8.0;
  const double rp = std::min(r + dr, g.r_max), rm = std::max(r - dr, 0.0);
  const double zp = std::min(z + dr, g.z_max), zm = std::max(z - dr, g.z_min);
  const Vector2d vrp = sample_map(m, rp, z), vrm = sample_map(m, rm, z);
  const Vector2d vzp = sample_map(m, r, zp), vzm = sample_map(m, r, zm);
  d1r = (vrp.x() - vrm.x()) / (rp - rm);
  d2r = (vrp.y() - vrm.y()) / (rp - rm);
  d1z = (vzp.x() - vzm.x()) / (zp - zm);
  d2z = (vzp.y() - vzm.y()) / (zp - zm);
}

/// Half-open point-in-triangle test for a CCW triangle (top-left fill
/// rule), so shared edges between adjacent triangles are counted once.
bool inside_ccw(const Vector2d& a, const Vector2d& b, const Vector2d& cc,
                const Vector2d& p) {
  const Vector2d* v[3] = {&a, &b, &cc};
  for (int e = 0; e < 3; ++e) {
    const Vector2d& e0 = *v[e];
    const Vector2d& e1 = *v[(e + 1) % 3];
    const double cr = (e1.x() - e0.x()) * (p.y() - e0.y()) -
                      (e1.y() - e0.y()) * (p.x() - e0.x());
    if (cr < 0.0) return false;
    if (cr == 0.0) {
      const bool left = e1.y() > e0.y();
      const bool top = (e1.y() == e0.y()) && (e1.x() < e0.x());
      if (!left && !top) return false;
    }
  }
  return true;
}

void rasterize_triangle(const AxisymGrid& ig, Vector2d a, Vector2d b,
                        Vector2d cc, IntField& degree) {
  const double area2 =
      (b.x() - a.x()) * (cc.y() - a.y()) - (b.y() - a.y()) * (cc.x() - a.x());
  if (std::abs(area2) < 1e-18) return;
  const int s = area2 > 0 ? 1 : -1;
  if (s < 0) std::swap(b, cc);  // orient CCW, keep the signed contribution
  const double minx = std::min({a.x(), b.x(), cc.x()});
  const double maxx = std::max({a.x(), b.x(), cc.x()});
  const double miny = std::min({a.y(), b.y(), cc.y()});
  const double maxy = std::max({a.y(), b.y(), cc.y()});
  const int i0 = std::max(0, (int)std::floor(minx / ig.h_r - 0.5));
  const int i1 = std::min(ig.nr - 1, (int)std::ceil(maxx / ig.h_r - 0.5));
  const int j0 = std::max(0, (int)std::floor((miny - ig.z_min) / ig.h_z - 0.5));
  const int j1 =
      std::min(ig.nz - 1, (int)std::ceil((maxy - ig.z_min) / ig.h_z - 0.5));
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (inside_ccw(a, b, cc, {ig.r(i), ig.z(j)})) degree(i, j) += s;
}

}  // namespace

GridPtr make_image_grid(int ns, int ny, double s_max, double y_min,
                        double y_max) {
  return make_grid(ns, ny, s_max, y_min, y_max,
                   [](double, double) { return Region::Interior; });
}

GridPtr default_image_grid(const AxisymMap& m, int n) {
  const PatchComplex c = build_complex(m, domain_mask(*m.grid));
  const double smax = c.cs.maxCoeff();
  const double ymin = c.cy.minCoeff(), ymax = c.cy.maxCoeff();
  const double mgn = 0.05 * std::max(smax, ymax - ymin) + 1e-9;
  return make_image_grid(n, n, smax + mgn, ymin - mgn, ymax + mgn);
}

std::vector<int> degree_preimages(const AxisymMap& m, const BoolMask& region,
                                  const std::vector<Eigen::Vector2d>& ys) {
  const PatchComplex c = build_complex(m, region);
  const double h = std::max(m.grid->h_r, m.grid->h_z);
  PatchIndex index;
  index.build(c);
  std::vector<int> degrees;
  degrees.reserve(ys.size());
  std::vector<Vector2d> found;  // reference-space roots, for deduplication
  std::vector<PatchRoot> roots;
  const double dedup = 1e-6 * h;
  for (const Vector2d& y : ys) {
    const double d = boundary_image_distance(c, y);
    if (d <= h) throw DegreeUndefinedError(d);
    int deg = 0;
    found.clear();
    for (int p : index.candidates(y)) {
      const auto& [i, j] = c.patches[p];
      roots.clear();
      patch_roots(c.img_corner(i, j), c.img_corner(i + 1, j),
                  c.img_corner(i, j + 1), c.img_corner(i + 1, j + 1), y, roots);
      for (const auto& r : roots) {
        const Vector2d ref(c.cr(i) + r.xi * m.grid->h_r,
                           c.cz(j) + r.eta * m.grid->h_z);
        bool dup = false;
        for (const auto& q : found)
          if ((q - ref).norm() < dedup) dup = true;
        if (dup) continue;
        found.push_back(ref);
        deg += r.sign;
      }
    }
    degrees.push_back(deg);
  }
  return degrees;
}

int degree_preimage(const AxisymMap& m, const BoolMask& region, double ys,
                    double yy) {
  return degree_preimages(m, region, {Vector2d(ys, yy)}).front();
}

DegreeGrid degree_field(const AxisymMap& m, const BoolMask& region,
                        GridPtr image_grid) {
  const PatchComplex c = build_complex(m, region);
  const AxisymGrid& ig = *image_grid;
  DegreeGrid out;
  out.grid = std::move(image_grid);
  out.degree = IntField::Zero(ig.nr, ig.nz);
  out.valid = BoolMask::Constant(ig.nr, ig.nz, true);
  for (const auto& [i, j] : c.patches) {
    const Vector2d p00 = c.img_corner(i, j), p10 = c.img_corner(i + 1, j);
    const Vector2d p01 = c.img_corner(i, j + 1), p11 = c.img_corner(i + 1, j + 1);
    rasterize_triangle(ig, p00, p10, p11, out.degree);
    rasterize_triangle(ig, p00, p11, p01, out.degree);
  }
  // Invalidate cells near the boundary image, where rasterized counts smear.
  const double buffer = 1.5 * std::hypot(ig.h_r, ig.h_z);
  for (const auto& seg : c.boundary) {
    const double minx = std::min(seg.ia.x(), seg.ib.x()) - buffer;
    const double maxx = std::max(seg.ia.x(), seg.ib.x()) + buffer;
    const double miny = std::min(seg.ia.y(), seg.ib.y()) - buffer;
    const double maxy = std::max(seg.ia.y(), seg.ib.y()) + buffer;
    const int i0 = std::max(0, (int)std::floor(minx / ig.h_r - 0.5));
    const int i1 = std::min(ig.nr - 1, (int)std::ceil(maxx / ig.h_r - 0.5));
    const int j0 = std::max(0, (int)std::floor((miny - ig.z_min) / ig.h_z - 0.5));
    const int j1 =
        std::min(ig.nz - 1, (int)std::ceil((maxy - ig.z_min) / ig.h_z - 0.5));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        if (point_segment_dist({ig.r(i), ig.z(j)}, seg.ia, seg.ib) <= buffer)
          out.valid(i, j) = false;
  }
  return out;
}

double degree_integral(const AxisymMap& m, const BoolMask& region,
                       const ImageVectorField& g, int quad_per_edge) {
  if (quad_per_edge < 1 || quad_per_edge > 16)
    throw std::invalid_argument("degree_integral: quad_per_edge out of range");
  const PatchComplex c = build_complex(m, region);
  // Gauss-Legendre nodes/weights on [0, 1].
  std::vector<double> xs, ws;
  switch (quad_per_edge) {
    case 1:
      xs = {0.5}, ws = {1.0};
      break;
    case 2:
      xs = {0.2113248654051871, 0.7886751345948129}, ws = {0.5, 0.5};
      break;
    default:
      xs = {0.06943184420297371, 0.33000947820757187, 0.6699905217924281,
            0.9305681557970262};
      ws = {0.17392742256872692, 0.32607257743127305, 0.32607257743127305,
            0.17392742256872692};
      break;
  }
  double acc = 0.0;
  for (const auto& seg : c.boundary) {
    const Vector2d t = seg.rb - seg.ra;
    const double len = t.norm();
    if (len == 0.0) continue;
    const Vector2d nu(t.y() / len, -t.x() / len);  // outward: right of travel
    for (std::size_t q = 0; q < xs.size(); ++q) {
      const Vector2d p = seg.ra + xs[q] * t;
      const Vector2d v = sample_map(m, p.x(), p.y());
      double d1r, d1z, d2r, d2z;
      sampled_partials(m, p.x(), p.y(), d1r, d1z, d2r, d2z);
      const double ratio = p.x() > 0.0 ? v.x() / p.x() : d1r;
      const Eigen::Matrix3d cof = cyl_cofactor(d1r, d1z, d2r, d2z, ratio);
      const double cn_s = cof(0, 0) * nu.x() + cof(0, 2) * nu.y();
      const double cn_y = cof(2, 0) * nu.x() + cof(2, 2) * nu.y();
      const double integrand =
          g.gs(v.x(), v.y()) * cn_s + g.gy(v.x(), v.y()) * cn_y;
      acc += ws[q] * len * kTwoPi * p.x() * integrand;
    }
  }
  return acc;
}

TopImage topological_image(const AxisymMap& m, const BoolMask& region,
                           GridPtr image_grid) {
  DegreeGrid dg = degree_field(m, region, std::move(image_grid));
  TopImage out;
  out.grid = dg.grid;
  out.valid = dg.valid;
  out.mask = (dg.degree != 0) && dg.valid;
  return out;
}

TopImage image_of_L(const AxisymMap& m, GridPtr image_grid) {
  const AxisymGrid& g = *m.grid;
  const BoolMask full = domain_mask(g);
  const TopImage base = topological_image(m, full, image_grid);
  BoolMask covered = BoolMask::Constant(base.grid->nr, base.grid->nz, false);
  double delta = g.r_max / 2.0;
  std::vector<double> deltas;
  while (delta >= 2.0 * g.h_r) {
    deltas.push_back(delta);
    delta /= 2.0;
  }
  if (deltas.empty() || deltas.back() > 2.0 * g.h_r)
    deltas.push_back(2.0 * g.h_r);
  for (double d : deltas) {
    const int imin = (int)std::ceil(d / g.h_r - 1e-12);
    BoolMask u = full;
    for (int j = 0; j < g.nz; ++j)
      for (int i = 0; i < std::min(imin, g.nr); ++i) u(i, j) = false;
    if (!u.any()) continue;
    const TopImage im = topological_image(m, u, image_grid);
    covered = covered || im.mask;
  }
  TopImage out;
  out.grid = base.grid;
  out.valid = base.valid;
  out.mask = base.mask && !covered;
  return out;
}

double mask_area(const TopImage& im) {
  const AxisymGrid& g = *im.grid;
  double a = 0.0;
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i)
      if (im.mask(i, j)) a += kTwoPi * g.r(i) * g.h_r * g.h_z;
  return a;
}

}  // namespace axisym
