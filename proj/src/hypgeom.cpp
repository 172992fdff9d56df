#include "hypsweep/hypgeom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hypsweep/error.hpp"
#include "hypsweep/quadrature.hpp"

namespace hypsweep::hyp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::array<double, 4> kJ{-1.0, 1.0, 1.0, 1.0};

HPoint on_sheet(const MVec4& v) { return HPoint::from_vector(v); }

// <p - q, p - q> computed without the cancellation in -2 - 2<p,q>.
double chord2(const MVec4& p, const MVec4& q) {
  const MVec4 d = p - q;
  return std::max(0.0, minkowski(d, d));
}

double det4(const std::array<MVec4, 4>& rows) {
  std::array<std::array<double, 4>, 4> a{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) a[i][j] = rows[i][j];
  double det = 1.0;
  for (std::size_t c = 0; c < 4; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < 4; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

void check_radius(double r) {
  if (!(r >= 0.0)) throw Error(Errc::NegativeRadius, "radius " + std::to_string(r));
}

}  // namespace

// ---------------------------------------------------------------- HPoint

HPoint HPoint::from_vector(const MVec4& v) {
  const double n2 = minkowski(v, v);
  if (!(n2 < 0.0) || !(v[0] > 0.0) || !std::isfinite(n2))
    throw Error(Errc::InvalidInput, "vector is not future timelike");
  const MVec4 u = (1.0 / std::sqrt(-n2)) * v;
  return from_spatial(u[1], u[2], u[3]);
}

HPoint HPoint::from_spatial(double x1, double x2, double x3) {
  if (!std::isfinite(x1) || !std::isfinite(x2) || !std::isfinite(x3))
    throw Error(Errc::InvalidInput, "non-finite coordinate");
  const double x0 = std::sqrt(1.0 + x1 * x1 + x2 * x2 + x3 * x3);
  return HPoint(MVec4{{x0, x1, x2, x3}});
}

double HTangent::norm() const { return std::sqrt(std::max(0.0, minkowski(dir, dir))); }

// -------------------------------------------------------------- Isometry

Isometry::Isometry() : m_{} {
  for (std::size_t i = 0; i < 4; ++i) m_[5 * i] = 1.0;
}

Isometry Isometry::from_matrix(const Matrix& m, double tol) {
  for (double x : m)
    if (!std::isfinite(x)) throw Error(Errc::InvalidInput, "non-finite isometry entry");
  Isometry g(m);
  const double defect = g.lorentz_defect();
  if (defect > tol)
    throw Error(Errc::InvalidInput, "matrix is not Lorentz orthogonal (defect " +
                                        std::to_string(defect) + ")");
  if (!(m[0] > 0.0)) throw Error(Errc::InvalidInput, "matrix swaps the hyperboloid sheets");
  return g;
}

Isometry Isometry::from_matrix_unchecked(const Matrix& m) { return Isometry(m); }

Isometry Isometry::translation(int axis, double t) {
  if (axis < 1 || axis > 3) throw Error(Errc::InvalidInput, "translation axis must be 1..3");
  Isometry g;
  const auto a = static_cast<std::size_t>(axis);
  g.m_[0] = std::cosh(t);
  g.m_[a] = std::sinh(t);
  g.m_[4 * a] = std::sinh(t);
  g.m_[5 * a] = std::cosh(t);
  return g;
}

Isometry Isometry::rotation(int i, int j, double angle) {
  if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
    throw Error(Errc::InvalidInput, "rotation plane must be two distinct axes in 1..3");
  Isometry g;
  const auto a = static_cast<std::size_t>(i);
  const auto b = static_cast<std::size_t>(j);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  g.m_[5 * a] = c;
  g.m_[4 * a + b] = -s;
  g.m_[4 * b + a] = s;
  g.m_[5 * b] = c;
  return g;
}

Isometry Isometry::operator*(const Isometry& o) const {
  Matrix r{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) {
      const double a = m_[4 * i + k];
      for (std::size_t j = 0; j < 4; ++j) r[4 * i + j] += a * o.m_[4 * k + j];
    }
  return Isometry(r);
}

MVec4 Isometry::apply(const MVec4& v) const {
  MVec4 r;
  for (std::size_t i = 0; i < 4; ++i)
    r[i] = m_[4 * i] * v[0] + m_[4 * i + 1] * v[1] + m_[4 * i + 2] * v[2] + m_[4 * i + 3] * v[3];
  return r;
}

HPoint Isometry::apply(const HPoint& p) const { return on_sheet(apply(p.vec())); }

Isometry Isometry::inverse() const {
  Matrix r{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r[4 * i + j] = kJ[i] * m_[4 * j + i] * kJ[j];
  return Isometry(r);
}

double Isometry::lorentz_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += m_[4 * k + i] * kJ[k] * m_[4 * k + j];
      const double target = i == j ? kJ[i] : 0.0;
      worst = std::max(worst, std::abs(s - target));
    }
  return worst;
}

double Isometry::max_abs_diff(const Isometry& o) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < 16; ++i) worst = std::max(worst, std::abs(m_[i] - o.m_[i]));
  return worst;
}

Isometry Isometry::reorthonormalized() const {
  // Newton iteration M <- M (3 I - J M^T J M) / 2 toward the Lorentz group;
  // it moves M only by its own defect, unlike Gram-Schmidt.
  static constexpr std::array<double, 4> J{-1.0, 1.0, 1.0, 1.0};
  Matrix m = m_;
  for (int it = 0; it < 3; ++it) {
    Matrix e{};  // J M^T J M - I
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 4; ++k) acc += m[4 * k + i] * J[k] * m[4 * k + j];
        e[4 * i + j] = J[i] * acc - (i == j ? 1.0 : 0.0);
      }
    Matrix next{};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 4; ++k) acc += m[4 * i + k] * e[4 * k + j];
        next[4 * i + j] = m[4 * i + j] - 0.5 * acc;
      }
    m = next;
  }
  return Isometry(m);
}

// -------------------------------------------------------------- Geodesic

Geodesic Geodesic::standard() { return {HPoint::origin(), MVec4{{0.0, 0.0, 0.0, 1.0}}}; }

Geodesic Geodesic::through(const HPoint& a, const HPoint& b) {
  const HTangent t = log_map(a, b);
  const double n = t.norm();
  if (n < kDegenerateLength) throw Error(Errc::DegenerateEdge, "geodesic through coincident points");
  return {a, (1.0 / n) * t.dir};
}

HPoint Geodesic::at(double s) const {
  return on_sheet(std::cosh(s) * base.vec() + std::sinh(s) * dir);
}

// ------------------------------------------------------------ primitives

double dist(const HPoint& p, const HPoint& q) {
  const double c = -minkowski(p.vec(), q.vec());
  if (c >= 2.0) return std::acosh(c);
  return 2.0 * std::asinh(0.5 * std::sqrt(chord2(p.vec(), q.vec())));
}

HPoint exp_map(const HTangent& t) {
  const double n = t.norm();
  if (n == 0.0) return t.base;
  const double k = n < 1e-8 ? 1.0 + n * n / 6.0 : std::sinh(n) / n;
  return on_sheet(std::cosh(n) * t.base.vec() + k * t.dir);
}

HTangent log_map(const HPoint& p, const HPoint& q) {
  const double d = dist(p, q);
  if (d == 0.0) return {p, MVec4{}};
  const MVec4 diff = q.vec() - p.vec();
  const double half_chord2 = 0.5 * chord2(q.vec(), p.vec());
  // q + <p,q> p, rewritten so the small-distance case does not cancel.
  const MVec4 u = diff - half_chord2 * p.vec();
  const double k = d < 1e-8 ? 1.0 : d / std::sinh(d);
  return {p, k * u};
}

HPoint lerp(const HPoint& a, const HPoint& b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const HTangent v = log_map(a, b);
  return exp_map({a, t * v.dir});
}

double corner_angle_or_zero(const HPoint& apex, const HPoint& p, const HPoint& q) {
  const HTangent u = log_map(apex, p);
  const HTangent w = log_map(apex, q);
  const double nu = u.norm();
  const double nw = w.norm();
  if (nu < kDegenerateLength || nw < kDegenerateLength) return 0.0;
  const MVec4 a = (1.0 / nu) * u.dir;
  const MVec4 b = (1.0 / nw) * w.dir;
  const MVec4 dm = a - b;
  const MVec4 dp = a + b;
  const double x = std::sqrt(std::max(0.0, minkowski(dm, dm)));
  const double y = std::sqrt(std::max(0.0, minkowski(dp, dp)));
  return 2.0 * std::atan2(x, y);
}

double angle_at(const HPoint& apex, const HPoint& p, const HPoint& q) {
  if (dist(apex, p) < kDegenerateLength || dist(apex, q) < kDegenerateLength)
    throw Error(Errc::DegenerateCorner, "corner with a side shorter than 1e-12");
  return corner_angle_or_zero(apex, p, q);
}

bool is_degenerate(const HTriangle& t) {
  return dist(t.a, t.b) < kDegenerateLength || dist(t.b, t.c) < kDegenerateLength ||
         dist(t.c, t.a) < kDegenerateLength;
}

double triangle_area(const HTriangle& t) {
  if (is_degenerate(t)) return 0.0;
  const double s = corner_angle_or_zero(t.a, t.b, t.c) + corner_angle_or_zero(t.b, t.c, t.a) +
                   corner_angle_or_zero(t.c, t.a, t.b);
  const double area = kPi - s;
  if (area <= 0.0) return 0.0;
  return std::min(area, std::nextafter(kPi, 0.0));
}

// ------------------------------------------------------------- measures

double ball_volume(double r) {
  check_radius(r);
  return kPi * (std::sinh(2.0 * r) - 2.0 * r);
}

double sphere_area(double r) {
  check_radius(r);
  const double s = std::sinh(r);
  return 4.0 * kPi * s * s;
}

double equatorial_disc_area(double r) {
  check_radius(r);
  return 2.0 * kPi * (std::cosh(r) - 1.0);
}

Isometry frame_of(const Geodesic& axis) {
  const MVec4& b = axis.base.vec();
  const MVec4 d = axis.dir - minkowski(axis.dir, b) / minkowski(b, b) * b;
  const MVec4 t = (1.0 / std::sqrt(minkowski(d, d))) * d;
  // complete {b, t} to a Lorentz-orthonormal frame with the spatial axes
  std::array<MVec4, 2> normals{};
  std::size_t found = 0;
  for (std::size_t k = 1; k <= 3 && found < 2; ++k) {
    MVec4 e{};
    e[k] = 1.0;
    MVec4 v = e + minkowski(e, b) * b - minkowski(e, t) * t;
    for (std::size_t p = 0; p < found; ++p) v = v - minkowski(v, normals[p]) * normals[p];
    const double n2 = minkowski(v, v);
    if (n2 < 1e-6) continue;
    normals[found++] = (1.0 / std::sqrt(n2)) * v;
  }
  if (found < 2) {
    MVec4 e{{1.0, 0.0, 0.0, 0.0}};
    MVec4 v = e + minkowski(e, b) * b - minkowski(e, t) * t;
    for (std::size_t p = 0; p < found; ++p) v = v - minkowski(v, normals[p]) * normals[p];
    normals[found++] = (1.0 / std::sqrt(minkowski(v, v))) * v;
  }
  Isometry::Matrix m{};
  const std::array<MVec4, 4> cols{b, normals[0], normals[1], t};
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t r = 0; r < 4; ++r) m[4 * r + c] = cols[c][r];
  const double det = det4({cols[0], cols[1], cols[2], cols[3]});
  if (det < 0.0)
    for (std::size_t r = 0; r < 4; ++r) m[4 * r + 2] = -m[4 * r + 2];
  return Isometry::from_matrix_unchecked(m);
}

HPoint fermi_to_hyperboloid(const FermiPoint& f, const Geodesic& axis) {
  const double cr = std::cosh(f.rho);
  const double sr = std::sinh(f.rho);
  const MVec4 local{{cr * std::cosh(f.z), sr * std::cos(f.phi), sr * std::sin(f.phi),
                     cr * std::sinh(f.z)}};
  return on_sheet(frame_of(axis).apply(local));
}

double dist_to_geodesic(const HPoint& p, const Geodesic& axis) {
  const double a = minkowski(p.vec(), axis.base.vec());
  const double b = minkowski(p.vec(), axis.dir);
  return std::asinh(std::sqrt(std::max(0.0, a * a - b * b - 1.0)));
}

double plane_cap_volume(double r, double d) {
  check_radius(r);
  if (!(d >= 0.0) || !(d <= r))
    throw Error(Errc::OutOfRange, "plane distance must lie in [0, r]");
  if (d == r) return 0.0;
  const double cr = std::cosh(r);
  // volume element cosh(rho) sinh(rho) drho dz dphi, ball cosh(rho) cosh(z) <= cosh(r)
  auto element = [](double /*z*/, double rho) {
    return 2.0 * kPi * std::cosh(rho) * std::sinh(rho);
  };
  auto lo = [](double) { return 0.0; };
  auto hi = [cr](double z) { return std::acosh(std::max(1.0, cr / std::cosh(z))); };
  return quad::integrate2(element, d, r, lo, hi, 1e-9);
}

namespace {

// Pure boost carrying the origin to p.
Isometry boost_to(const MVec4& v) {
  Isometry::Matrix m{};
  m[0] = v[0];
  for (std::size_t i = 1; i < 4; ++i) {
    m[i] = v[i];
    m[4 * i] = v[i];
    for (std::size_t j = 1; j < 4; ++j) m[4 * i + j] = (i == j ? 1.0 : 0.0) + v[i] * v[j] / (1.0 + v[0]);
  }
  return Isometry::from_matrix_unchecked(m);
}

}  // namespace

namespace {

// n with <n, x> = 0 for x in {p, q, r}: the Euclidean generalized cross
// product with the time component negated.
MVec4 minkowski_normal(const MVec4& p, const MVec4& q, const MVec4& r) {
  auto minor = [&](std::size_t skip) {
    std::array<std::size_t, 3> c{};
    for (std::size_t i = 0, k = 0; i < 4; ++i)
      if (i != skip) c[k++] = i;
    return p[c[0]] * (q[c[1]] * r[c[2]] - q[c[2]] * r[c[1]]) - p[c[1]] * (q[c[0]] * r[c[2]] - q[c[2]] * r[c[0]]) +
           p[c[2]] * (q[c[0]] * r[c[1]] - q[c[1]] * r[c[0]]);
  };
  MVec4 n{};
  for (std::size_t i = 0; i < 4; ++i) n[i] = (i % 2 == 0 ? 1.0 : -1.0) * minor(i) * kJ[i];
  return n;
}

constexpr std::array<std::array<std::size_t, 2>, 6> kEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Dihedral angle at edge (i, j): between the faces opposite the other two.
std::array<double, 6> dihedral_angles(const std::array<MVec4, 4>& v) {
  std::array<MVec4, 4> n;
  for (std::size_t i = 0; i < 4; ++i) {
    std::array<std::size_t, 3> f{};
    for (std::size_t k = 0, m = 0; k < 4; ++k)
      if (k != i) f[m++] = k;
    MVec4 x = minkowski_normal(v[f[0]], v[f[1]], v[f[2]]);
    x = (1.0 / std::sqrt(minkowski(x, x))) * x;
    n[i] = minkowski(x, v[i]) < 0.0 ? x : -1.0 * x;  // outward
  }
  std::array<double, 6> out{};
  for (std::size_t e = 0; e < 6; ++e) {
    std::array<std::size_t, 2> other{};
    for (std::size_t k = 0, m = 0; k < 4; ++k)
      if (k != kEdges[e][0] && k != kEdges[e][1]) other[m++] = k;
    out[e] = std::acos(std::clamp(-minkowski(n[other[0]], n[other[1]]), -1.0, 1.0));
  }
  return out;
}

}  // namespace

double tetrahedron_volume(const HPoint& a, const HPoint& b, const HPoint& c, const HPoint& d, double tol) {
  const MVec4 sum = a.vec() + b.vec() + c.vec() + d.vec();
  const HPoint center = HPoint::from_vector(sum);
  const std::array<HPoint, 4> pts{a, b, c, d};
  {
    // degenerate test in the frame of the center, where coordinates are small
    const Isometry to_origin = boost_to(center.vec()).inverse();
    std::array<MVec4, 4> w;
    for (std::size_t i = 0; i < 4; ++i) w[i] = to_origin.apply(pts[i].vec());
    if (std::abs(det4(w)) < 1e-13) return 0.0;
  }
  // Contract the tetrahedron toward its center, p_i(t) = exp(t log p_i).
  // Schlafli, dV = -1/2 sum l_e d(theta_e), integrated by parts from the
  // point t = 0, gives V = 1/2 int_0^1 sum (theta_e(t) - theta_e(1)) l_e'(t) dt.
  std::array<HTangent, 4> arm;
  std::array<double, 4> len{};
  for (std::size_t i = 0; i < 4; ++i) {
    arm[i] = log_map(center, pts[i]);
    len[i] = arm[i].norm();
  }
  auto state = [&](double t, std::array<MVec4, 4>& p, std::array<MVec4, 4>& vel) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (len[i] == 0.0) {
        p[i] = center.vec();
        vel[i] = MVec4{};
        continue;
      }
      const MVec4 u = (1.0 / len[i]) * arm[i].dir;
      const double ch = std::cosh(t * len[i]), sh = std::sinh(t * len[i]);
      p[i] = ch * center.vec() + sh * u;
      vel[i] = len[i] * (sh * center.vec() + ch * u);
    }
  };
  std::array<MVec4, 4> p1, v1;
  state(1.0, p1, v1);
  const auto theta1 = dihedral_angles(p1);
  auto integrand = [&](double t) {
    std::array<MVec4, 4> p, vel;
    state(t, p, vel);
    const auto theta = dihedral_angles(p);
    double acc = 0.0;
    for (std::size_t e = 0; e < 6; ++e) {
      const std::size_t i = kEdges[e][0], j = kEdges[e][1];
      const HPoint pi = HPoint::from_vector(p[i]), pj = HPoint::from_vector(p[j]);
      const HTangent uij = log_map(pi, pj), uji = log_map(pj, pi);
      const double nij = uij.norm(), nji = uji.norm();
      if (nij == 0.0 || nji == 0.0) continue;
      const double dl = -minkowski(vel[i], uij.dir) / nij - minkowski(vel[j], uji.dir) / nji;
      acc += (theta[e] - theta1[e]) * dl;
    }
    return 0.5 * acc;
  };
  return std::max(0.0, quad::integrate(integrand, 0.0, 1.0, tol, 30));
}

HPoint random_point(std::mt19937_64& rng, double max_dist) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, max_dist);
  double x = g(rng), y = g(rng), z = g(rng);
  const double n = std::sqrt(x * x + y * y + z * z);
  if (n == 0.0) return HPoint::origin();
  const double s = std::sinh(u(rng)) / n;
  return HPoint::from_spatial(s * x, s * y, s * z);
}

Isometry random_isometry(std::mt19937_64& rng, double max_translation) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  const Isometry rot = Isometry::rotation(1, 2, ang(rng)) * Isometry::rotation(2, 3, ang(rng)) *
                       Isometry::rotation(1, 2, ang(rng));
  return boost_to(random_point(rng, max_translation).vec()) * rot;
}

}  // namespace hypsweep::hyp
