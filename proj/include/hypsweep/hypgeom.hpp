#pragma once

// Hyperbolic 3-space in the hyperboloid model.
//
// Points live on the upper sheet {x : <x,x> = -1, x0 > 0} of Minkowski space
// with the form <x,y> = -x0*y0 + x1*y1 + x2*y2 + x3*y3. Isometries are the
// 4x4 matrices preserving that form and the upper sheet.
//
// Fermi coordinates (rho, z, phi) about an oriented geodesic axis are fixed
// by the metric convention
//
//     ds^2 = d rho^2 + cosh^2(rho) dz^2 + sinh^2(rho) dphi^2,
//
// so {z = const} is the totally geodesic plane orthogonal to the axis at
// arclength z, and {z = 0} through the ball center is the equatorial plane.
//
// Note: curvature is fixed at -1 throughout. Whether the half-volume area
// bound survives in variable curvature <= -1 is an open question; nothing
// here attempts it.

#include <array>
#include <cstddef>
#include <random>

namespace hypsweep::hyp {

/// Side length below which a triangle corner is treated as degenerate.
inline constexpr double kDegenerateLength = 1e-12;
/// Tolerance on |<v,v> + 1| for every constructed point.
inline constexpr double kSheetTolerance = 1e-9;

struct MVec4 {
  std::array<double, 4> x{};

  double& operator[](std::size_t i) { return x[i]; }
  double operator[](std::size_t i) const { return x[i]; }

  friend MVec4 operator+(const MVec4& a, const MVec4& b) {
    return {{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}};
  }
  friend MVec4 operator-(const MVec4& a, const MVec4& b) {
    return {{a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}};
  }
  friend MVec4 operator*(double s, const MVec4& a) {
    return {{s * a[0], s * a[1], s * a[2], s * a[3]}};
  }
  friend bool operator==(const MVec4&, const MVec4&) = default;
};

/// The Minkowski form of signature (-,+,+,+).
inline double minkowski(const MVec4& a, const MVec4& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

/// Point of H^3. Construction always renormalizes onto the upper sheet.
class HPoint {
 public:
  HPoint() : v_{{1.0, 0.0, 0.0, 0.0}} {}

  /// Projects a future-timelike vector onto the sheet; throws InvalidInput
  /// for vectors that are not future timelike.
  static HPoint from_vector(const MVec4& v);
  /// Point with the given spatial coordinates (x0 is recomputed).
  static HPoint from_spatial(double x1, double x2, double x3);
  static HPoint origin() { return HPoint(); }

  const MVec4& vec() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

 private:
  explicit HPoint(const MVec4& v) : v_(v) {}
  MVec4 v_;
};

struct HTangent {
  HPoint base;
  MVec4 dir;

  double norm() const;
};

struct HTriangle {
  HPoint a, b, c;
};

class Isometry {
 public:
  using Matrix = std::array<double, 16>;  // row-major

  Isometry();  // identity
  /// Validates the Lorentz condition and time orientation (InvalidInput).
  static Isometry from_matrix(const Matrix& m, double tol = kSheetTolerance);
  /// Unchecked constructor for matrices produced by this library.
  static Isometry from_matrix_unchecked(const Matrix& m);

  /// Hyperbolic translation by signed distance t along the spatial axis
  /// `axis` (1, 2 or 3) through the origin.
  static Isometry translation(int axis, double t);
  /// Rotation by `angle` in the spatial (i, j) plane, 1 <= i, j <= 3.
  static Isometry rotation(int i, int j, double angle);

  double operator()(std::size_t r, std::size_t c) const { return m_[4 * r + c]; }
  const Matrix& matrix() const { return m_; }

  Isometry operator*(const Isometry& o) const;
  HPoint apply(const HPoint& p) const;
  MVec4 apply(const MVec4& v) const;
  /// Inverse via J m^T J.
  Isometry inverse() const;

  /// max_ij |(m^T J m - J)_ij|.
  double lorentz_defect() const;
  /// max_ij |m_ij - o_ij|.
  double max_abs_diff(const Isometry& o) const;
  /// Minkowski Gram-Schmidt on the columns; removes accumulated roundoff.
  Isometry reorthonormalized() const;

 private:
  explicit Isometry(const Matrix& m) : m_(m) {}
  Matrix m_;
};

/// Oriented geodesic through `base` with unit tangent `dir`.
struct Geodesic {
  HPoint base;
  MVec4 dir;

  /// The axis through the origin along spatial coordinate x3.
  static Geodesic standard();
  /// Geodesic from a toward b (throws DegenerateEdge when a == b).
  static Geodesic through(const HPoint& a, const HPoint& b);
  HPoint at(double s) const;
};

struct FermiPoint {
  double rho = 0.0;
  double z = 0.0;
  double phi = 0.0;
};

double dist(const HPoint& p, const HPoint& q);
HPoint exp_map(const HTangent& t);
HTangent log_map(const HPoint& p, const HPoint& q);

/// Constant-speed geodesic from a (t = 0) to b (t = 1).
HPoint lerp(const HPoint& a, const HPoint& b, double t);

/// Angle at `apex` between the geodesics toward p and q, in [0, pi].
/// Throws DegenerateCorner if either side is shorter than kDegenerateLength.
double angle_at(const HPoint& apex, const HPoint& p, const HPoint& q);
/// Same angle, or 0 for a degenerate corner.
double corner_angle_or_zero(const HPoint& apex, const HPoint& p, const HPoint& q);

/// Area of the geodesic triangle by angle defect; degenerate triangles
/// (any side shorter than kDegenerateLength) have area 0. Always in [0, pi).
double triangle_area(const HTriangle& t);
bool is_degenerate(const HTriangle& t);

double ball_volume(double r);
double sphere_area(double r);
double equatorial_disc_area(double r);

HPoint fermi_to_hyperboloid(const FermiPoint& f, const Geodesic& axis = Geodesic::standard());
/// Isometry taking the standard axis (and its Fermi frame) onto `axis`.
Isometry frame_of(const Geodesic& axis);
double dist_to_geodesic(const HPoint& p, const Geodesic& axis);

/// Volume of the part of the radius-r ball beyond a totally geodesic plane
/// at distance d from the center; 2D quadrature in Fermi coordinates.
double plane_cap_volume(double r, double d);

/// Volume of the geodesic tetrahedron on four points: the Schlafli formula
/// integrated along the contraction of the tetrahedron to its center (a 1D
/// quadrature that stays smooth as vertices approach the ideal boundary).
/// Vertices further than about 14 from their centroid exceed what double
/// hyperboloid coordinates resolve.
double tetrahedron_volume(const HPoint& a, const HPoint& b, const HPoint& c, const HPoint& d,
                          double tol = 1e-9);

/// Random point at distance at most max_dist from the origin, with
/// direction uniform on the sphere.
HPoint random_point(std::mt19937_64& rng, double max_dist);
/// Random orientation-preserving isometry moving the origin by at most
/// max_translation.
Isometry random_isometry(std::mt19937_64& rng, double max_translation);

}  // namespace hypsweep::hyp
