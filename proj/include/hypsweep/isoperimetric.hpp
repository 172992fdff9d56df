#pragma once

// Half-volume surfaces of revolution in a hyperbolic ball.
//
// Profiles live in the Fermi half-plane (rho >= 0, z) about an axis through
// the ball center; the ball is cosh(rho) cosh(z) <= cosh(r). A disc-type
// profile starts on the axis and ends on the ball boundary; a sphere-type
// profile starts and ends on the axis.
//
// Volumes come from Stokes: the volume form 2 pi sinh(rho) cosh(rho)
// drho dz is d(pi sinh^2(rho) dz), so the volume below a disc-type profile
// is the integral of pi sinh^2(rho) dz up the ball boundary minus the same
// integral along the profile. Along a straight segment in (rho, z) the
// latter has a closed form, so polyline volumes are exact.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypsweep/parallel.hpp"

namespace hypsweep::iso {

struct BallSpec {
  double r = 1.0;

  bool contains(double rho, double z, double tol = 0.0) const;
  double volume() const;
};

struct ProfileNode {
  double rho = 0.0;
  double z = 0.0;
};

enum class ProfileKind { disc, sphere };

struct ProfileCurve {
  std::vector<ProfileNode> nodes;
  ProfileKind kind = ProfileKind::disc;

  /// The flat profile z = 0, rho in [0, r], with n nodes.
  static ProfileCurve equatorial(double r, int n);
  /// The plane z = h cut off by the ball, with n nodes.
  static ProfileCurve plane(double r, double h, int n);
  /// The sphere of radius s about the center, n nodes uniform in polar angle.
  static ProfileCurve sphere(double s, int n);
  ProfileCurve mirrored() const;
};

/// Sum over segments of the integral of 2 pi sinh(rho) ds with
/// ds^2 = drho^2 + cosh^2(rho) dz^2 (adaptive quadrature per segment).
double area_of_revolution(const ProfileCurve& c);

/// Volume below a disc-type profile, or inside a sphere-type profile.
/// Throws OpenRegion if a disc-type profile does not run from the axis to
/// the ball boundary (tolerance 1e-8), InvalidInput for an open sphere.
double enclosed_volume(const ProfileCurve& c, const BallSpec& b);

/// Volume of the ball below the plane z = h, |h| <= r (closed form).
double volume_below_plane(const BallSpec& b, double h);
/// Height of the plane with the given volume fraction below it.
double plane_height_for_fraction(const BallSpec& b, double fraction);

struct IsoperimetricProblem {
  BallSpec ball;
  double volume_fraction = 0.5;
};

struct OptimizerConfig {
  int n_nodes = 64;
  int max_iters = 20000;           // total inner iterations
  int max_outer = 60;
  double initial_step = 1e-2;      // first step; Barzilai-Borwein afterwards
  double penalty = 10.0;           // initial augmented-Lagrangian weight
  double penalty_growth = 4.0;
  double volume_tolerance = -1.0;  // absolute; negative means 1e-6 V(B)
  double grad_tolerance = 1e-6;
  std::uint64_t seed = 1;
  double noise = 0.1;              // init amplitude as a fraction of r
  std::optional<std::vector<double>> initial_z;  // overrides the init

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double area = 0.0;
  double volume_error = 0.0;  // (V - target) / V(B)
  double grad_norm = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
};

struct MinimizeReport {
  int iterations = 0;
  int outer_iterations = 0;
  bool converged = false;
  double volume_error = 0.0;     // absolute
  double kkt_residual = 0.0;     // min over l of |grad A + l grad V|
  double lambda = 0.0;
  double max_plane_distance = 0.0;  // max node distance to z = 0
  double boundary_angle = 0.0;   // angle between profile and boundary, pi/2 is orthogonal
  std::vector<IterationRecord> trace;
};

struct MinimizeResult {
  ProfileCurve curve;
  double area = 0.0;
  double volume = 0.0;
  MinimizeReport report;
};

/// Minimizes area among disc-type graph profiles z(rho) with
/// rho_i = (i/N) rho_end(z_N) and the last node on the ball boundary, under
/// the volume constraint. Throws InvalidConfig, InfeasibleStart,
/// NonConvergence.
MinimizeResult minimize(const IsoperimetricProblem& p, const OptimizerConfig& cfg);

namespace detail {
/// Discrete objective used by the optimizer, exposed for derivative tests.
struct GraphProfile {
  double r;
  int n;  // number of nodes

  std::vector<ProfileNode> nodes(const std::vector<double>& z) const;
  double area(const std::vector<double>& z, std::vector<double>* grad) const;
  double volume(const std::vector<double>& z, std::vector<double>* grad) const;
};
/// Fixed-rule area of one segment and its partials (rho_a, rho_b, z_a, z_b).
double segment_area(double ra, double rb, double za, double zb, double* g);
/// Exact pi int sinh^2(rho) dz along one segment and its partials.
double segment_flux(double ra, double rb, double za, double zb, double* g);
}  // namespace detail

struct PlaneRow {
  double d = 0.0;
  double area = 0.0;
  double volume = 0.0;
};

/// n planes at distances d = r i / (n-1): section area and the cap volume
/// beyond the plane (2D quadrature).
std::vector<PlaneRow> plane_family_scan(const BallSpec& b, int n, Exec exec = Exec::parallel);

/// Competitor regions B' for the half-volume problem.
///
/// "ball": metric ball of radius s centered on the axis at distance
/// `offset` from the center. "umbilic": the region above the umbilic
/// surface cosh(rho) (k cosh w - sinh w) = k, w = z - offset, for curvature
/// k in [0, 1] (plane, equidistant surface, horosphere). Metric balls tend
/// to horoballs, not half-spaces, as their radius grows, so the umbilic
/// family is what reaches the flat limit.
struct CapRow {
  std::string family;
  double kappa = 0.0;   // curvature of the cutting surface, coth(s) for balls
  double offset = 0.0;
  double radius = 0.0;  // s for balls, 0 otherwise
  double area = 0.0;    // area of the cutting surface inside B
  double volume = 0.0;  // volume of B and B'
  bool half_volume = false;
};

CapRow ball_cap(const BallSpec& b, double offset, double s);
CapRow umbilic_cap(const BallSpec& b, double kappa, double offset);
/// Half-volume members (bisection on the offset); nullopt if none exists.
std::optional<CapRow> half_volume_ball_cap(const BallSpec& b, double s);
CapRow half_volume_umbilic_cap(const BallSpec& b, double kappa);

/// The n x n ball grid (radii 2r(i+1)/n, offsets 2r j/(n-1)), the B' = B
/// row, and half-volume members of both families for n parameter values.
std::vector<CapRow> sphere_cap_family_scan(const BallSpec& b, int n, Exec exec = Exec::parallel);

}  // namespace hypsweep::iso
