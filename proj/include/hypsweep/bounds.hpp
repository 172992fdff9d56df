#pragma once

// Genus, radius, area and volume inequalities in closed form, and the
// Lobachevsky function.

#include <cstdint>
#include <string>

namespace hypsweep::bounds {

/// Lower bound on genus given an embedded ball of radius r. `raw` is the
/// real bound cosh(r)/2, or (cosh(r)+1)/2 when a minimal surface of genus
/// at most g is assumed to bound the sweepout; `min_genus` is its ceiling.
struct GenusBound {
  double r = 0.0;
  bool assume_prh = false;
  double raw = 0.0;
  std::int64_t min_genus = 1;
  std::string formula;
};

struct AreaBound {
  int g = 1;
  double sweepout_area = 0.0;         // pi (4g - 2)
  double minimal_surface_area = 0.0;  // 2 pi (2g - 2)
};

struct VolumeBound {
  std::int64_t n_flips = 0;
  double v3 = 0.0;
  double bound = 0.0;
};

GenusBound min_genus_from_radius(double r, bool assume_prh = false);
double max_radius_from_genus(std::int64_t g, bool assume_prh = false);
AreaBound area_bound(int g);
/// arccosh(1 + A / (2 pi)): the radius of a ball whose equatorial disc has
/// area A.
double radius_from_sweepout_area(double area);

/// Lambda(theta) = -int_0^theta log|2 sin u| du, odd and pi-periodic.
/// Evaluated from the even zeta values after reducing theta to
/// [-pi/2, pi/2]; accurate to a few ulps.
double lobachevsky(double theta);
/// Partial sum of 1/2 sum sin(2 n theta) / n^2 (slow; for cross-checks).
double lobachevsky_fourier(double theta, int terms);
/// Volume of the regular ideal tetrahedron, 3 Lambda(pi/3).
double ideal_tetrahedron_volume();
VolumeBound volume_upper_bound(std::int64_t n_flips);

}  // namespace hypsweep::bounds
