#include "hypsweep/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypsweep/error.hpp"

namespace hypsweep::bounds {

namespace {
constexpr double kPi = std::numbers::pi;
}

GenusBound min_genus_from_radius(double r, bool assume_prh) {
  if (!(r >= 0.0)) throw Error(Errc::NegativeRadius, "radius must be non-negative");
  GenusBound b;
  b.r = r;
  b.assume_prh = assume_prh;
  b.raw = assume_prh ? 0.5 * (std::cosh(r) + 1.0) : 0.5 * std::cosh(r);
  b.formula = assume_prh ? "g >= (cosh(r) + 1) / 2" : "g >= cosh(r) / 2";
  if (!(b.raw < 4.0e18)) throw Error(Errc::OutOfRange, "genus bound exceeds the integer range");
  // cosh(arccosh(n)) can land an ulp above n; do not let that bump the ceiling
  double k = std::ceil(b.raw);
  if (k - 1.0 >= b.raw * (1.0 - 1e-14)) k -= 1.0;
  b.min_genus = std::max<std::int64_t>(1, static_cast<std::int64_t>(k));
  return b;
}

double max_radius_from_genus(std::int64_t g, bool assume_prh) {
  if (g < 1) throw Error(Errc::InvalidGenus, "genus must be at least 1");
  const double n = static_cast<double>(g);
  return std::acosh(assume_prh ? 2.0 * n - 1.0 : 2.0 * n);
}

AreaBound area_bound(int g) {
  if (g < 1) throw Error(Errc::InvalidGenus, "genus must be at least 1");
  return {g, kPi * (4.0 * g - 2.0), 2.0 * kPi * (2.0 * g - 2.0)};
}

double radius_from_sweepout_area(double area) {
  if (!(area >= 0.0)) throw Error(Errc::NegativeArea, "area must be non-negative");
  const double x = area / (2.0 * kPi);
  // arccosh(1 + x) without the cancellation near x = 0
  return std::log1p(x + std::sqrt(x * (2.0 + x)));
}

double lobachevsky(double theta) {
  double t = std::remainder(theta, kPi);  // in [-pi/2, pi/2]
  if (t == 0.0) return 0.0;
  const double sign = t < 0.0 ? -1.0 : 1.0;
  t = std::abs(t);
  // Lambda(t) = t - t log(2t) + sum_n zeta(2n) / (n (2n + 1)) t^(2n+1) / pi^(2n)
  const double q = (t / kPi) * (t / kPi);
  double sum = t - t * std::log(2.0 * t);
  double pw = t;
  for (int n = 1; n < 80; ++n) {
    pw *= q;
    const double term = std::riemann_zeta(2.0 * n) / (n * (2.0 * n + 1.0)) * pw;
    sum += term;
    if (term < 1e-18 * std::abs(sum)) break;
  }
  return sign * sum;
}

double lobachevsky_fourier(double theta, int terms) {
  double s = 0.0;
  for (int n = terms; n >= 1; --n) s += std::sin(2.0 * n * theta) / (static_cast<double>(n) * n);
  return 0.5 * s;
}

double ideal_tetrahedron_volume() { return 3.0 * lobachevsky(kPi / 3.0); }

VolumeBound volume_upper_bound(std::int64_t n_flips) {
  if (n_flips < 0) throw Error(Errc::OutOfRange, "flip count must be non-negative");
  const double v3 = ideal_tetrahedron_volume();
  return {n_flips, v3, static_cast<double>(n_flips) * v3};
}

}  // namespace hypsweep::bounds
