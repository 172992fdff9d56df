#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypsweep/error.hpp"
#include "hypsweep/hypgeom.hpp"
#include "hypsweep/isoperimetric.hpp"
#include "hypsweep/quadrature.hpp"

namespace hypsweep::iso {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-12;

double boundary_flux(double r, double z) {
  const double c = std::cosh(r);
  return kPi * (c * c * std::tanh(z) - z);
}

void check(const BallSpec& b) {
  if (b.r < 0.0) throw Error(Errc::NegativeRadius, "ball radius must be non-negative");
}

// Height of the umbilic surface above its axis point, as a function of rho.
double umbilic_w(double kappa, double rho) {
  if (kappa == 0.0) return 0.0;
  if (kappa == 1.0) return std::log(std::cosh(rho));
  return std::atanh(kappa) - std::asinh(kappa / (std::cosh(rho) * std::sqrt(1.0 - kappa * kappa)));
}

double umbilic_slope(double kappa, double rho) {
  const double w = umbilic_w(kappa, rho);
  return kappa * std::tanh(rho) / (std::cosh(rho) * (std::cosh(w) - kappa * std::sinh(w)));
}

template <class Volume>
double bisect_offset(double lo, double hi, double target, Volume vol) {
  // vol is non-increasing in the offset
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (vol(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CapRow ball_cap(const BallSpec& b, double offset, double s) {
  check(b);
  if (s < 0.0) throw Error(Errc::NegativeRadius, "cap radius must be non-negative");
  const double p = std::abs(offset);
  const double r = b.r;
  CapRow row{"ball", s > 0.0 ? 1.0 / std::tanh(s) : 0.0, offset, s, 0.0, 0.0, false};
  if (s >= p + r) {
    row.volume = b.volume();
    return row;
  }
  if (p + s <= r) {
    row.area = hyp::sphere_area(s);
    row.volume = hyp::ball_volume(s);
    return row;
  }
  if (p >= s + r) return row;

  const double ss = std::sinh(s), cs = std::cosh(s);
  const double sp = std::sinh(p), cp = std::cosh(p);
  // 1 - cos(alpha_x) without cancellation, since cosh s cosh p - sinh s sinh p = cosh(s - p)
  const double delta = std::clamp(
      2.0 * std::sinh(0.5 * (r + s - p)) * std::sinh(0.5 * (r - s + p)) / (ss * sp), 0.0, 2.0);
  const double ax = 2.0 * std::asin(std::sqrt(0.5 * delta));
  // polar angle measured from the point of the sphere nearest the ball center
  row.area = 2.0 * kPi * ss * ss * delta;
  const double x0 = std::cosh(s - p) + ss * delta * sp;
  const double x3 = std::sinh(p - s) + ss * delta * cp;
  const double zx = std::atanh(std::clamp(x3 / x0, -1.0, 1.0));
  auto flux = [&](double a) {
    const double sa = std::sin(a);
    return kPi * ss * ss * sa * sa * (ss * cs * sa) / (1.0 + ss * ss * sa * sa);
  };
  row.volume = quad::integrate(flux, 0.0, ax, kQuadTol) + boundary_flux(r, r) - boundary_flux(r, zx);
  row.volume = std::clamp(row.volume, 0.0, b.volume());
  return row;
}

CapRow umbilic_cap(const BallSpec& b, double kappa, double offset) {
  check(b);
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw Error(Errc::OutOfRange, "umbilic curvature must lie in [0, 1]");
  const double r = b.r;
  CapRow row{"umbilic", kappa, offset, 0.0, 0.0, 0.0, false};
  if (offset >= r) return row;
  if (offset <= -r) {
    row.volume = b.volume();
    return row;
  }
  const double cr = std::cosh(r);
  double lo = 0.0, hi = r;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::cosh(mid) * std::cosh(offset + umbilic_w(kappa, mid)) < cr ? lo : hi) = mid;
  }
  const double rx = 0.5 * (lo + hi);
  const double zx = offset + umbilic_w(kappa, rx);
  auto flux = [&](double rho) {
    const double sh = std::sinh(rho);
    return kPi * sh * sh * umbilic_slope(kappa, rho);
  };
  auto area = [&](double rho) {
    const double w1 = umbilic_slope(kappa, rho);
    const double ch = std::cosh(rho);
    return 2.0 * kPi * std::sinh(rho) * std::sqrt(1.0 + ch * ch * w1 * w1);
  };
  row.area = quad::integrate(area, 0.0, rx, kQuadTol);
  row.volume = quad::integrate(flux, 0.0, rx, kQuadTol) + boundary_flux(r, r) - boundary_flux(r, zx);
  row.volume = std::clamp(row.volume, 0.0, b.volume());
  return row;
}

std::optional<CapRow> half_volume_ball_cap(const BallSpec& b, double s) {
  check(b);
  const double half = 0.5 * b.volume();
  if (hyp::ball_volume(s) < half) return std::nullopt;
  const double p = bisect_offset(0.0, b.r + s, half, [&](double x) { return ball_cap(b, x, s).volume; });
  CapRow row = ball_cap(b, p, s);
  row.half_volume = true;
  return row;
}

CapRow half_volume_umbilic_cap(const BallSpec& b, double kappa) {
  check(b);
  const double half = 0.5 * b.volume();
  const double h = bisect_offset(-b.r, b.r, half, [&](double x) { return umbilic_cap(b, kappa, x).volume; });
  CapRow row = umbilic_cap(b, kappa, h);
  row.half_volume = true;
  return row;
}

std::vector<CapRow> sphere_cap_family_scan(const BallSpec& b, int n, Exec exec) {
  check(b);
  if (n < 2) throw Error(Errc::OutOfRange, "need at least 2 grid values");
  const double r = b.r;
  const double half = 0.5 * b.volume();
  // smallest ball radius that can hold half the volume
  double lo = 0.0, hi = r;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (hyp::ball_volume(mid) < half ? lo : hi) = mid;
  }
  const double s_min = hi;

  const std::size_t grid = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t total = grid + 1 + 2 * static_cast<std::size_t>(n);
  std::vector<CapRow> rows(total);
  for_each_index(total, exec, [&](std::size_t k) {
    if (k < grid) {
      const double i = static_cast<double>(k / static_cast<std::size_t>(n));
      const double j = static_cast<double>(k % static_cast<std::size_t>(n));
      rows[k] = ball_cap(b, 2.0 * r * j / (n - 1), 2.0 * r * (i + 1) / n);
      rows[k].half_volume = std::abs(rows[k].volume - half) <= 1e-9 * b.volume();
    } else if (k == grid) {
      rows[k] = ball_cap(b, 0.0, r);
    } else if (k <= grid + static_cast<std::size_t>(n)) {
      const double i = static_cast<double>(k - grid - 1);
      // radii from the smallest feasible one out towards the horoball limit
      const double s = s_min + 8.0 * r * i / (n - 1);
      rows[k] = *half_volume_ball_cap(b, s);
    } else {
      const double i = static_cast<double>(k - grid - 1 - static_cast<std::size_t>(n));
      rows[k] = half_volume_umbilic_cap(b, i / (n - 1));
    }
  });
  return rows;
}

}  // namespace hypsweep::iso
