#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypsweep/error.hpp"
#include "hypsweep/hypgeom.hpp"
#include "hypsweep/isoperimetric.hpp"
#include "oracles.hpp"

using namespace hypsweep;
using namespace hypsweep::iso;

namespace {

constexpr double kPi = std::numbers::pi;

double disc_area(double r) { return 2.0 * kPi * (std::cosh(r) - 1.0); }
double ball_vol(double r) { return kPi * (std::sinh(2.0 * r) - 2.0 * r); }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidInput;
}

// Volume of B(r) meet the ball of radius s about the axis point z = p, by
// integrating 2 pi sinh cosh over the z-interval shared by both balls.
double two_ball_volume(double r, double p, double s) {
  auto len = [&](double rho) {
    const double ch = std::cosh(rho);
    if (ch > std::cosh(r) || ch > std::cosh(s)) return 0.0;
    const double b = std::acosh(std::cosh(r) / ch);
    const double a = std::acosh(std::cosh(s) / ch);
    return std::max(0.0, std::min(b, p + a) - std::max(-b, p - a));
  };
  const double top = std::min(r, s);
  return oracle::gk([&](double rho) { return 2.0 * kPi * std::sinh(rho) * std::cosh(rho) * len(rho); }, 0.0, top,
                    1e-11);
}

// half of the sphere of radius r, from the bottom pole to the rim of the ball
ProfileCurve lower_boundary(double r, int n) {
  ProfileCurve c;
  for (int k = 0; k < n; ++k) {
    const double a = 0.5 * kPi * k / (n - 1);
    c.nodes.push_back({k == 0 ? 0.0 : std::asinh(std::sinh(r) * std::sin(a)), -std::atanh(std::tanh(r) * std::cos(a))});
  }
  c.nodes.back() = {r, 0.0};
  return c;
}

}  // namespace

TEST_SUITE("isoperimetric") {
  TEST_CASE("area_of_revolution: disc, sphere, trivial curves") {
    for (double r : {0.5, 1.0, 2.0, 3.0}) {
      CHECK(std::abs(area_of_revolution(ProfileCurve::equatorial(r, 33)) - disc_area(r)) <= 1e-9);
    }
    const double s = 0.8;
    const double exact = 4.0 * kPi * std::sinh(s) * std::sinh(s);
    CHECK(std::abs(area_of_revolution(ProfileCurve::sphere(s, 8193)) - exact) <= 1e-6);
    CHECK(area_of_revolution(ProfileCurve{}) == 0.0);
    ProfileCurve one;
    one.nodes.push_back({0.3, 0.1});
    CHECK(area_of_revolution(one) == 0.0);
  }

  TEST_CASE("quadrature converges at second order") {
    const double s = 0.9;
    const double area = 4.0 * kPi * std::sinh(s) * std::sinh(s);
    const double vol = ball_vol(s);
    const BallSpec b{1.5};
    double prev_a = 0.0, prev_v = 0.0;
    for (int n = 9; n <= 257; n = 2 * n - 1) {
      const auto c = ProfileCurve::sphere(s, n);
      const double ea = std::abs(area_of_revolution(c) - area);
      const double ev = std::abs(enclosed_volume(c, b) - vol);
      if (prev_a > 0.0) {
        // inscribed polygons approach 4x from below: 4 (1 - O(h^2))
        if (ea > 1e-10) CHECK(prev_a / ea >= 3.9);
        if (ev > 1e-10) CHECK(prev_v / ev >= 3.9);
      }
      prev_a = ea;
      prev_v = ev;
    }
  }

  TEST_CASE("enclosed_volume: symmetric, cap and empty cases") {
    for (double r : {0.5, 1.0, 2.0}) {
      const BallSpec b{r};
      CHECK(std::abs(enclosed_volume(ProfileCurve::equatorial(r, 16), b) - ball_vol(r) / 2.0) <= 1e-8);
      for (double d : {0.1 * r, 0.5 * r, 0.9 * r}) {
        const double below = enclosed_volume(ProfileCurve::plane(r, d, 16), b);
        CHECK(std::abs((ball_vol(r) - below) - hyp::plane_cap_volume(r, d)) <= 1e-7);
        CHECK(std::abs(below - volume_below_plane(b, d)) <= 1e-9);
      }
      CHECK(enclosed_volume(lower_boundary(r, 400), b) <= 1e-5 * ball_vol(r));
    }
    // Monte-Carlo cross-check of one cap, 5 standard errors
    const auto [mc, se] = oracle::cap_volume_monte_carlo(1.0, 0.3, 400000, 5);
    CHECK(std::abs(ball_vol(1.0) - volume_below_plane({1.0}, 0.3) - mc) <= 5.0 * se);

    ProfileCurve open = ProfileCurve::equatorial(1.0, 8);
    open.nodes.back().rho = 0.9;
    CHECK(code_of([&] { enclosed_volume(open, {1.0}); }) == Errc::OpenRegion);
    open = ProfileCurve::equatorial(1.0, 8);
    open.nodes.front().rho = 0.1;
    CHECK(code_of([&] { enclosed_volume(open, {1.0}); }) == Errc::OpenRegion);
  }

  TEST_CASE("mirror symmetry") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    const BallSpec b{1.2};
    detail::GraphProfile gp{b.r, 24};
    std::vector<double> z(24);
    for (auto& v : z) v = u(rng);
    ProfileCurve c;
    c.nodes = gp.nodes(z);
    const auto m = c.mirrored();
    CHECK(std::abs(area_of_revolution(m) - area_of_revolution(c)) <= 1e-9);
    CHECK(std::abs(enclosed_volume(m, b) - (b.volume() - enclosed_volume(c, b))) <= 1e-9);
  }

  TEST_CASE("segment formulas against quadrature and finite differences") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 2.0), v(-0.5, 0.5);
    for (int k = 0; k < 50; ++k) {
      const double ra = u(rng), rb = u(rng), za = v(rng), zb = v(rng);
      const double flux = detail::segment_flux(ra, rb, za, zb, nullptr);
      const double ref = oracle::gk(
          [&](double s) {
            const double sh = std::sinh(ra + s * (rb - ra));
            return kPi * sh * sh * (zb - za);
          },
          0.0, 1.0, 1e-14);
      CHECK(std::abs(flux - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));

      double gf[4], ga[4];
      detail::segment_flux(ra, rb, za, zb, gf);
      detail::segment_area(ra, rb, za, zb, ga);
      const double h = 1e-6;
      double x[4] = {ra, rb, za, zb};
      for (int i = 0; i < 4; ++i) {
        double xp[4], xm[4];
        std::copy(x, x + 4, xp);
        std::copy(x, x + 4, xm);
        xp[i] += h;
        xm[i] -= h;
        const double fdf = (detail::segment_flux(xp[0], xp[1], xp[2], xp[3], nullptr) -
                            detail::segment_flux(xm[0], xm[1], xm[2], xm[3], nullptr)) / (2 * h);
        const double fda = (detail::segment_area(xp[0], xp[1], xp[2], xp[3], nullptr) -
                            detail::segment_area(xm[0], xm[1], xm[2], xm[3], nullptr)) / (2 * h);
        CHECK(std::abs(fdf - gf[i]) <= 1e-6 * std::max(1.0, std::abs(gf[i])));
        CHECK(std::abs(fda - ga[i]) <= 1e-6 * std::max(1.0, std::abs(ga[i])));
      }
    }
  }

  TEST_CASE("graph profile gradients") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> v(-0.2, 0.2);
    for (double r : {0.5, 1.0, 2.0}) {
      detail::GraphProfile gp{r, 12};
      std::vector<double> z(12);
      for (auto& x : z) x = v(rng) * r;
      std::vector<double> ga, gv;
      gp.area(z, &ga);
      gp.volume(z, &gv);
      for (std::size_t i = 0; i < z.size(); ++i) {
        auto zp = z, zm = z;
        const double h = 1e-6;
        zp[i] += h;
        zm[i] -= h;
        const double fa = (gp.area(zp, nullptr) - gp.area(zm, nullptr)) / (2 * h);
        const double fv = (gp.volume(zp, nullptr) - gp.volume(zm, nullptr)) / (2 * h);
        CHECK(std::abs(fa - ga[i]) <= 1e-6 * std::max(1.0, std::abs(fa)));
        CHECK(std::abs(fv - gv[i]) <= 1e-6 * std::max(1.0, std::abs(fv)));
      }
      ProfileCurve c;
      c.nodes = gp.nodes(z);
      CHECK(std::abs(gp.volume(z, nullptr) - enclosed_volume(c, {r})) <= 1e-10);
    }
  }

  TEST_CASE("minimize recovers the equatorial disc") {
    IsoperimetricProblem p{{1.0}, 0.5};
    OptimizerConfig cfg;
    cfg.seed = 7;
    const auto res = minimize(p, cfg);
    CHECK(std::abs(res.area - disc_area(1.0)) <= 0.01 * disc_area(1.0));
    CHECK(res.report.max_plane_distance <= 0.05);
    CHECK(std::abs(res.volume - 0.5 * ball_vol(1.0)) <= 1e-6 * ball_vol(1.0));
    CHECK(res.report.converged);
    CHECK(res.report.kkt_residual <= cfg.grad_tolerance);
    CHECK(std::abs(res.report.boundary_angle - kPi / 2.0) <= 1e-3);
    CHECK(std::abs(res.area - area_of_revolution(res.curve)) <= 1e-12);

    OptimizerConfig flat;
    flat.initial_z = std::vector<double>(64, 0.0);
    const auto f = minimize(p, flat);
    CHECK(f.report.iterations == 0);
    CHECK(std::abs(f.area - disc_area(1.0)) <= 1e-9);
  }

  TEST_CASE("minimize: bound across radii and a smaller fraction") {
    double half_area = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
      OptimizerConfig cfg;
      cfg.seed = 11;
      const auto res = minimize({{r}, 0.5}, cfg);
      CHECK(res.area >= disc_area(r) * (1.0 - 0.005));
      CHECK(std::abs(res.volume - 0.5 * ball_vol(r)) <= 1e-6 * ball_vol(r));
      if (r == 1.0) half_area = res.area;
    }
    OptimizerConfig cfg;
    const auto small = minimize({{1.0}, 0.2}, cfg);
    CHECK(small.area < half_area);
    CHECK(std::abs(small.volume - 0.2 * ball_vol(1.0)) <= 1e-6 * ball_vol(1.0));
  }

  TEST_CASE("minimize: configuration errors") {
    OptimizerConfig cfg;
    CHECK(code_of([&] { minimize({{1.0}, 0.0}, cfg); }) == Errc::InvalidConfig);
    CHECK(code_of([&] { minimize({{1.0}, 1.0}, cfg); }) == Errc::InvalidConfig);
    CHECK(code_of([&] { minimize({{-1.0}, 0.5}, cfg); }) == Errc::NegativeRadius);
    cfg.n_nodes = 4;
    CHECK(code_of([&] { minimize({{1.0}, 0.5}, cfg); }) == Errc::InvalidConfig);
    cfg = {};
    cfg.initial_z = std::vector<double>(64, 2.0);
    CHECK(code_of([&] { minimize({{1.0}, 0.5}, cfg); }) == Errc::InfeasibleStart);
    cfg = {};
    cfg.max_iters = 5;
    cfg.max_outer = 1;
    CHECK(code_of([&] { minimize({{1.0}, 0.5}, cfg); }) == Errc::NonConvergence);
  }

  TEST_CASE("plane family") {
    const BallSpec b{1.3};
    const auto rows = plane_family_scan(b, 27);
    CHECK(rows.front().d == 0.0);
    CHECK(std::abs(rows.front().area - disc_area(1.3)) <= 1e-12);
    CHECK(std::abs(rows.front().volume - ball_vol(1.3) / 2.0) <= 1e-8);
    CHECK(rows.back().area == doctest::Approx(0.0));
    CHECK(rows.back().volume <= 1e-12);
    for (const auto& r : rows) {
      if (std::abs(r.volume - ball_vol(1.3) / 2.0) <= 1e-9) CHECK(r.d <= 1e-6);
    }
    const auto ser = plane_family_scan(b, 27, Exec::serial);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(ser[i].volume == rows[i].volume);
    CHECK(code_of([&] { plane_family_scan(b, 1); }) == Errc::OutOfRange);
  }

  TEST_CASE("ball caps against two-dimensional quadrature") {
    for (double r : {0.7, 1.5}) {
      const BallSpec b{r};
      for (double p : {0.0, 0.3, 1.0, 2.0}) {
        for (double s : {0.2, 0.8, 1.6, 3.0}) {
          const auto row = ball_cap(b, p, s);
          CHECK(std::abs(row.volume - two_ball_volume(r, p, s)) <= 1e-7 * std::max(1.0, ball_vol(r)));
        }
      }
      CHECK(ball_cap(b, 0.0, r).area == 0.0);
      CHECK(std::abs(ball_cap(b, 0.0, r).volume - ball_vol(r)) <= 1e-12);
      CHECK(std::abs(ball_cap(b, 0.1, 0.2).area - 4.0 * kPi * std::sinh(0.2) * std::sinh(0.2)) <= 1e-12);
    }
  }

  TEST_CASE("cap families: flat limit and half-volume minimum") {
    for (double r : {0.5, 1.0, 2.0}) {
      const BallSpec b{r};
      const double c = std::cosh(r);
      for (double d : {0.0, 0.2 * r, 0.7 * r}) {
        const auto row = umbilic_cap(b, 0.0, d);
        CHECK(std::abs(row.area - 2.0 * kPi * (c / std::cosh(d) - 1.0)) <= 1e-6);
        CHECK(std::abs(row.volume - hyp::plane_cap_volume(r, d)) <= 1e-6);
      }
      const auto rows = sphere_cap_family_scan(b, 9);
      const iso::CapRow* best = nullptr;
      for (const auto& row : rows) {
        if (!row.half_volume) continue;
        CHECK(std::abs(row.volume - 0.5 * ball_vol(r)) <= 1e-8 * ball_vol(r));
        CHECK(row.area >= disc_area(r) - 1e-6);
        if (!best || row.area < best->area) best = &row;
      }
      REQUIRE(best);
      CHECK(best->family == "umbilic");
      CHECK(best->kappa == 0.0);
      CHECK(std::abs(best->area - disc_area(r)) <= 1e-8);
      // large balls approach the horoball, not the plane
      const auto big = half_volume_ball_cap(b, 12.0 + r);
      REQUIRE(big);
      CHECK(std::abs(big->area - half_volume_umbilic_cap(b, 1.0).area) <= 1e-6);
      CHECK_FALSE(half_volume_ball_cap(b, 0.3 * r).has_value());
    }
  }
}
