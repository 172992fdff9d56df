#include "hypsweep/isoperimetric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hypsweep/error.hpp"
#include "hypsweep/hypgeom.hpp"
#include "hypsweep/quadrature.hpp"

namespace hypsweep::iso {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEndpointTol = 1e-8;
constexpr std::size_t kSegmentOrder = 8;

void check_radius(double r) {
  if (r < 0.0) throw Error(Errc::NegativeRadius, "ball radius must be non-negative");
}

double sinhc(double x) {
  if (std::abs(x) < 1e-3) return 1.0 + x * x / 6.0 + x * x * x * x / 120.0;
  return std::sinh(x) / x;
}

double sinhc_prime(double x) {
  if (std::abs(x) < 1e-3) return x / 3.0 + x * x * x / 30.0;
  return (x * std::cosh(x) - std::sinh(x)) / (x * x);
}

// pi (cosh^2 r tanh z - z): the flux pi sinh^2(rho) dz up the ball boundary
// is F(z2) - F(z1).
double boundary_flux(double r, double z) {
  const double c = std::cosh(r);
  return kPi * (c * c * std::tanh(z) - z);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

bool BallSpec::contains(double rho, double z, double tol) const {
  return std::cosh(rho) * std::cosh(z) <= std::cosh(r) + tol;
}

double BallSpec::volume() const { return hyp::ball_volume(r); }

ProfileCurve ProfileCurve::equatorial(double r, int n) { return plane(r, 0.0, n); }

ProfileCurve ProfileCurve::plane(double r, double h, int n) {
  check_radius(r);
  if (n < 2) throw Error(Errc::OutOfRange, "a profile needs at least 2 nodes");
  if (std::abs(h) > r) throw Error(Errc::OutOfRange, "plane misses the ball");
  const double end = std::acosh(std::cosh(r) / std::cosh(h));
  ProfileCurve c;
  for (int i = 0; i < n; ++i) c.nodes.push_back({end * i / (n - 1), h});
  c.nodes.back().rho = end;
  return c;
}

ProfileCurve ProfileCurve::sphere(double s, int n) {
  check_radius(s);
  if (n < 3) throw Error(Errc::OutOfRange, "a closed profile needs at least 3 nodes");
  ProfileCurve c;
  c.kind = ProfileKind::sphere;
  for (int k = 0; k < n; ++k) {
    const double a = kPi * k / (n - 1);
    const double rho = k == 0 || k == n - 1 ? 0.0 : std::asinh(std::sinh(s) * std::sin(a));
    c.nodes.push_back({rho, -std::atanh(std::tanh(s) * std::cos(a))});
  }
  return c;
}

ProfileCurve ProfileCurve::mirrored() const {
  ProfileCurve c = *this;
  for (auto& n : c.nodes) n.z = -n.z;
  if (kind == ProfileKind::sphere) std::reverse(c.nodes.begin(), c.nodes.end());
  return c;
}

double area_of_revolution(const ProfileCurve& c) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i) {
    const ProfileNode p = c.nodes[i];
    const ProfileNode q = c.nodes[i + 1];
    const double dr = q.rho - p.rho;
    const double dz = q.z - p.z;
    auto f = [&](double s) {
      const double rho = p.rho + s * dr;
      const double ch = std::cosh(rho);
      return 2.0 * kPi * std::sinh(rho) * std::sqrt(dr * dr + ch * ch * dz * dz);
    };
    a += quad::integrate(f, 0.0, 1.0, 1e-13);
  }
  return a;
}

double enclosed_volume(const ProfileCurve& c, const BallSpec& b) {
  check_radius(b.r);
  if (c.nodes.size() < 2) {
    if (c.kind == ProfileKind::sphere) return 0.0;
    throw Error(Errc::OpenRegion, "a disc-type profile needs at least 2 nodes");
  }
  double flux = 0.0;
  for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i) {
    const auto& p = c.nodes[i];
    const auto& q = c.nodes[i + 1];
    flux += detail::segment_flux(p.rho, q.rho, p.z, q.z, nullptr);
  }
  const ProfileNode& first = c.nodes.front();
  const ProfileNode& last = c.nodes.back();
  if (c.kind == ProfileKind::sphere) {
    if (first.rho > kEndpointTol || last.rho > kEndpointTol) {
      throw Error(Errc::InvalidInput, "a sphere-type profile must start and end on the axis");
    }
    return std::abs(flux);
  }
  if (first.rho > kEndpointTol) throw Error(Errc::OpenRegion, "profile does not start on the axis");
  if (std::abs(std::cosh(last.rho) * std::cosh(last.z) - std::cosh(b.r)) > kEndpointTol) {
    throw Error(Errc::OpenRegion, "profile does not end on the ball boundary");
  }
  return boundary_flux(b.r, last.z) + boundary_flux(b.r, b.r) - flux;
}

double volume_below_plane(const BallSpec& b, double h) {
  check_radius(b.r);
  if (std::abs(h) > b.r) throw Error(Errc::OutOfRange, "plane misses the ball");
  return boundary_flux(b.r, h) + boundary_flux(b.r, b.r);
}

double plane_height_for_fraction(const BallSpec& b, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error(Errc::OutOfRange, "fraction must lie in (0, 1)");
  const double target = fraction * b.volume();
  double lo = -b.r, hi = b.r;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (volume_below_plane(b, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- detail

namespace detail {

double segment_area(double ra, double rb, double za, double zb, double* g) {
  const quad::DynRule rule = quad::gauss_legendre(kSegmentOrder);
  const double dr = rb - ra;
  const double dz = zb - za;
  double f = 0.0;
  double ga = 0.0, gb = 0.0, gz = 0.0;
  for (std::size_t k = 0; k < rule.size; ++k) {
    const double s = 0.5 * (rule.nodes[k] + 1.0);
    const double w = 0.5 * rule.weights[k];
    const double rho = ra + s * dr;
    const double S = std::sinh(rho);
    const double C = std::cosh(rho);
    const double L = std::sqrt(dr * dr + C * C * dz * dz);
    f += w * 2.0 * kPi * S * L;
    if (g && L > 0.0) {
      const double d_rho = 2.0 * kPi * (C * L + S * C * S * dz * dz / L);
      const double d_dr = 2.0 * kPi * S * dr / L;
      const double d_dz = 2.0 * kPi * S * C * C * dz / L;
      ga += w * ((1.0 - s) * d_rho - d_dr);
      gb += w * (s * d_rho + d_dr);
      gz += w * d_dz;
    }
  }
  if (g) {
    g[0] = ga;
    g[1] = gb;
    g[2] = -gz;
    g[3] = gz;
  }
  return f;
}

double segment_flux(double ra, double rb, double za, double zb, double* g) {
  const double sum = ra + rb;
  const double dif = rb - ra;
  const double dz = zb - za;
  const double J = 0.5 * (std::cosh(sum) * sinhc(dif) - 1.0);
  if (g) {
    const double a = std::sinh(sum) * sinhc(dif);
    const double b = std::cosh(sum) * sinhc_prime(dif);
    g[0] = kPi * dz * 0.5 * (a - b);
    g[1] = kPi * dz * 0.5 * (a + b);
    g[2] = -kPi * J;
    g[3] = kPi * J;
  }
  return kPi * dz * J;
}

std::vector<ProfileNode> GraphProfile::nodes(const std::vector<double>& z) const {
  const int N = n - 1;
  const double end = std::acosh(std::max(1.0, std::cosh(r) / std::cosh(z[static_cast<std::size_t>(N)])));
  std::vector<ProfileNode> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = {end * i / N, z[static_cast<std::size_t>(i)]};
  out.back().rho = end;
  return out;
}

namespace {

// d rho_end / d z_N
double end_slope(double r, double zN, double end) {
  if (end <= 0.0) return 0.0;
  return -std::cosh(r) * std::tanh(zN) / (std::cosh(zN) * std::sinh(end));
}

template <class Seg>
double accumulate(const GraphProfile& gp, const std::vector<double>& z, std::vector<double>* grad, Seg seg) {
  const auto nd = gp.nodes(z);
  const int N = gp.n - 1;
  double total = 0.0;
  std::vector<double> drho(static_cast<std::size_t>(gp.n), 0.0);
  if (grad) grad->assign(static_cast<std::size_t>(gp.n), 0.0);
  for (int i = 0; i < N; ++i) {
    const auto& p = nd[static_cast<std::size_t>(i)];
    const auto& q = nd[static_cast<std::size_t>(i + 1)];
    double g[4];
    total += seg(p.rho, q.rho, p.z, q.z, grad ? g : nullptr);
    if (grad) {
      drho[static_cast<std::size_t>(i)] += g[0];
      drho[static_cast<std::size_t>(i + 1)] += g[1];
      (*grad)[static_cast<std::size_t>(i)] += g[2];
      (*grad)[static_cast<std::size_t>(i + 1)] += g[3];
    }
  }
  if (grad) {
    const double end = nd.back().rho;
    const double slope = end_slope(gp.r, z.back(), end);
    double chain = 0.0;
    for (int i = 0; i <= N; ++i) chain += drho[static_cast<std::size_t>(i)] * i / N;
    grad->back() += chain * slope;
  }
  return total;
}

}  // namespace

double GraphProfile::area(const std::vector<double>& z, std::vector<double>* grad) const {
  return accumulate(*this, z, grad, segment_area);
}

double GraphProfile::volume(const std::vector<double>& z, std::vector<double>* grad) const {
  const double flux = accumulate(*this, z, grad, segment_flux);
  const double zN = z.back();
  const double c = std::cosh(r);
  if (grad) {
    for (double& v : *grad) v = -v;
    grad->back() += kPi * (c * c / (std::cosh(zN) * std::cosh(zN)) - 1.0);
  }
  return boundary_flux(r, zN) + boundary_flux(r, r) - flux;
}

}  // namespace detail

// ------------------------------------------------------------- optimizer

void OptimizerConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(Errc::InvalidConfig, m); };
  if (n_nodes < 8) bad("n_nodes must be at least 8");
  if (max_iters < 1 || max_outer < 1) bad("iteration limits must be positive");
  if (!(initial_step > 0.0)) bad("initial_step must be positive");
  if (!(penalty > 0.0) || !(penalty_growth >= 1.0)) bad("penalty schedule must be positive and non-decreasing");
  if (!(grad_tolerance > 0.0)) bad("grad_tolerance must be positive");
  if (!(noise >= 0.0)) bad("noise must be non-negative");
  if (initial_z && static_cast<int>(initial_z->size()) != n_nodes) bad("initial_z must have n_nodes entries");
}

namespace {

struct Projector {
  double r;
  int n;

  void operator()(std::vector<double>& z) const {
    const double zmax = r * (1.0 - 1e-6);
    z.back() = std::clamp(z.back(), -zmax, zmax);
    const int N = n - 1;
    const double c = std::cosh(r);
    const double end = std::acosh(c / std::cosh(z.back()));
    for (int i = 0; i < N; ++i) {
      const double lim = std::acosh(c / std::cosh(end * i / N));
      z[static_cast<std::size_t>(i)] = std::clamp(z[static_cast<std::size_t>(i)], -lim, lim);
    }
  }
};

// Diagonal of the area Hessian in z at a flat profile with the same nodes;
// nodes near the axis carry little area and would otherwise converge slowly.
std::vector<double> area_hessian_diagonal(const detail::GraphProfile& gp, const std::vector<double>& z) {
  const auto nd = gp.nodes(z);
  std::vector<double> D(nd.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nd.size(); ++i) {
    const double h = std::max(nd[i + 1].rho - nd[i].rho, 1e-12);
    const double m = 0.5 * (nd[i].rho + nd[i + 1].rho);
    const double w = 2.0 * kPi * std::sinh(m) * std::cosh(m) * std::cosh(m) / h;
    D[i] += w;
    D[i + 1] += w;
  }
  const double top = *std::max_element(D.begin(), D.end());
  for (double& d : D) d = std::max(d, 1e-6 * top) / top;
  return D;
}

double boundary_angle(const std::vector<ProfileNode>& nd) {
  const auto& a = nd[nd.size() - 2];
  const auto& b = nd.back();
  const double ch = std::cosh(b.rho);
  const double tr = b.rho - a.rho, tz = b.z - a.z;                           // profile
  const double br = ch * std::sinh(b.z), bz = -std::sinh(b.rho) * std::cosh(b.z);  // boundary
  auto ip = [&](double r1, double z1, double r2, double z2) { return r1 * r2 + ch * ch * z1 * z2; };
  const double den = std::sqrt(ip(tr, tz, tr, tz) * ip(br, bz, br, bz));
  if (den == 0.0) return 0.0;
  return std::acos(std::min(1.0, std::abs(ip(tr, tz, br, bz)) / den));
}

}  // namespace

MinimizeResult minimize(const IsoperimetricProblem& p, const OptimizerConfig& cfg) {
  check_radius(p.ball.r);
  if (!(p.ball.r > 0.0)) throw Error(Errc::InvalidConfig, "ball radius must be positive");
  if (!(p.volume_fraction > 0.0 && p.volume_fraction < 1.0)) {
    throw Error(Errc::InvalidConfig, "volume fraction must lie strictly between 0 and 1");
  }
  cfg.validate();
  const double r = p.ball.r;
  const int n = cfg.n_nodes;
  const double VB = p.ball.volume();
  const double target = p.volume_fraction * VB;
  const double vol_tol = cfg.volume_tolerance > 0.0 ? cfg.volume_tolerance : 1e-6 * VB;
  const detail::GraphProfile gp{r, n};
  const Projector project{r, n};

  std::vector<double> z(static_cast<std::size_t>(n));
  if (cfg.initial_z) {
    z = *cfg.initial_z;
    std::vector<double> check = z;
    project(check);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (std::abs(check[i] - z[i]) > 1e-12) throw Error(Errc::InfeasibleStart, "initial profile leaves the ball");
    }
  } else {
    const double h = plane_height_for_fraction(p.ball, p.volume_fraction);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : z) v = h + cfg.noise * r * u(rng);
    project(z);
  }

  MinimizeReport rep;
  double lambda = 0.0;
  double mu = cfg.penalty;
  std::vector<double> gA, gV;

  auto kkt = [&](const std::vector<double>& x, double& lam) {
    gp.area(x, &gA);
    gp.volume(x, &gV);
    const double vv = dot(gV, gV);
    lam = vv > 0.0 ? -dot(gA, gV) / vv : 0.0;
    std::vector<double> res(gA.size());
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = gA[i] + lam * gV[i];
    return norm(res);
  };
  auto constraint = [&](const std::vector<double>& x) { return (gp.volume(x, nullptr) - target) / VB; };

  double lam_est = 0.0;
  bool done = std::abs(constraint(z)) * VB <= vol_tol && kkt(z, lam_est) <= cfg.grad_tolerance;

  // Augmented Lagrangian phi = A + lambda c + mu/2 c^2 with c = (V - target)/V(B).
  auto phi = [&](const std::vector<double>& x, std::vector<double>* g) {
    const double A = gp.area(x, g ? &gA : nullptr);
    const double c = (gp.volume(x, g ? &gV : nullptr) - target) / VB;
    if (g) {
      g->resize(x.size());
      const double k = (lambda + mu * c) / VB;
      for (std::size_t i = 0; i < x.size(); ++i) (*g)[i] = gA[i] + k * gV[i];
    }
    return A + lambda * c + 0.5 * mu * c * c;
  };

  double c_prev = std::abs(constraint(z));
  std::vector<double> g, x_new, g_new;
  while (!done && rep.outer_iterations < cfg.max_outer && rep.iterations < cfg.max_iters) {
    ++rep.outer_iterations;
    double f = phi(z, &g);
    double step = cfg.initial_step;
    const std::vector<double> D = area_hessian_diagonal(gp, z);
    const int inner_cap = std::max(1, cfg.max_iters / cfg.max_outer) * 4;
    for (int k = 0; k < inner_cap && rep.iterations < cfg.max_iters; ++k) {
      // Armijo backtracking along the projected gradient path.
      double f_new = 0.0;
      for (int bt = 0; bt < 60; ++bt) {
        x_new = z;
        for (std::size_t i = 0; i < z.size(); ++i) x_new[i] -= step * g[i] / D[i];
        project(x_new);
        double decrease = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) decrease += g[i] * (x_new[i] - z[i]);
        f_new = phi(x_new, nullptr);
        if (f_new <= f + 1e-4 * decrease) break;
        step *= 0.5;
      }
      f_new = phi(x_new, &g_new);
      double ss = 0.0, sy = 0.0, pg = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        const double s = x_new[i] - z[i];
        const double y = g_new[i] - g[i];
        ss += D[i] * s * s;
        sy += s * y;
      }
      z.swap(x_new);
      g.swap(g_new);
      f = f_new;
      ++rep.iterations;
      // projected-gradient norm at the new point
      x_new = z;
      for (std::size_t i = 0; i < z.size(); ++i) x_new[i] -= g[i];
      project(x_new);
      for (std::size_t i = 0; i < z.size(); ++i) pg += (x_new[i] - z[i]) * (x_new[i] - z[i]);
      pg = std::sqrt(pg);
      const double c = constraint(z);
      rep.trace.push_back({rep.iterations, gp.area(z, nullptr), c, pg, lambda, mu});
      if (pg <= 0.5 * cfg.grad_tolerance) break;
      // Barzilai-Borwein step for the next iteration
      step = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e3) : std::min(1e3, 2.0 * step);
    }
    const double c = constraint(z);
    lambda += mu * c;
    if (std::abs(c) > 0.25 * c_prev) mu *= cfg.penalty_growth;
    c_prev = std::abs(c);
    done = std::abs(c) * VB <= vol_tol && kkt(z, lam_est) <= cfg.grad_tolerance;
  }

  // Newton steps along the volume gradient when the loop ran out before the
  // constraint was met; they perturb stationarity, so only then.
  for (int it = 0; it < 8; ++it) {
    const double V = gp.volume(z, &gV);
    const double vv = dot(gV, gV);
    if (vv == 0.0 || std::abs(V - target) <= vol_tol) break;
    const double t = (V - target) / vv;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= t * gV[i];
    project(z);
  }

  MinimizeResult res;
  res.curve.nodes = gp.nodes(z);
  res.area = area_of_revolution(res.curve);
  res.volume = enclosed_volume(res.curve, p.ball);
  rep.volume_error = std::abs(res.volume - target);
  rep.kkt_residual = kkt(z, lam_est);
  rep.lambda = lam_est;
  for (const auto& nd : res.curve.nodes) {
    rep.max_plane_distance = std::max(rep.max_plane_distance, std::abs(std::asinh(std::cosh(nd.rho) * std::sinh(nd.z))));
  }
  rep.boundary_angle = boundary_angle(res.curve.nodes);
  rep.converged = rep.volume_error <= vol_tol && rep.kkt_residual <= cfg.grad_tolerance;
  if (!rep.converged) {
    std::ostringstream msg;
    msg << "stopped after " << rep.iterations << " iterations (" << rep.outer_iterations
        << " outer): volume error " << rep.volume_error << ", kkt residual " << rep.kkt_residual;
    throw Error(Errc::NonConvergence, msg.str());
  }
  res.report = std::move(rep);
  return res;
}

std::vector<PlaneRow> plane_family_scan(const BallSpec& b, int n, Exec exec) {
  check_radius(b.r);
  if (n < 2) throw Error(Errc::OutOfRange, "need at least 2 rows");
  std::vector<PlaneRow> rows(static_cast<std::size_t>(n));
  const double c = std::cosh(b.r);
  for_each_index(rows.size(), exec, [&](std::size_t i) {
    const double d = i + 1 == rows.size() ? b.r : b.r * static_cast<double>(i) / (n - 1);
    rows[i] = {d, 2.0 * kPi * (c / std::cosh(d) - 1.0), hyp::plane_cap_volume(b.r, d)};
  });
  return rows;
}

}  // namespace hypsweep::iso
