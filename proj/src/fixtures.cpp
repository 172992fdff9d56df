#include "hypsweep/fixtures.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "hypsweep/error.hpp"

namespace hypsweep::fixtures {

namespace {

using hyp::HPoint;
using hyp::Isometry;
using hyp::MVec4;

constexpr double kPi = std::numbers::pi;

MVec4 power_iterate(const Isometry& g, MVec4 v) {
  for (int it = 0; it < 200; ++it) {
    v = g.apply(v);
    const double n = std::abs(v[0]);
    v = (1.0 / n) * v;
  }
  if (v[0] < 0) v = -1.0 * v;
  return v;
}

}  // namespace

HPoint octagon_corner(int j) {
  // cosh R = cot(pi/8) cot(pi/8) for the regular octagon with angle pi/4
  const double c = 1.0 / std::tan(kPi / 8.0);
  const double R = std::acosh(c * c);
  const double a = 2.0 * kPi * static_cast<double>(((j % 8) + 8) % 8) / 8.0;
  return HPoint::from_spatial(std::sinh(R) * std::cos(a), std::sinh(R) * std::sin(a), 0.0);
}

namespace {

// Word products reach entries near 1e3, so they are formed in long double
// and rounded once at the end.
using LMat = std::array<long double, 16>;

LMat mul(const LMat& a, const LMat& b) {
  LMat c{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      long double acc = 0.0L;
      for (std::size_t k = 0; k < 4; ++k) acc += a[4 * i + k] * b[4 * k + j];
      c[4 * i + j] = acc;
    }
  return c;
}

// J M^T J
LMat inv(const LMat& a) {
  LMat c{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) c[4 * i + j] = ((i == 0) != (j == 0) ? -1.0L : 1.0L) * a[4 * j + i];
  return c;
}

LMat eye() {
  LMat m{};
  for (std::size_t i = 0; i < 4; ++i) m[5 * i] = 1.0L;
  return m;
}

LMat rot12(long double a) {
  LMat m = eye();
  m[5] = std::cos(a);
  m[6] = -std::sin(a);
  m[9] = std::sin(a);
  m[10] = std::cos(a);
  return m;
}

LMat trans1(long double t) {
  LMat m = eye();
  m[0] = m[5] = std::cosh(t);
  m[1] = m[4] = std::sinh(t);
  return m;
}

// Side pairing sending side k + 2 onto side k (P_{k+2} -> P_{k+1},
// P_{k+3} -> P_k): a quarter turn, then the half-turn about the midpoint of
// side k, which sits at the inradius (cosh = cot(pi/8)) in direction
// (2k+1) pi/8.
LMat side_pairing_wide(int k) {
  const long double pi = std::numbers::pi_v<long double>;
  const long double c = 1.0L / std::tan(pi / 8.0L);
  const long double rin = std::acosh(c);
  const LMat f = mul(rot12((2 * k + 1) * pi / 8.0L), trans1(rin));
  return mul(mul(mul(f, rot12(pi)), inv(f)), rot12(-pi / 2.0L));
}

Isometry narrow(const LMat& m) {
  Isometry::Matrix d{};
  for (std::size_t i = 0; i < 16; ++i) d[i] = static_cast<double>(m[i]);
  return Isometry::from_matrix_unchecked(d);
}

std::vector<Isometry> search_octagon_generators() {
  std::vector<LMat> moves;
  for (int k : {0, 1, 4, 5}) {
    moves.push_back(side_pairing_wide(k));
    moves.push_back(inv(moves.back()));
  }
  const HPoint p0 = octagon_corner(0);
  std::vector<std::optional<LMat>> h(8);
  h[0] = eye();
  int missing = 7;
  // Depth-first over reduced words; the action is free, so the first match
  // for each corner is the element.
  std::function<void(const LMat&, int, int)> search = [&](const LMat& g, int last, int depth) {
    if (missing == 0) return;
    const HPoint img = narrow(g).apply(p0);
    for (int j = 1; j < 8; ++j) {
      if (!h[static_cast<std::size_t>(j)] && hyp::dist(img, octagon_corner(j)) < 1e-8) {
        h[static_cast<std::size_t>(j)] = g;
        --missing;
      }
    }
    if (depth == 0) return;
    for (int m = 0; m < static_cast<int>(moves.size()); ++m) {
      if (last >= 0 && (m ^ 1) == last) continue;
      search(mul(g, moves[static_cast<std::size_t>(m)]), m, depth - 1);
    }
  };
  for (int depth = 1; depth <= 7 && missing > 0; ++depth) search(eye(), -1, depth);
  if (missing > 0) throw Error(Errc::InvalidInput, "octagon corner search failed");

  // conjugate into the frame with P_0 at the origin
  const long double cot8 = 1.0L / std::tan(std::numbers::pi_v<long double> / 8.0L);
  const LMat t = trans1(-std::acosh(cot8 * cot8));
  const LMat ti = inv(t);
  auto side = [&](int j) {
    const LMat next = j == 7 ? eye() : *h[static_cast<std::size_t>(j + 1)];
    return mul(mul(t, mul(inv(*h[static_cast<std::size_t>(j)]), next)), ti);
  };
  std::vector<Isometry> gens{narrow(side(0)), narrow(side(1)), narrow(side(4)), narrow(side(5))};
  // Paired sides must carry inverse elements.
  for (auto [a, b] : {std::pair{0, 2}, {1, 3}, {4, 6}, {5, 7}}) {
    if ((narrow(side(a)) * narrow(side(b))).max_abs_diff(Isometry()) > 1e-8) {
      throw Error(Errc::RelationViolated, "octagon side pairings are inconsistent");
    }
  }
  return gens;
}

}  // namespace

std::vector<Isometry> octagon_generators() {
  static const std::vector<Isometry> gens = search_octagon_generators();
  return gens;
}

Realization octagon_genus2() {
  // Moving P_0 to the origin keeps the holonomy matrices small.
  return {tri::standard_genus_g(2), HPoint::origin(), surf::standard_holonomy(2, octagon_generators())};
}

Realization torus_axis(double a, double b) {
  return {tri::standard_genus_g(1), HPoint::origin(),
          surf::standard_holonomy(1, {Isometry::translation(3, a), Isometry::translation(3, b)})};
}

std::vector<Isometry> bend_second_handle(const std::vector<Isometry>& gens, double boost, double twist) {
  if (gens.size() != 4) throw Error(Errc::InvalidInput, "need four genus-2 generators");
  const Isometry c = gens[0] * gens[1] * gens[0].inverse() * gens[1].inverse();
  const MVec4 start{{1.0, 0.31, 0.17, 0.11}};
  const MVec4 np = power_iterate(c, start);
  const MVec4 nm = power_iterate(c.inverse(), start);
  const double k = -hyp::minkowski(np, nm);
  if (!(k > 1e-12)) throw Error(Errc::InvalidInput, "commutator is not loxodromic");
  const double s = 1.0 / std::sqrt(2.0 * k);
  const hyp::Geodesic axis{HPoint::from_vector(s * (np + nm)), s * (np - nm)};
  const Isometry F = hyp::frame_of(axis);
  const Isometry Z = F * Isometry::translation(3, boost) * Isometry::rotation(1, 2, twist) * F.inverse();
  const Isometry Zi = Z.inverse();
  return {gens[0], gens[1], Z * gens[2] * Zi, Z * gens[3] * Zi};
}

Realization conjugated(const Realization& r, const Isometry& g) {
  Realization out{r.tri, g.apply(r.base), {}};
  const Isometry gi = g.inverse();
  for (const auto& h : r.hol) out.hol.push_back(g * h * gi);
  return out;
}

Realization perturbed_octagon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> boost(-0.4, 0.4);
  std::uniform_real_distribution<double> twist(-0.6, 0.6);
  const auto gens = bend_second_handle(octagon_generators(), boost(rng), twist(rng));
  const HPoint local = hyp::random_point(rng, 0.5);
  Realization r{tri::standard_genus_g(2), local, surf::standard_holonomy(2, gens)};
  return conjugated(r, hyp::random_isometry(rng, 1.0));
}

}  // namespace hypsweep::fixtures
