#include "hypsweep/coned_surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypsweep/error.hpp"

namespace hypsweep::surf {

namespace {

constexpr double kPi = std::numbers::pi;

using hyp::corner_angle_or_zero;
using hyp::triangle_area;

double max_entry(const Isometry& g) {
  double m = 0.0;
  for (double v : g.matrix()) m = std::max(m, std::abs(v));
  return m;
}

// Corner angles of a triangle at its three vertices.
std::array<double, 3> corner_angles(const HTriangle& t) {
  return {corner_angle_or_zero(t.a, t.b, t.c), corner_angle_or_zero(t.b, t.c, t.a),
          corner_angle_or_zero(t.c, t.a, t.b)};
}

struct StaticPart {
  double area = 0.0;
  double theta = 0.0;
};

// Area and base-vertex angles of every triangle except the two of Q.
StaticPart static_part(const RealizedSurface& s, int d) {
  const int t1 = tri::CombMap::face(d);
  const int t2 = tri::CombMap::face(s.tri().map().twin(d));
  StaticPart out;
  for (int t = 0; t < s.tri().face_count(); ++t) {
    if (t == t1 || t == t2) continue;
    out.area += triangle_area(s.corners(t));
    for (double a : corner_angles(s.corners(t))) out.theta += a;
  }
  return out;
}

// Sample with inserted vertex vt, which is corner `apex` of each of the four
// triangles.
AreaSample inserted_sample(double t, const StaticPart& base, const std::array<HTriangle, 4>& tris,
                           const std::array<int, 4>& apex, int face_count) {
  AreaSample smp;
  smp.t = t;
  smp.area = base.area;
  smp.theta_base = base.theta;
  double theta = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    smp.area += triangle_area(tris[k]);
    const auto ang = corner_angles(tris[k]);
    for (int c = 0; c < 3; ++c) {
      if (c == apex[k]) {
        theta += ang[static_cast<std::size_t>(c)];
      } else {
        smp.theta_base += ang[static_cast<std::size_t>(c)];
      }
    }
  }
  smp.min_theta = theta;
  smp.triangles = face_count + 2;
  return smp;
}

AreaSample plain_sample(double t, const RealizedSurface& s) {
  return {t, total_area(s), std::nullopt, s.tri().face_count(), vertex_angle_sum(s)};
}

double sample_t(int k, int n) { return static_cast<double>(k) / static_cast<double>(n - 1); }

void check_samples(int n) {
  if (n < 2) throw Error(Errc::OutOfRange, "need at least 2 samples");
}

// Apex index of v_t in slide_triangles / flip_triangles.
constexpr std::array<int, 4> kSlideApex{1, 0, 1, 0};
constexpr std::array<int, 4> kFlipApex{2, 1, 2, 0};

}  // namespace

double ConedTriangleGeom::area() const {
  const HTriangle& g = geom;
  switch (coned_from) {
    case 1: return triangle_area({g.b, g.c, g.a});
    case 2: return triangle_area({g.c, g.a, g.b});
    default: return triangle_area(g);
  }
}

RealizedSurface RealizedSurface::realize(tri::OneVertexTriangulation tri, HPoint base, EdgeHolonomy hol,
                                         double tol) {
  if (static_cast<int>(hol.size()) != tri.edge_count()) {
    throw Error(Errc::InvalidInput, "need one isometry per edge");
  }
  RealizedSurface s;
  s.tri_ = std::move(tri);
  s.base_ = base;
  s.hol_ = std::move(hol);
  const int F = s.tri_.face_count();
  s.lifts_.resize(static_cast<std::size_t>(3 * F));
  s.corners_.resize(static_cast<std::size_t>(F));
  for (const auto& g : s.hol_) {
    if (!(max_entry(g) <= kMaxHolonomyEntry)) {
      throw Error(Errc::OutOfRange, "holonomy entries beyond 1e8: lifts too far apart for double precision");
    }
  }
  for (int t = 0; t < F; ++t) {
    const Isometry g0 = s.dart_holonomy(3 * t);
    const Isometry g1 = s.dart_holonomy(3 * t + 1);
    s.lifts_[static_cast<std::size_t>(3 * t)] = Isometry();
    s.lifts_[static_cast<std::size_t>(3 * t + 1)] = g0;
    s.lifts_[static_cast<std::size_t>(3 * t + 2)] = g0 * g1;
    s.corners_[static_cast<std::size_t>(t)] = {base, g0.apply(base), (g0 * g1).apply(base)};
    const double res = s.relation_residual(t);
    if (!(res <= tol)) {
      throw Error(Errc::RelationViolated,
                  "triangle " + std::to_string(t) + " residual " + std::to_string(res));
    }
  }
  return s;
}

Isometry RealizedSurface::dart_holonomy(int d) const {
  const auto& m = tri_.map();
  const int tw = m.twin(d);
  const Isometry& g = hol_[static_cast<std::size_t>(m.edge_of(d).id)];
  return d < tw ? g : g.inverse();
}

ConedTriangleGeom RealizedSurface::coned(int t, int from) const {
  if (from < 0 || from > 2) throw Error(Errc::OutOfRange, "coning vertex must be 0, 1 or 2");
  return {corners(t), from};
}

double RealizedSurface::relation_residual(int t) const {
  const double scale = std::max(1.0, max_entry(lift(t, 1)) * max_entry(dart_holonomy(3 * t + 1)));
  return lift(t, 2).max_abs_diff(dart_holonomy(3 * t + 2).inverse()) / scale;
}

double total_area(const RealizedSurface& s) {
  double a = 0.0;
  for (int t = 0; t < s.tri().face_count(); ++t) a += triangle_area(s.corners(t));
  return a;
}

double vertex_angle_sum(const RealizedSurface& s) {
  double th = 0.0;
  for (int t = 0; t < s.tri().face_count(); ++t) {
    for (double a : corner_angles(s.corners(t))) th += a;
  }
  return th;
}

Quad quad_around(const RealizedSurface& s, int d) {
  const auto& m = s.tri().map();
  const int d2 = m.twin(d);
  const int t = tri::CombMap::face(d), i = d % 3;
  const int t2 = tri::CombMap::face(d2), j = d2 % 3;
  const HPoint& q = s.base();
  const Isometry K = s.lift(t, i) * s.dart_holonomy(d) * s.lift(t2, j).inverse();
  return {d, s.lift(t, i).apply(q), s.lift(t, (i + 1) % 3).apply(q), s.lift(t, (i + 2) % 3).apply(q),
          (K * s.lift(t2, (j + 2) % 3)).apply(q)};
}

std::array<HTriangle, 4> slide_triangles(const Quad& q, const HPoint& vt) {
  return {HTriangle{q.u, vt, q.w}, HTriangle{vt, q.v, q.w}, HTriangle{q.v, vt, q.x}, HTriangle{vt, q.u, q.x}};
}

std::array<HTriangle, 4> flip_triangles(const Quad& q, const HPoint& vt) {
  return {HTriangle{q.u, q.x, vt}, HTriangle{q.u, vt, q.w}, HTriangle{q.x, q.v, vt}, HTriangle{vt, q.v, q.w}};
}

HPoint slide_point(const Quad& q, double t) { return hyp::lerp(q.u, q.v, t); }

HPoint flip_point(const Quad& q, double t) { return hyp::lerp(q.v, hyp::lerp(q.x, q.w, 0.5), t); }

double AreaProfile::sup_area() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.area);
  return m;
}

std::optional<double> AreaProfile::min_theta() const {
  std::optional<double> m;
  for (const auto& s : samples) {
    if (s.min_theta && (!m || *s.min_theta < *m)) m = s.min_theta;
  }
  return m;
}

int AreaProfile::max_triangles() const {
  int m = 0;
  for (const auto& s : samples) m = std::max(m, s.triangles);
  return m;
}

AreaProfile slide_vertex_family(const RealizedSurface& s, int tri_id, tri::EdgeId e, int n_samples, Exec exec) {
  check_samples(n_samples);
  const auto& m = s.tri().map();
  if (tri_id < 0 || tri_id >= m.face_count()) throw Error(Errc::OutOfRange, "triangle id out of range");
  if (e.id < 0 || e.id >= m.edge_count()) throw Error(Errc::BadEdgeId, "edge id out of range");
  int d = m.edge_darts()[static_cast<std::size_t>(e.id)];
  if (tri::CombMap::face(d) != tri_id) d = m.twin(d);
  if (tri::CombMap::face(d) != tri_id) throw Error(Errc::NotAdjacent, "edge is not a side of the triangle");
  const Quad q = quad_around(s, d);
  if (hyp::dist(q.u, q.v) < hyp::kDegenerateLength) throw Error(Errc::DegenerateEdge, "cannot slide along a degenerate edge");

  const StaticPart base = static_part(s, d);
  const AreaSample endpoint = plain_sample(0.0, s);
  AreaProfile prof;
  prof.samples.resize(static_cast<std::size_t>(n_samples));
  for_each_index(prof.samples.size(), exec, [&](std::size_t k) {
    const double t = sample_t(static_cast<int>(k), n_samples);
    if (k == 0 || static_cast<int>(k) == n_samples - 1) {
      prof.samples[k] = endpoint;
      prof.samples[k].t = t;
      return;
    }
    prof.samples[k] = inserted_sample(t, base, slide_triangles(q, slide_point(q, t)), kSlideApex, m.face_count());
  });
  return prof;
}

RealizedSurface flip_realized(const RealizedSurface& s, tri::EdgeId e) {
  const tri::FlipResult fr = tri::flip_detailed(s.tri(), e);
  const int n = s.tri().dart_count();
  std::vector<Isometry> per_dart(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    if (a == fr.d || a == s.tri().map().twin(fr.d)) continue;
    per_dart[static_cast<std::size_t>(fr.dart_map[static_cast<std::size_t>(a)])] = s.dart_holonomy(a);
  }
  // New diagonal x -> w closes the triangle (x -> w, w -> u, u -> x).
  const Isometry closing = (s.dart_holonomy(fr.p) * s.dart_holonomy(fr.n2)).reorthonormalized();
  const int d2 = fr.tri.map().twin(fr.d);
  per_dart[static_cast<std::size_t>(fr.d)] = closing.inverse();
  per_dart[static_cast<std::size_t>(d2)] = closing;
  EdgeHolonomy hol;
  for (int r : fr.tri.map().edge_darts()) hol.push_back(per_dart[static_cast<std::size_t>(r)]);
  return RealizedSurface::realize(fr.tri, s.base(), std::move(hol));
}

AreaProfile flip_family(const RealizedSurface& s, tri::EdgeId e, int n_samples, Exec exec) {
  check_samples(n_samples);
  const auto& m = s.tri().map();
  if (!tri::is_flippable(m, e)) throw Error(Errc::NotFlippable, "both sides of the edge lie in one triangle");
  const int d = m.edge_darts()[static_cast<std::size_t>(e.id)];
  const Quad q = quad_around(s, d);
  const RealizedSurface after = flip_realized(s, e);
  const StaticPart base = static_part(s, d);
  const AreaSample first = plain_sample(0.0, s);
  const AreaSample last = plain_sample(1.0, after);
  AreaProfile prof;
  prof.samples.resize(static_cast<std::size_t>(n_samples));
  for_each_index(prof.samples.size(), exec, [&](std::size_t k) {
    const double t = sample_t(static_cast<int>(k), n_samples);
    if (k == 0) {
      prof.samples[k] = first;
    } else if (static_cast<int>(k) == n_samples - 1) {
      prof.samples[k] = last;
    } else {
      prof.samples[k] = inserted_sample(t, base, flip_triangles(q, flip_point(q, t)), kFlipApex, m.face_count());
    }
  });
  return prof;
}

AreaProfile sweepout_profile(const tri::FlipPath& path, const HPoint& base, const EdgeHolonomy& hol_start,
                             const std::optional<EdgeHolonomy>& hol_end, int n_samples, Exec exec) {
  check_samples(n_samples);
  RealizedSurface s = RealizedSurface::realize(path.start, base, hol_start);
  AreaProfile prof;
  if (path.moves.empty()) {
    prof.samples.push_back(plain_sample(0.0, s));
  }
  const double segments = 2.0 * static_cast<double>(path.moves.size());
  int seg = 0;
  auto append = [&](const AreaProfile& part) {
    for (std::size_t k = (seg == 0 ? 0 : 1); k < part.samples.size(); ++k) {
      AreaSample smp = part.samples[k];
      smp.t = (static_cast<double>(seg) + smp.t) / segments;
      prof.samples.push_back(smp);
    }
    ++seg;
  };
  for (tri::EdgeId e : path.moves) {
    if (!tri::is_flippable(s.tri(), e)) throw Error(Errc::NotFlippable, "path move is not flippable");
    const int d = s.tri().map().edge_darts()[static_cast<std::size_t>(e.id)];
    append(slide_vertex_family(s, tri::CombMap::face(d), e, n_samples, exec));
    append(flip_family(s, e, n_samples, exec));
    s = flip_realized(s, e);
  }
  if (hol_end) {
    if (hol_end->size() != s.holonomy().size()) throw Error(Errc::InvalidInput, "hol_end has the wrong edge count");
    for (std::size_t i = 0; i < hol_end->size(); ++i) {
      const Isometry& g = s.holonomy()[i];
      const double scale = std::max(1.0, max_entry(g));
      if (g.max_abs_diff((*hol_end)[i]) > kRelationTolerance * scale) {
        throw Error(Errc::RelationViolated, "end holonomy differs from the propagated one at edge " + std::to_string(i));
      }
    }
  }
  return prof;
}

std::vector<double> flip_tetrahedron_volumes(const tri::FlipPath& path, const HPoint& base, const EdgeHolonomy& hol) {
  RealizedSurface s = RealizedSurface::realize(path.start, base, hol);
  std::vector<double> out;
  for (tri::EdgeId e : path.moves) {
    if (!tri::is_flippable(s.tri(), e)) throw Error(Errc::NotFlippable, "path move is not flippable");
    const Quad q = quad_around(s, s.tri().map().edge_darts()[static_cast<std::size_t>(e.id)]);
    out.push_back(hyp::tetrahedron_volume(q.u, q.v, q.w, q.x));
    s = flip_realized(s, e);
  }
  return out;
}

EdgeHolonomy standard_holonomy(int g, const std::vector<Isometry>& gens) {
  if (g < 1) throw Error(Errc::InvalidGenus, "genus must be at least 1");
  if (static_cast<int>(gens.size()) != 2 * g) throw Error(Errc::InvalidInput, "need 2g generators");
  const tri::OneVertexTriangulation t = tri::standard_genus_g(g);
  const int F = t.face_count();
  std::vector<Isometry> per_dart(static_cast<std::size_t>(t.dart_count()));
  // h[j] maps corner 0 of the polygon to corner j.
  std::vector<Isometry> h(1);
  for (int side = 0; side < 4 * g; ++side) {
    const Isometry& a = gens[static_cast<std::size_t>(2 * (side / 4) + side % 2)];
    const Isometry s = side % 4 < 2 ? a : a.inverse();
    per_dart[static_cast<std::size_t>(tri::standard_side_dart(g, side))] = s;
    h.push_back(h.back() * s);
  }
  for (int k = 0; k + 1 < F; ++k) {
    per_dart[static_cast<std::size_t>(3 * (k + 1))] = h[static_cast<std::size_t>(k + 2)];
    per_dart[static_cast<std::size_t>(3 * k + 2)] = h[static_cast<std::size_t>(k + 2)].inverse();
  }
  EdgeHolonomy hol;
  for (int r : t.map().edge_darts()) hol.push_back(per_dart[static_cast<std::size_t>(r)]);
  return hol;
}

}  // namespace hypsweep::surf
