#pragma once

// Coned simplicial surfaces in H^3 given by a one-vertex triangulation, a
// basepoint q and one isometry per edge.
//
// Dart d carries g_d: the edge's isometry for its smaller dart, the inverse
// for the other. Triangle t with darts d0 d1 d2 must satisfy
// g_d0 g_d1 g_d2 = I, and its corners are q, g_d0 q, g_d0 g_d1 q. In
// curvature -1 a coned triangle is the geodesic triangle on its corners,
// so the coning vertex never changes an area.
//
// Interpolation families insert one vertex v_t into the quadrilateral Q
// around an edge (darts d: u -> v and its twin, third corners w and x):
//
//   slide: v_t runs along [u, v]; the two triangles become four, coned
//          from v_t. Area is constant and theta(v_t) = 2 pi.
//   flip:  v_t runs from v to the midpoint m of the new diagonal [x, w];
//          Q is coned from v_t as (u,x,v_t) (u,v_t,w) (x,v,v_t) (v_t,v,w).
//          At t = 0 this is the old coning, at t = 1 the flipped one.
//
// In the flip family the rays from v_t to v and to m are opposite, and m
// lies on [x, w], which forces theta(v_t) >= 2 pi for 0 < t < 1.

#include <array>
#include <optional>
#include <vector>

#include "hypsweep/hypgeom.hpp"
#include "hypsweep/parallel.hpp"
#include "hypsweep/triangulation.hpp"

namespace hypsweep::surf {

using hyp::HPoint;
using hyp::HTriangle;
using hyp::Isometry;

inline constexpr double kRelationTolerance = 1e-6;
// Entries of a Lorentz matrix grow like e^d with the distance d it moves the
// origin; past this the hyperboloid coordinates no longer resolve the lifts.
inline constexpr double kMaxHolonomyEntry = 1e8;

/// g_e per EdgeId.
using EdgeHolonomy = std::vector<Isometry>;

struct ConedTriangleGeom {
  HTriangle geom;
  int coned_from = 0;

  /// Area summed from the corners starting at the coning vertex.
  double area() const;
};

class RealizedSurface {
 public:
  /// Throws InvalidInput (wrong holonomy count), OutOfRange (an entry
  /// beyond kMaxHolonomyEntry) or RelationViolated.
  static RealizedSurface realize(tri::OneVertexTriangulation tri, HPoint base, EdgeHolonomy hol,
                                 double tol = kRelationTolerance);

  const tri::OneVertexTriangulation& tri() const { return tri_; }
  const HPoint& base() const { return base_; }
  const EdgeHolonomy& holonomy() const { return hol_; }

  Isometry dart_holonomy(int d) const;
  /// lift(t, i) maps the basepoint to corner i of triangle t.
  const Isometry& lift(int t, int i) const { return lifts_[static_cast<std::size_t>(3 * t + i)]; }
  const HTriangle& corners(int t) const { return corners_[static_cast<std::size_t>(t)]; }
  ConedTriangleGeom coned(int t, int from) const;
  /// max-norm of g_d0 g_d1 - g_d2^-1, relative to |g_d0| |g_d1| (the
  /// rounding scale of the product) when that exceeds 1.
  double relation_residual(int t) const;

 private:
  tri::OneVertexTriangulation tri_ = tri::standard_genus_g(1);
  HPoint base_;
  EdgeHolonomy hol_;
  std::vector<Isometry> lifts_;
  std::vector<HTriangle> corners_;
};

double total_area(const RealizedSurface& s);
/// Sum of all 3F corner angles; degenerate corners count 0.
double vertex_angle_sum(const RealizedSurface& s);

/// Corners of the quadrilateral around dart d, lifted next to triangle
/// face(d): d runs u -> v, its triangle has third corner w, the twin's
/// triangle has third corner x.
struct Quad {
  int d = 0;
  HPoint u, v, w, x;
};
Quad quad_around(const RealizedSurface& s, int d);

/// The four triangles coned from v_t used by the families.
std::array<HTriangle, 4> slide_triangles(const Quad& q, const HPoint& vt);
std::array<HTriangle, 4> flip_triangles(const Quad& q, const HPoint& vt);
HPoint slide_point(const Quad& q, double t);
HPoint flip_point(const Quad& q, double t);

struct AreaSample {
  double t = 0.0;
  double area = 0.0;
  std::optional<double> min_theta;  // angle sum at the inserted vertex, if any
  int triangles = 0;
  double theta_base = 0.0;  // angle sum at the original vertex
};

struct AreaProfile {
  std::vector<AreaSample> samples;

  double sup_area() const;
  /// Smallest inserted-vertex angle sum (nullopt if no sample has one).
  std::optional<double> min_theta() const;
  int max_triangles() const;
};

/// Samples t = k/(n-1). The endpoints are the un-subdivided surface.
/// Throws NotAdjacent, DegenerateEdge.
AreaProfile slide_vertex_family(const RealizedSurface& s, int tri_id, tri::EdgeId e, int n_samples,
                                Exec exec = Exec::parallel);
/// Endpoints are s and flip_realized(s, e). Throws NotFlippable.
AreaProfile flip_family(const RealizedSurface& s, tri::EdgeId e, int n_samples, Exec exec = Exec::parallel);

/// The flipped surface; the new diagonal's isometry is forced by the
/// triangle relation, the other edges keep theirs.
RealizedSurface flip_realized(const RealizedSurface& s, tri::EdgeId e);

/// Per move: slide family along the edge, then the flip family. Global t
/// runs over [0, 1]. If hol_end is given it must match the propagated
/// holonomy (RelationViolated otherwise).
AreaProfile sweepout_profile(const tri::FlipPath& path, const HPoint& base, const EdgeHolonomy& hol_start,
                             const std::optional<EdgeHolonomy>& hol_end, int n_samples,
                             Exec exec = Exec::parallel);

/// Volume of the geodesic tetrahedron on the four lifted corners of Q, for
/// each move of the path.
std::vector<double> flip_tetrahedron_volumes(const tri::FlipPath& path, const HPoint& base,
                                             const EdgeHolonomy& hol);

/// Holonomy of the standard genus-g triangulation from the images of the
/// generators a_1, b_1, ..., a_g, b_g (side 4i+j carries a_i, b_i, a_i^-1,
/// b_i^-1; a diagonal carries the product of the sides it cuts off).
EdgeHolonomy standard_holonomy(int g, const std::vector<Isometry>& generators);

}  // namespace hypsweep::surf
