#pragma once

// Holonomy fixtures for realized surfaces.
//
// The genus-2 fixture is the surface group of the regular hyperbolic
// octagon with corner angle 2 pi / 8, lying in the plane x3 = 0. Side k
// runs from corner P_k to P_{k+1} and the boundary word is
// a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1. The group acts freely, so for every
// corner P_j there is exactly one element h_j with h_j P_0 = P_j; the
// generators are read off as a1 = h_1, b1 = h_1^-1 h_2, and so on.

#include <random>
#include <vector>

#include "hypsweep/coned_surface.hpp"

namespace hypsweep::fixtures {

struct Realization {
  tri::OneVertexTriangulation tri;
  hyp::HPoint base;
  surf::EdgeHolonomy hol;

  surf::RealizedSurface realize() const { return surf::RealizedSurface::realize(tri, base, hol); }
};

hyp::HPoint octagon_corner(int j);
/// a1, b1, a2, b2 of the octagon group, conjugated so that the corner P_0
/// sits at the origin.
std::vector<hyp::Isometry> octagon_generators();
/// The octagon surface with basepoint P_0, the origin.
Realization octagon_genus2();

/// Torus whose two generators translate along the x3 axis by a and b.
Realization torus_axis(double a, double b);

/// Conjugates a2 and b2 by an isometry commuting with [a1, b1]: a
/// translation by `boost` along its axis composed with a rotation by
/// `twist` about it. The surface relation is preserved; twisting bends the
/// surface out of its plane.
std::vector<hyp::Isometry> bend_second_handle(const std::vector<hyp::Isometry>& gens, double boost,
                                              double twist);

/// Moves everything by g: holonomy conjugated, basepoint mapped.
Realization conjugated(const Realization& r, const hyp::Isometry& g);

/// Octagon group bent by a random (boost, twist) in the frame of
/// octagon_genus2, with a basepoint within 0.5 of the origin, then moved by a
/// random global isometry.
Realization perturbed_octagon(std::mt19937_64& rng);

}  // namespace hypsweep::fixtures
