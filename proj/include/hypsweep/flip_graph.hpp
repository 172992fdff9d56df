#pragma once

// Breadth-first search in the flip graph.
//
// Nodes are canonical codes: in labeled mode marked triangulations (same
// edges up to homology), in iso mode isomorphism classes of maps. Iso-mode
// distances are therefore lower bounds for labeled-mode distances.
//
// Every search expands whole layers. A layer's neighbours are generated per
// frontier node (in parallel when asked) and merged in frontier order, and
// each new layer is sorted by code, so results do not depend on the thread
// count.

#include <cstddef>
#include <utility>
#include <vector>

#include "hypsweep/parallel.hpp"
#include "hypsweep/triangulation.hpp"

namespace hypsweep::tri {

struct SearchOptions {
  Mode mode = Mode::labeled;
  std::size_t budget = 2'000'000;  // maximum number of stored nodes
  Exec exec = Exec::parallel;
};

struct Neighbor {
  CanonicalCode code;
  OneVertexTriangulation tri;
  EdgeId via;
};

/// Flips of every flippable edge of every frontier node, in EdgeId order.
std::vector<std::vector<Neighbor>> expand_frontier(const std::vector<OneVertexTriangulation>& frontier,
                                                   Mode mode, Exec exec);

/// Bidirectional BFS. Throws GenusMismatch, BudgetExceeded (inconclusive)
/// or Unreachable (the component of `a` was exhausted).
///
/// Labeled mode compares homology markings; an input without one gets the
/// cotree marking of its own map, which only makes sense for inputs that
/// share a map.
int flip_distance(const OneVertexTriangulation& a, const OneVertexTriangulation& b,
                  const SearchOptions& opt = {});

struct BallNode {
  CanonicalCode code;
  int depth = 0;
  OneVertexTriangulation tri;
};

struct FlipBall {
  std::vector<BallNode> nodes;                // BFS order, each layer sorted by code
  std::vector<std::pair<int, int>> edges;     // i < j, deduplicated
  std::size_t loops = 0;                      // flips returning to the same node
  std::vector<std::size_t> layer_sizes;
};

/// Ball of radius `depth` around t with every flip edge between its nodes.
FlipBall flip_ball(const OneVertexTriangulation& t, int depth, const SearchOptions& opt = {});

}  // namespace hypsweep::tri
