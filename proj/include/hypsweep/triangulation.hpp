#pragma once

// One-vertex triangulations of closed orientable surfaces, encoded as
// combinatorial maps on darts.
//
// Darts 3t, 3t+1, 3t+2 are the sides of triangle t in cyclic order; dart
// 3t+i runs from corner i to corner i+1. `twin` pairs the two sides glued
// along an edge, with opposite orientations, so every map is oriented.
//
// A closed genus-g surface with one vertex has F = 4g-2 triangles and
// E = 6g-3 edges (forced by 3F = 2E and V - E + F = 2 - 2g).

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hypsweep::tri {

/// Index into the edge list, where edges are ordered by their smaller dart.
struct EdgeId {
  int id = 0;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

class CombMap {
 public:
  CombMap() = default;
  /// Only checks that the array has a length divisible by 3 and in-range
  /// entries; everything else is verify()'s job.
  explicit CombMap(std::vector<int> twin);

  int dart_count() const { return static_cast<int>(twin_.size()); }
  int face_count() const { return dart_count() / 3; }
  int edge_count() const { return dart_count() / 2; }

  static int face(int d) { return d / 3; }
  static int next(int d) { return 3 * (d / 3) + (d % 3 + 1) % 3; }
  static int prev(int d) { return 3 * (d / 3) + (d % 3 + 2) % 3; }
  int twin(int d) const { return twin_[static_cast<std::size_t>(d)]; }
  const std::vector<int>& twins() const { return twin_; }

  /// Representative (smaller) dart of each edge, in EdgeId order.
  std::vector<int> edge_darts() const;
  /// EdgeId of the edge containing dart d.
  EdgeId edge_of(int d) const;
  /// Number of orbits of twin o next (vertices). Requires an involution.
  int vertex_count() const;

  friend bool operator==(const CombMap&, const CombMap&) = default;

 private:
  std::vector<int> twin_;
};

struct VerifyCheck {
  std::string name;
  bool passed = false;
};

struct VerifyReport {
  bool ok = false;
  std::string first_violation;  // empty when ok
  std::vector<VerifyCheck> checks;
  int vertices = 0;
  int euler_characteristic = 0;
  int genus = 0;
};

VerifyReport verify(const CombMap& map);

/// Integral homology class of every dart, in a fixed basis of H_1(S; Z).
/// Twin darts carry opposite classes and each triangle's classes sum to 0.
struct Marking {
  int rank = 0;                       // 2g
  std::vector<std::int64_t> classes;  // dart-major, rank entries per dart

  const std::int64_t* of(int dart) const {
    return classes.data() + static_cast<std::size_t>(dart) * static_cast<std::size_t>(rank);
  }
  friend bool operator==(const Marking&, const Marking&) = default;
};

class OneVertexTriangulation {
 public:
  /// Throws InvalidInput with the first verify() violation.
  static OneVertexTriangulation from_map(CombMap map);
  /// Also validates the marking (relations and that it spans H_1).
  static OneVertexTriangulation from_map(CombMap map, Marking marking);

  const CombMap& map() const { return map_; }
  int genus() const { return genus_; }
  int face_count() const { return map_.face_count(); }
  int edge_count() const { return map_.edge_count(); }
  int dart_count() const { return map_.dart_count(); }

  const std::optional<Marking>& marking() const { return marking_; }
  /// Copy carrying a marking; keeps an existing one, otherwise computes the
  /// dual-spanning-tree (cotree) basis of the map.
  OneVertexTriangulation with_marking() const;
  OneVertexTriangulation without_marking() const;

 private:
  OneVertexTriangulation(CombMap map, int genus, std::optional<Marking> marking)
      : map_(std::move(map)), genus_(genus), marking_(std::move(marking)) {}

  friend struct FlipAccess;

  CombMap map_;
  int genus_ = 0;
  std::optional<Marking> marking_;
};

/// The 4g-gon with word a1 b1 a1^-1 b1^-1 ... fan-triangulated from corner 0
/// by 4g-3 diagonals. Comes with the marking in which side a_i (b_i) is the
/// basis vector e_{2i} (e_{2i+1}).
OneVertexTriangulation standard_genus_g(int g);

/// Dart of polygon side j (running from corner j to corner j+1) in the
/// standard genus-g triangulation.
int standard_side_dart(int g, int side);

/// Homology marking from a dual spanning tree: cotree edges, in EdgeId
/// order, are the basis.
Marking cotree_marking(const CombMap& map);

bool is_flippable(const CombMap& map, EdgeId e);
bool is_flippable(const OneVertexTriangulation& t, EdgeId e);

struct FlipResult {
  OneVertexTriangulation tri;
  EdgeId new_edge;
  /// new slot of every old dart; the removed diagonal's darts map to the
  /// slots now holding the new diagonal.
  std::vector<int> dart_map;
  /// The quadrilateral supporting the flip, as darts of the old map: the
  /// flipped dart d (u -> v) and the four boundary darts
  /// n = v -> w, p = w -> u (triangle of d), n2 = u -> x, p2 = x -> v.
  int d = 0, n = 0, p = 0, n2 = 0, p2 = 0;
};

FlipResult flip_detailed(const OneVertexTriangulation& t, EdgeId e);
OneVertexTriangulation flip(const OneVertexTriangulation& t, EdgeId e);

enum class Mode { labeled, iso };

/// Lexicographically least traversal code of the map over every starting
/// dart (and, in iso mode, both orientations). In labeled mode the marking
/// is part of the code, so codes identify marked triangulations, i.e. the
/// same curves up to homology; iso mode identifies isomorphic maps.
struct CanonicalCode {
  std::vector<std::int64_t> words;

  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
  std::string hex() const;
};

struct CanonicalCodeHash {
  std::size_t operator()(const CanonicalCode& c) const noexcept;
};

/// Requires a marking in labeled mode (InvalidInput otherwise).
CanonicalCode canonical_code(const OneVertexTriangulation& t, Mode mode = Mode::iso);

struct FlipPath {
  OneVertexTriangulation start;
  std::vector<EdgeId> moves;

  /// Every intermediate triangulation, start first. Throws NotFlippable or
  /// BadEdgeId at the first illegal move.
  std::vector<OneVertexTriangulation> states() const;
  OneVertexTriangulation end() const;
};

}  // namespace hypsweep::tri
