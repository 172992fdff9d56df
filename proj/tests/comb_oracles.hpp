#pragma once

// Combinatorial oracles: direct isomorphism tests by propagation from one
// dart, and a forward BFS that deduplicates with them. Canonical codes are
// never used here.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "hypsweep/triangulation.hpp"

namespace oracle {

using hypsweep::tri::CombMap;
using hypsweep::tri::EdgeId;
using hypsweep::tri::OneVertexTriangulation;

/// Tries phi(0) = start, phi(next x) = next(phi x), phi(twin x) = twin phi(x).
/// Checks the marking too when both have one.
inline bool extends(const OneVertexTriangulation& a, const OneVertexTriangulation& b, int start, bool use_marking) {
  const CombMap& A = a.map();
  const CombMap& B = b.map();
  const int n = A.dart_count();
  std::vector<int> phi(static_cast<std::size_t>(n), -1), inv(static_cast<std::size_t>(n), -1);
  std::vector<int> stack{0};
  phi[0] = start;
  inv[static_cast<std::size_t>(start)] = 0;
  auto assign = [&](int x, int y) {
    if (phi[static_cast<std::size_t>(x)] == -1 && inv[static_cast<std::size_t>(y)] == -1) {
      phi[static_cast<std::size_t>(x)] = y;
      inv[static_cast<std::size_t>(y)] = x;
      stack.push_back(x);
      return true;
    }
    return phi[static_cast<std::size_t>(x)] == y;
  };
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    const int y = phi[static_cast<std::size_t>(x)];
    if (!assign(CombMap::next(x), CombMap::next(y))) return false;
    if (!assign(A.twin(x), B.twin(y))) return false;
  }
  if (use_marking && a.marking() && b.marking()) {
    const auto& ma = *a.marking();
    const auto& mb = *b.marking();
    if (ma.rank != mb.rank) return false;
    for (int x = 0; x < n; ++x) {
      if (!std::equal(ma.of(x), ma.of(x) + ma.rank, mb.of(phi[static_cast<std::size_t>(x)]))) return false;
    }
  }
  return true;
}

/// The same surface with every triangle's orientation reversed: next
/// becomes prev under the relabeling 3t+i -> 3t+(2-i).
inline CombMap mirror(const CombMap& m) {
  const int n = m.dart_count();
  auto rev = [](int d) { return 3 * (d / 3) + (2 - d % 3); };
  std::vector<int> tw(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) tw[static_cast<std::size_t>(rev(d))] = rev(m.twin(d));
  return CombMap(tw);
}

inline bool isomorphic(const OneVertexTriangulation& a, const OneVertexTriangulation& b, bool labeled) {
  if (a.dart_count() != b.dart_count()) return false;
  for (int s = 0; s < b.dart_count(); ++s) {
    if (extends(a, b, s, labeled)) return true;
  }
  if (labeled) return false;
  const auto bm = OneVertexTriangulation::from_map(mirror(b.map()));
  for (int s = 0; s < b.dart_count(); ++s) {
    if (extends(a, bm, s, false)) return true;
  }
  return false;
}

/// Cheap invariant used only to bucket candidates before the direct test.
inline std::vector<std::int64_t> bucket_key(const OneVertexTriangulation& t, bool labeled) {
  std::vector<std::int64_t> key;
  if (labeled && t.marking()) {
    const auto& m = *t.marking();
    std::vector<std::vector<std::int64_t>> cls;
    for (int d = 0; d < t.dart_count(); ++d) cls.emplace_back(m.of(d), m.of(d) + m.rank);
    std::sort(cls.begin(), cls.end());
    for (auto& c : cls) key.insert(key.end(), c.begin(), c.end());
    return key;
  }
  // per triangle, the sorted multiplicities of its neighbouring triangles
  std::vector<std::int64_t> rows;
  for (int f = 0; f < t.face_count(); ++f) {
    std::vector<int> nb;
    for (int i = 0; i < 3; ++i) nb.push_back(CombMap::face(t.map().twin(3 * f + i)));
    std::sort(nb.begin(), nb.end());
    std::vector<int> mult;
    for (std::size_t i = 0; i < nb.size();) {
      std::size_t j = i;
      while (j < nb.size() && nb[j] == nb[i]) ++j;
      mult.push_back(static_cast<int>(j - i));
      i = j;
    }
    std::sort(mult.begin(), mult.end());
    std::int64_t code = 0;
    for (int m : mult) code = code * 4 + m;
    rows.push_back(code);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

/// Set of states keyed by bucket, compared by the direct isomorphism test.
class StateSet {
 public:
  explicit StateSet(bool labeled) : labeled_(labeled) {}

  /// Index of t if present.
  std::optional<int> find(const OneVertexTriangulation& t) const {
    auto it = buckets_.find(bucket_key(t, labeled_));
    if (it == buckets_.end()) return std::nullopt;
    for (int i : it->second) {
      if (isomorphic(states_[static_cast<std::size_t>(i)], t, labeled_)) return i;
    }
    return std::nullopt;
  }
  int insert(const OneVertexTriangulation& t) {
    states_.push_back(t);
    const int i = static_cast<int>(states_.size()) - 1;
    buckets_[bucket_key(t, labeled_)].push_back(i);
    return i;
  }
  const OneVertexTriangulation& at(int i) const { return states_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(states_.size()); }

 private:
  bool labeled_;
  std::vector<OneVertexTriangulation> states_;
  std::map<std::vector<std::int64_t>, std::vector<int>> buckets_;
};

struct ForwardBall {
  std::vector<int> depth;                      // per state
  std::vector<std::pair<int, int>> edges;      // i < j, deduplicated
  std::vector<int> layer_sizes;
  StateSet states;
};

/// Plain forward BFS to `depth`, recording flip edges among ball states.
inline ForwardBall forward_ball(const OneVertexTriangulation& start, int depth, bool labeled) {
  ForwardBall fb{{}, {}, {}, StateSet(labeled)};
  const auto s = labeled ? start.with_marking() : start.without_marking();
  fb.states.insert(s);
  fb.depth.push_back(0);
  std::vector<int> frontier{0};
  fb.layer_sizes.push_back(1);
  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k <= depth; ++k) {
    std::vector<int> next;
    for (int i : frontier) {
      const auto cur = fb.states.at(i);
      for (int e = 0; e < cur.edge_count(); ++e) {
        if (!hypsweep::tri::is_flippable(cur, EdgeId{e})) continue;
        const auto nb = hypsweep::tri::flip(cur, EdgeId{e});
        auto j = fb.states.find(nb);
        if (!j && k < depth) {
          j = fb.states.insert(nb);
          fb.depth.push_back(k + 1);
          next.push_back(*j);
        }
        if (j && *j != i) edges.emplace_back(std::min(i, *j), std::max(i, *j));
      }
    }
    if (k < depth) fb.layer_sizes.push_back(static_cast<int>(next.size()));
    frontier = std::move(next);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  fb.edges = std::move(edges);
  return fb;
}

/// Forward BFS distance from a to b; -1 if not found within max_depth.
inline int forward_distance(const OneVertexTriangulation& a, const OneVertexTriangulation& b, int max_depth,
                            bool labeled) {
  StateSet seen(labeled);
  const auto target = labeled ? b : b.without_marking();
  std::vector<int> frontier{seen.insert(labeled ? a : a.without_marking())};
  if (isomorphic(seen.at(0), target, labeled)) return 0;
  for (int k = 1; k <= max_depth; ++k) {
    std::vector<int> next;
    for (int i : frontier) {
      const auto cur = seen.at(i);
      for (int e = 0; e < cur.edge_count(); ++e) {
        if (!hypsweep::tri::is_flippable(cur, EdgeId{e})) continue;
        const auto nb = hypsweep::tri::flip(cur, EdgeId{e});
        if (seen.find(nb)) continue;
        if (isomorphic(nb, target, labeled)) return k;
        next.push_back(seen.insert(nb));
      }
    }
    frontier = std::move(next);
  }
  return -1;
}

/// Random relabeling: permutes triangles and rotates each one's darts.
inline OneVertexTriangulation relabel(const OneVertexTriangulation& t, std::mt19937_64& rng) {
  const int F = t.face_count();
  std::vector<int> perm(static_cast<std::size_t>(F));
  for (int i = 0; i < F; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_int_distribution<int> rot(0, 2);
  std::vector<int> shift(static_cast<std::size_t>(F));
  for (auto& s : shift) s = rot(rng);
  auto img = [&](int d) {
    const int f = d / 3;
    return 3 * perm[static_cast<std::size_t>(f)] + (d % 3 + shift[static_cast<std::size_t>(f)]) % 3;
  };
  std::vector<int> tw(static_cast<std::size_t>(t.dart_count()));
  for (int d = 0; d < t.dart_count(); ++d) tw[static_cast<std::size_t>(img(d))] = img(t.map().twin(d));
  if (!t.marking()) return OneVertexTriangulation::from_map(CombMap(tw));
  hypsweep::tri::Marking m;
  m.rank = t.marking()->rank;
  m.classes.assign(t.marking()->classes.size(), 0);
  for (int d = 0; d < t.dart_count(); ++d) {
    std::copy(t.marking()->of(d), t.marking()->of(d) + m.rank,
              m.classes.begin() + static_cast<std::ptrdiff_t>(img(d)) * m.rank);
  }
  return OneVertexTriangulation::from_map(CombMap(tw), m);
}

}  // namespace oracle
