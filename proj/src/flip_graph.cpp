#include "hypsweep/flip_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "hypsweep/error.hpp"

namespace hypsweep::tri {

namespace {

using CodeMap = std::unordered_map<CanonicalCode, int, CanonicalCodeHash>;

OneVertexTriangulation prepare(const OneVertexTriangulation& t, Mode mode) {
  return mode == Mode::labeled ? t.with_marking() : t.without_marking();
}

struct Layer {
  std::vector<OneVertexTriangulation> tris;
  std::vector<CanonicalCode> codes;
};

void sort_layer(Layer& layer) {
  std::vector<std::size_t> idx(layer.codes.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return layer.codes[x] < layer.codes[y]; });
  Layer out;
  for (std::size_t i : idx) {
    out.tris.push_back(std::move(layer.tris[i]));
    out.codes.push_back(std::move(layer.codes[i]));
  }
  layer = std::move(out);
}

void check_budget(std::size_t stored, std::size_t budget) {
  if (stored > budget) {
    throw Error(Errc::BudgetExceeded, "search stored more than " + std::to_string(budget) + " nodes");
  }
}

}  // namespace

std::vector<std::vector<Neighbor>> expand_frontier(const std::vector<OneVertexTriangulation>& frontier,
                                                   Mode mode, Exec exec) {
  std::vector<std::vector<Neighbor>> out(frontier.size());
  for_each_index(frontier.size(), exec, [&](std::size_t i) {
    const OneVertexTriangulation& t = frontier[i];
    auto& nb = out[i];
    for (int e = 0; e < t.edge_count(); ++e) {
      if (!is_flippable(t, EdgeId{e})) continue;
      OneVertexTriangulation f = flip(t, EdgeId{e});
      CanonicalCode c = canonical_code(f, mode);
      nb.push_back({std::move(c), std::move(f), EdgeId{e}});
    }
  });
  return out;
}

int flip_distance(const OneVertexTriangulation& a0, const OneVertexTriangulation& b0, const SearchOptions& opt) {
  if (a0.genus() != b0.genus()) throw Error(Errc::GenusMismatch, "triangulations have different genus");
  OneVertexTriangulation a = prepare(a0, opt.mode);
  OneVertexTriangulation b = prepare(b0, opt.mode);
  if (opt.mode == Mode::labeled && !b0.marking() && !a0.marking() && a0.map() == b0.map()) b = a;

  struct Side {
    CodeMap seen;
    Layer frontier;
    int depth = 0;
  };
  Side sides[2];
  for (int s = 0; s < 2; ++s) {
    const OneVertexTriangulation& t = s == 0 ? a : b;
    CanonicalCode c = canonical_code(t, opt.mode);
    sides[s].seen.emplace(c, 0);
    sides[s].frontier.tris.push_back(t);
    sides[s].frontier.codes.push_back(std::move(c));
  }
  if (sides[0].frontier.codes[0] == sides[1].frontier.codes[0]) return 0;

  while (true) {
    // Grow the smaller side; ties go to the side of `a`.
    const int s = sides[1].frontier.tris.size() < sides[0].frontier.tris.size() ? 1 : 0;
    Side& me = sides[s];
    const Side& other = sides[1 - s];
    if (me.frontier.tris.empty()) {
      throw Error(Errc::Unreachable, "the flip-graph component was exhausted without meeting");
    }
    const auto nbrs = expand_frontier(me.frontier.tris, opt.mode, opt.exec);
    int best = -1;
    Layer next;
    for (const auto& list : nbrs) {
      for (const Neighbor& n : list) {
        if (auto it = other.seen.find(n.code); it != other.seen.end()) {
          const int total = me.depth + 1 + it->second;
          if (best < 0 || total < best) best = total;
        }
        if (me.seen.emplace(n.code, me.depth + 1).second) {
          next.tris.push_back(n.tri);
          next.codes.push_back(n.code);
        }
      }
    }
    if (best >= 0) return best;
    check_budget(sides[0].seen.size() + sides[1].seen.size(), opt.budget);
    sort_layer(next);
    me.frontier = std::move(next);
    ++me.depth;
  }
}

FlipBall flip_ball(const OneVertexTriangulation& t0, int depth, const SearchOptions& opt) {
  if (depth < 0) throw Error(Errc::OutOfRange, "depth must be non-negative");
  const OneVertexTriangulation t = prepare(t0, opt.mode);
  FlipBall ball;
  CodeMap index;
  CanonicalCode c0 = canonical_code(t, opt.mode);
  index.emplace(c0, 0);
  ball.nodes.push_back({c0, 0, t});
  ball.layer_sizes.push_back(1);

  std::set<std::pair<int, int>> edges;
  std::size_t layer_begin = 0;
  for (int d = 0; d <= depth; ++d) {
    const std::size_t layer_end = ball.nodes.size();
    std::vector<OneVertexTriangulation> frontier;
    for (std::size_t i = layer_begin; i < layer_end; ++i) frontier.push_back(ball.nodes[i].tri);
    const auto nbrs = expand_frontier(frontier, opt.mode, opt.exec);

    Layer next;
    CodeMap next_seen;
    std::vector<std::pair<int, CanonicalCode>> pending;  // edges into the next layer
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const int from = static_cast<int>(layer_begin + k);
      for (const Neighbor& n : nbrs[k]) {
        auto it = index.find(n.code);
        if (it != index.end()) {
          if (it->second == from) {
            ++ball.loops;
          } else {
            edges.emplace(std::min(from, it->second), std::max(from, it->second));
          }
          continue;
        }
        // Nodes beyond the last layer are not part of the ball.
        if (d == depth) continue;
        pending.emplace_back(from, n.code);
        if (next_seen.emplace(n.code, 0).second) {
          next.tris.push_back(n.tri);
          next.codes.push_back(n.code);
        }
      }
    }
    if (d == depth) break;
    sort_layer(next);
    for (std::size_t i = 0; i < next.codes.size(); ++i) {
      index.emplace(next.codes[i], static_cast<int>(ball.nodes.size()));
      ball.nodes.push_back({next.codes[i], d + 1, std::move(next.tris[i])});
    }
    check_budget(ball.nodes.size(), opt.budget);
    for (const auto& [from, code] : pending) {
      const int to = index.at(code);
      edges.emplace(std::min(from, to), std::max(from, to));
    }
    ball.layer_sizes.push_back(next.codes.size());
    layer_begin = layer_end;
  }
  ball.edges.assign(edges.begin(), edges.end());
  return ball;
}

}  // namespace hypsweep::tri
