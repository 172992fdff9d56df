#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "comb_oracles.hpp"
#include "hypsweep/error.hpp"
#include "hypsweep/triangulation.hpp"

using namespace hypsweep;
using namespace hypsweep::tri;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidInput;
}

OneVertexTriangulation random_walk(OneVertexTriangulation t, int steps, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, t.edge_count() - 1);
  for (int i = 0; i < steps; ++i) t = flip(t, {pick(rng)});
  return t;
}

// orbits of twin o next, counted without the library
int vertex_orbits(const std::vector<int>& twin) {
  const int n = static_cast<int>(twin.size());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  int count = 0;
  for (int d = 0; d < n; ++d) {
    if (seen[static_cast<std::size_t>(d)]) continue;
    ++count;
    for (int x = d; !seen[static_cast<std::size_t>(x)]; x = twin[static_cast<std::size_t>(CombMap::next(x))]) {
      seen[static_cast<std::size_t>(x)] = 1;
    }
  }
  return count;
}

}  // namespace

TEST_SUITE("triangulation") {
  TEST_CASE("standard_genus_g: cell counts and verify") {
    for (int g = 1; g <= 8; ++g) {
      const auto t = standard_genus_g(g);
      CHECK(t.genus() == g);
      CHECK(t.face_count() == 4 * g - 2);
      CHECK(t.edge_count() == 6 * g - 3);
      CHECK(t.map().vertex_count() == 1);
      CHECK(vertex_orbits(t.map().twins()) == 1);
      const auto rep = verify(t.map());
      CHECK(rep.ok);
      CHECK(rep.euler_characteristic == 2 - 2 * g);
      REQUIRE(t.marking());
      CHECK(t.marking()->rank == 2 * g);
    }
    CHECK(standard_genus_g(1).face_count() == 2);
    CHECK(standard_genus_g(1).edge_count() == 3);
    CHECK(standard_genus_g(2).face_count() == 6);
    CHECK(standard_genus_g(2).edge_count() == 9);
    CHECK(code_of([] { standard_genus_g(0); }) == Errc::InvalidGenus);
  }

  TEST_CASE("verify reports the first violation") {
    auto tw = standard_genus_g(3).map().twins();
    tw[4] = 4;
    auto rep = verify(CombMap(tw));
    CHECK_FALSE(rep.ok);
    CHECK(rep.first_violation == "involution");

    // A torus with two vertices: search random gluings of four triangles,
    // judged by an independent orbit count.
    std::mt19937_64 rng(5);
    bool found = false;
    for (int attempt = 0; attempt < 10000 && !found; ++attempt) {
      std::vector<int> darts(12);
      std::iota(darts.begin(), darts.end(), 0);
      std::shuffle(darts.begin(), darts.end(), rng);
      std::vector<int> twin(12);
      for (int i = 0; i < 12; i += 2) {
        twin[static_cast<std::size_t>(darts[i])] = darts[i + 1];
        twin[static_cast<std::size_t>(darts[i + 1])] = darts[i];
      }
      if (vertex_orbits(twin) != 2) continue;
      const CombMap m(twin);
      // skip disconnected gluings
      if (verify(m).checks[2].passed == false) continue;
      rep = verify(m);
      CHECK_FALSE(rep.ok);
      CHECK(rep.first_violation == "vertex count");
      CHECK(rep.vertices == 2);
      CHECK(rep.euler_characteristic == 0);
      CHECK(code_of([&] { OneVertexTriangulation::from_map(m); }) == Errc::InvalidInput);
      found = true;
    }
    CHECK(found);

    CHECK(code_of([] { CombMap(std::vector<int>{1, 0}); }) == Errc::InvalidInput);
    CHECK(code_of([] { CombMap(std::vector<int>{1, 0, 7}); }) == Errc::InvalidInput);
  }

  TEST_CASE("is_flippable") {
    const auto torus = standard_genus_g(1);
    for (int e = 0; e < 3; ++e) CHECK(is_flippable(torus, {e}));
    CHECK(code_of([&] { is_flippable(torus, {3}); }) == Errc::BadEdgeId);
    CHECK(code_of([&] { is_flippable(torus, {-1}); }) == Errc::BadEdgeId);

    // A triangle folded onto itself is not flippable; such an edge cannot
    // occur in a one-vertex triangulation, so it is built as a raw map.
    const CombMap folded(std::vector<int>{1, 0, 5, 4, 3, 2});
    CHECK_FALSE(is_flippable(folded, folded.edge_of(0)));
    CHECK(is_flippable(folded, folded.edge_of(2)));

    // No reachable genus-2 state within 4 flips has a non-flippable edge.
    const auto ball = oracle::forward_ball(standard_genus_g(2), 3, false);
    for (int i = 0; i < ball.states.size(); ++i) {
      const auto& t = ball.states.at(i);
      for (int e = 0; e < t.edge_count(); ++e) CHECK(is_flippable(t, {e}));
    }

    // the new diagonal is flippable again
    const auto r = flip_detailed(standard_genus_g(2), {4});
    CHECK(is_flippable(r.tri, r.new_edge));
  }

  TEST_CASE("flip: involution up to isomorphism, counts and genus preserved") {
    std::mt19937_64 rng(11);
    // Homology coordinates grow exponentially along a random walk, so the
    // long walk runs on the bare map.
    auto t = standard_genus_g(2).without_marking();
    std::uniform_int_distribution<int> pick(0, t.edge_count() - 1);
    for (int i = 0; i < 10000; ++i) {
      const auto r = flip_detailed(t, {pick(rng)});
      CHECK(r.tri.genus() == 2);
      CHECK(r.tri.face_count() == 6);
      CHECK(r.tri.edge_count() == 9);
      if (i % 500 == 0) {
        CHECK(verify(r.tri.map()).ok);
        const auto back = flip(r.tri, r.new_edge);
        CHECK(canonical_code(back, Mode::iso) == canonical_code(t, Mode::iso));
        CHECK(oracle::isomorphic(back, t, false));
      }
      t = r.tri;
    }
    auto m = standard_genus_g(2);
    for (int i = 0; i < 100; ++i) {
      const auto r = flip_detailed(m, {pick(rng)});
      const auto back = flip(r.tri, r.new_edge);
      CHECK(canonical_code(back, Mode::labeled) == canonical_code(m, Mode::labeled));
      CHECK(oracle::isomorphic(back, m, true));
      m = r.tri;
    }
  }

  TEST_CASE("marking overflow is reported") {
    std::mt19937_64 rng(12);
    auto t = standard_genus_g(2);
    std::uniform_int_distribution<int> pick(0, t.edge_count() - 1);
    CHECK(code_of([&] {
            for (int i = 0; i < 1000000; ++i) t = flip(t, {pick(rng)});
          }) == Errc::MarkingOverflow);
  }

  TEST_CASE("marking: validation and propagation") {
    const auto t = standard_genus_g(2);
    auto m = *t.marking();
    CHECK_NOTHROW(OneVertexTriangulation::from_map(t.map(), m));
    m.classes[0] += 1;
    CHECK(code_of([&] { OneVertexTriangulation::from_map(t.map(), m); }) == Errc::InvalidInput);
    // doubling every class keeps the relations but no longer spans H_1
    auto twice = *t.marking();
    for (auto& c : twice.classes) c *= 2;
    CHECK(code_of([&] { OneVertexTriangulation::from_map(t.map(), twice); }) == Errc::InvalidInput);

    const auto cot = cotree_marking(t.map());
    CHECK_NOTHROW(OneVertexTriangulation::from_map(t.map(), cot));

    std::mt19937_64 rng(3);
    const auto walked = random_walk(t, 200, rng);
    REQUIRE(walked.marking());
    CHECK_NOTHROW(OneVertexTriangulation::from_map(walked.map(), *walked.marking()));
  }

  TEST_CASE("canonical_code: relabeling invariance and brute-force agreement") {
    std::mt19937_64 rng(21);
    for (int g = 1; g <= 3; ++g) {
      const auto t = random_walk(standard_genus_g(g), 15, rng);
      const auto ci = canonical_code(t, Mode::iso);
      const auto cl = canonical_code(t, Mode::labeled);
      for (int k = 0; k < 100; ++k) {
        const auto r = oracle::relabel(t, rng);
        CHECK(canonical_code(r, Mode::iso) == ci);
        CHECK(canonical_code(r, Mode::labeled) == cl);
      }
      CHECK(oracle::isomorphic(t, oracle::relabel(t, rng), true));
    }
    CHECK_FALSE(canonical_code(standard_genus_g(1)).hex().empty());
    CHECK(code_of([] { canonical_code(standard_genus_g(2).without_marking(), Mode::labeled); }) ==
          Errc::InvalidInput);

    // Pairwise: codes agree exactly when the direct isomorphism test does.
    std::vector<OneVertexTriangulation> sample;
    for (int i = 0; i < 40; ++i) sample.push_back(random_walk(standard_genus_g(2), 1 + i % 6, rng));
    for (std::size_t i = 0; i < sample.size(); ++i) {
      for (std::size_t j = i + 1; j < sample.size(); ++j) {
        CHECK((canonical_code(sample[i], Mode::iso) == canonical_code(sample[j], Mode::iso)) ==
              oracle::isomorphic(sample[i], sample[j], false));
        CHECK((canonical_code(sample[i], Mode::labeled) == canonical_code(sample[j], Mode::labeled)) ==
              oracle::isomorphic(sample[i], sample[j], true));
      }
    }
  }

  TEST_CASE("canonical_code: torus has one class, genus 2 class count") {
    const auto torus = oracle::forward_ball(standard_genus_g(1), 6, true);
    std::set<CanonicalCode> codes;
    for (int i = 0; i < torus.states.size(); ++i) codes.insert(canonical_code(torus.states.at(i), Mode::iso));
    CHECK(codes.size() == 1);

    const auto g2 = oracle::forward_ball(standard_genus_g(2), 3, false);
    std::set<CanonicalCode> g2codes;
    for (int i = 0; i < g2.states.size(); ++i) g2codes.insert(canonical_code(g2.states.at(i), Mode::iso));
    CHECK(static_cast<int>(g2codes.size()) == g2.states.size());
  }

  TEST_CASE("FlipPath states and errors") {
    const FlipPath p{standard_genus_g(2), {{0}, {3}, {7}}};
    const auto states = p.states();
    CHECK(states.size() == 4);
    CHECK(canonical_code(p.end(), Mode::labeled) == canonical_code(states.back(), Mode::labeled));
    const FlipPath bad{standard_genus_g(2), {{0}, {42}}};
    CHECK(code_of([&] { bad.states(); }) == Errc::BadEdgeId);
  }
}
