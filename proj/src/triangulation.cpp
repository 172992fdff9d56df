#include "hypsweep/triangulation.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <queue>

#include "hypsweep/error.hpp"

namespace hypsweep::tri {

namespace {

[[noreturn]] void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

std::int64_t checked_neg_sum(std::int64_t a, std::int64_t b) {
  std::int64_t s = 0;
  if (__builtin_add_overflow(a, b, &s) || s == INT64_MIN) {
    fail(Errc::MarkingOverflow, "homology coordinate exceeds 64 bits");
  }
  return -s;
}

}  // namespace

// Lets flips build results without rerunning verify().
struct FlipAccess {
  static OneVertexTriangulation make(CombMap m, int genus, std::optional<Marking> mk) {
    return OneVertexTriangulation(std::move(m), genus, std::move(mk));
  }
};

CombMap::CombMap(std::vector<int> twin) : twin_(std::move(twin)) {
  if (twin_.empty() || twin_.size() % 3 != 0) {
    fail(Errc::InvalidInput, "dart count must be a positive multiple of 3");
  }
  const int n = dart_count();
  for (int t : twin_) {
    if (t < 0 || t >= n) fail(Errc::InvalidInput, "twin entry out of range");
  }
}

std::vector<int> CombMap::edge_darts() const {
  std::vector<int> reps;
  reps.reserve(twin_.size() / 2);
  for (int d = 0; d < dart_count(); ++d) {
    if (d < twin(d)) reps.push_back(d);
  }
  return reps;
}

EdgeId CombMap::edge_of(int d) const {
  const int rep = std::min(d, twin(d));
  int id = 0;
  for (int e = 0; e < rep; ++e) {
    if (e < twin(e)) ++id;
  }
  return EdgeId{id};
}

int CombMap::vertex_count() const {
  std::vector<char> seen(twin_.size(), 0);
  int orbits = 0;
  for (int d = 0; d < dart_count(); ++d) {
    if (seen[static_cast<std::size_t>(d)]) continue;
    ++orbits;
    int x = d;
    while (!seen[static_cast<std::size_t>(x)]) {
      seen[static_cast<std::size_t>(x)] = 1;
      x = twin(next(x));
    }
  }
  return orbits;
}

VerifyReport verify(const CombMap& map) {
  VerifyReport rep;
  auto record = [&](const char* name, bool ok) {
    rep.checks.push_back({name, ok});
    if (!ok && rep.first_violation.empty()) rep.first_violation = name;
    return ok;
  };
  const int n = map.dart_count();

  bool invol = true;
  bool fixed_free = true;
  for (int d = 0; d < n; ++d) {
    if (map.twin(map.twin(d)) != d) invol = false;
    if (map.twin(d) == d) fixed_free = false;
  }
  record("involution", invol && fixed_free);
  // Sides are glued with opposite orientations by construction of the
  // encoding, so the surface is always oriented; the check is recorded so
  // the report lists every condition.
  record("orientability", true);
  if (!rep.first_violation.empty()) return rep;

  std::vector<char> seen(static_cast<std::size_t>(map.face_count()), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    for (int i = 0; i < 3; ++i) {
      const int u = CombMap::face(map.twin(3 * t + i));
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  record("connected", reached == map.face_count());

  rep.vertices = map.vertex_count();
  rep.euler_characteristic = rep.vertices - map.edge_count() + map.face_count();
  record("vertex count", rep.vertices == 1);
  const int chi = rep.euler_characteristic;
  const bool euler_ok = chi <= 0 && chi % 2 == 0;
  rep.genus = euler_ok ? (2 - chi) / 2 : 0;
  record("euler characteristic", euler_ok && map.face_count() == 4 * rep.genus - 2 &&
                                     map.edge_count() == 6 * rep.genus - 3);
  rep.ok = rep.first_violation.empty();
  return rep;
}

namespace {

// Integer row reduction; true iff the rows generate all of Z^rank.
bool spans_lattice(std::vector<std::vector<__int128>> rows, int rank) {
  std::size_t top = 0;
  for (int c = 0; c < rank; ++c) {
    // Euclid on column c among rows[top..] until one nonzero entry remains.
    while (true) {
      std::size_t piv = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i) {
        if (rows[i][c] != 0 && (piv == rows.size() || (rows[i][c] < 0 ? -rows[i][c] : rows[i][c]) <
                                                          (rows[piv][c] < 0 ? -rows[piv][c] : rows[piv][c]))) {
          piv = i;
        }
      }
      if (piv == rows.size()) return false;
      std::swap(rows[top], rows[piv]);
      bool others = false;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        const __int128 q = rows[i][c] / rows[top][c];
        for (int k = c; k < rank; ++k) rows[i][k] -= q * rows[top][k];
        if (rows[i][c] != 0) others = true;
      }
      if (!others) break;
    }
    if (rows[top][c] != 1 && rows[top][c] != -1) return false;
    ++top;
  }
  return true;
}

void validate_marking(const CombMap& map, int genus, const Marking& mk) {
  const int n = map.dart_count();
  if (mk.rank != 2 * genus ||
      mk.classes.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(mk.rank)) {
    fail(Errc::InvalidInput, "marking must carry 2g integers per dart");
  }
  for (int d = 0; d < n; ++d) {
    const auto* a = mk.of(d);
    const auto* b = mk.of(map.twin(d));
    for (int k = 0; k < mk.rank; ++k) {
      if (a[k] != -b[k]) fail(Errc::InvalidInput, "marking: twin darts need opposite classes");
    }
  }
  for (int t = 0; t < map.face_count(); ++t) {
    for (int k = 0; k < mk.rank; ++k) {
      __int128 s = 0;
      for (int i = 0; i < 3; ++i) s += mk.of(3 * t + i)[k];
      if (s != 0) fail(Errc::InvalidInput, "marking: triangle classes must sum to zero");
    }
  }
  std::vector<std::vector<__int128>> rows;
  for (int d : map.edge_darts()) rows.emplace_back(mk.of(d), mk.of(d) + mk.rank);
  if (!spans_lattice(std::move(rows), mk.rank)) {
    fail(Errc::InvalidInput, "marking does not generate the homology lattice");
  }
}

}  // namespace

OneVertexTriangulation OneVertexTriangulation::from_map(CombMap map) {
  const VerifyReport rep = verify(map);
  if (!rep.ok) fail(Errc::InvalidInput, "triangulation fails verify: " + rep.first_violation);
  return OneVertexTriangulation(std::move(map), rep.genus, std::nullopt);
}

OneVertexTriangulation OneVertexTriangulation::from_map(CombMap map, Marking marking) {
  OneVertexTriangulation t = from_map(std::move(map));
  validate_marking(t.map_, t.genus_, marking);
  t.marking_ = std::move(marking);
  return t;
}

OneVertexTriangulation OneVertexTriangulation::with_marking() const {
  if (marking_) return *this;
  return OneVertexTriangulation(map_, genus_, cotree_marking(map_));
}

OneVertexTriangulation OneVertexTriangulation::without_marking() const {
  return OneVertexTriangulation(map_, genus_, std::nullopt);
}

Marking cotree_marking(const CombMap& map) {
  const int F = map.face_count();
  const int n = map.dart_count();
  // Dual spanning tree by BFS from triangle 0; parent_dart[t] is the dart of
  // t crossing to its parent.
  std::vector<int> parent_dart(static_cast<std::size_t>(F), -1);
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  std::vector<int> order{0};
  std::vector<char> seen(static_cast<std::size_t>(F), 0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int t = order[i];
    for (int k = 0; k < 3; ++k) {
      const int d = 3 * t + k;
      const int u = CombMap::face(map.twin(d));
      if (seen[static_cast<std::size_t>(u)]) continue;
      seen[static_cast<std::size_t>(u)] = 1;
      parent_dart[static_cast<std::size_t>(u)] = map.twin(d);
      in_tree[static_cast<std::size_t>(d)] = in_tree[static_cast<std::size_t>(map.twin(d))] = 1;
      order.push_back(u);
    }
  }
  const int rank = map.edge_count() - (F - 1);
  Marking mk{rank, std::vector<std::int64_t>(static_cast<std::size_t>(n) * static_cast<std::size_t>(rank), 0)};
  auto cls = [&](int d) { return mk.classes.data() + static_cast<std::size_t>(d) * static_cast<std::size_t>(rank); };
  int next_basis = 0;
  for (int d : map.edge_darts()) {
    if (in_tree[static_cast<std::size_t>(d)]) continue;
    cls(d)[next_basis] = 1;
    cls(map.twin(d))[next_basis] = -1;
    ++next_basis;
  }
  // Leaves first: the parent side of each triangle is minus the other two.
  for (std::size_t i = order.size(); i-- > 1;) {
    const int t = order[i];
    const int p = parent_dart[static_cast<std::size_t>(t)];
    const int a = CombMap::next(p);
    const int b = CombMap::prev(p);
    for (int k = 0; k < rank; ++k) {
      cls(p)[k] = checked_neg_sum(cls(a)[k], cls(b)[k]);
      cls(map.twin(p))[k] = -cls(p)[k];
    }
  }
  return mk;
}

int standard_side_dart(int g, int side) {
  const int sides = 4 * g;
  if (side < 0 || side >= sides) fail(Errc::OutOfRange, "polygon side out of range");
  if (side == 0) return 0;
  if (side == sides - 1) return 3 * (sides - 3) + 2;
  return 3 * (side - 1) + 1;
}

OneVertexTriangulation standard_genus_g(int g) {
  if (g < 1) fail(Errc::InvalidGenus, "genus must be at least 1");
  const int F = 4 * g - 2;
  std::vector<int> twin(static_cast<std::size_t>(3 * F), -1);
  auto glue = [&](int a, int b) {
    twin[static_cast<std::size_t>(a)] = b;
    twin[static_cast<std::size_t>(b)] = a;
  };
  // Triangle k is (P0, P_{k+1}, P_{k+2}); consecutive fan triangles share
  // the diagonal P0 P_{k+2}.
  for (int k = 0; k + 1 < F; ++k) glue(3 * k + 2, 3 * (k + 1));
  for (int i = 0; i < g; ++i) {
    glue(standard_side_dart(g, 4 * i), standard_side_dart(g, 4 * i + 2));
    glue(standard_side_dart(g, 4 * i + 1), standard_side_dart(g, 4 * i + 3));
  }

  const int rank = 2 * g;
  Marking mk{rank, std::vector<std::int64_t>(twin.size() * static_cast<std::size_t>(rank), 0)};
  auto cls = [&](int d) { return mk.classes.data() + static_cast<std::size_t>(d) * static_cast<std::size_t>(rank); };
  // Walking the boundary, side 4i+j is a_i, b_i, a_i^-1, b_i^-1.
  std::vector<std::vector<std::int64_t>> prefix(1, std::vector<std::int64_t>(static_cast<std::size_t>(rank), 0));
  for (int s = 0; s < 4 * g; ++s) {
    const int i = s / 4;
    const int j = s % 4;
    const int basis = 2 * i + (j % 2);
    const std::int64_t sign = j < 2 ? 1 : -1;
    cls(standard_side_dart(g, s))[basis] = sign;
    auto next = prefix.back();
    next[static_cast<std::size_t>(basis)] += sign;
    prefix.push_back(std::move(next));
  }
  // Diagonal P0 -> P_{k+2} is the sum of the first k+2 sides.
  for (int k = 0; k + 1 < F; ++k) {
    for (int b = 0; b < rank; ++b) {
      const std::int64_t v = prefix[static_cast<std::size_t>(k + 2)][static_cast<std::size_t>(b)];
      cls(3 * (k + 1))[b] = v;
      cls(3 * k + 2)[b] = -v;
    }
  }
  return FlipAccess::make(CombMap(std::move(twin)), g, std::move(mk));
}

bool is_flippable(const CombMap& map, EdgeId e) {
  if (e.id < 0 || e.id >= map.edge_count()) fail(Errc::BadEdgeId, "edge id out of range");
  const int d = map.edge_darts()[static_cast<std::size_t>(e.id)];
  return CombMap::face(d) != CombMap::face(map.twin(d));
}

bool is_flippable(const OneVertexTriangulation& t, EdgeId e) { return is_flippable(t.map(), e); }

FlipResult flip_detailed(const OneVertexTriangulation& t, EdgeId e) {
  const CombMap& m = t.map();
  if (!is_flippable(m, e)) fail(Errc::NotFlippable, "both sides of the edge lie in one triangle");
  const int d = m.edge_darts()[static_cast<std::size_t>(e.id)];
  const int d2 = m.twin(d);
  const int n = CombMap::next(d), p = CombMap::prev(d);
  const int n2 = CombMap::next(d2), p2 = CombMap::prev(d2);

  // Triangle of d: u->v, v->w, w->u; triangle of d2: v->u, u->x, x->v.
  // After the flip the slots hold (x->w, w->u, u->x) and (w->x, x->v, v->w).
  std::vector<int> where(static_cast<std::size_t>(m.dart_count()));
  std::iota(where.begin(), where.end(), 0);
  where[static_cast<std::size_t>(p)] = n;
  where[static_cast<std::size_t>(n2)] = p;
  where[static_cast<std::size_t>(p2)] = n2;
  where[static_cast<std::size_t>(n)] = p2;

  std::vector<int> twin(static_cast<std::size_t>(m.dart_count()));
  for (int a = 0; a < m.dart_count(); ++a) {
    if (a == d || a == d2) continue;
    twin[static_cast<std::size_t>(where[static_cast<std::size_t>(a)])] =
        where[static_cast<std::size_t>(m.twin(a))];
  }
  twin[static_cast<std::size_t>(d)] = d2;
  twin[static_cast<std::size_t>(d2)] = d;

  std::optional<Marking> mk;
  if (const auto& old = t.marking()) {
    Marking nm{old->rank, std::vector<std::int64_t>(old->classes.size())};
    const auto r = static_cast<std::size_t>(old->rank);
    for (int a = 0; a < m.dart_count(); ++a) {
      if (a == d || a == d2) continue;
      std::copy_n(old->of(a), r, nm.classes.data() + static_cast<std::size_t>(where[static_cast<std::size_t>(a)]) * r);
    }
    for (std::size_t k = 0; k < r; ++k) {
      const std::int64_t v = checked_neg_sum(old->of(p)[k], old->of(n2)[k]);
      nm.classes[static_cast<std::size_t>(d) * r + k] = v;
      nm.classes[static_cast<std::size_t>(d2) * r + k] = -v;
    }
    mk = std::move(nm);
  }

  CombMap nmap(std::move(twin));
  const EdgeId ne = nmap.edge_of(d);
  FlipResult res{FlipAccess::make(std::move(nmap), t.genus(), std::move(mk)), ne, std::move(where), d, n, p, n2, p2};
  return res;
}

OneVertexTriangulation flip(const OneVertexTriangulation& t, EdgeId e) { return flip_detailed(t, e).tri; }

std::string CanonicalCode::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (std::int64_t w : words) {
    // zigzag varint
    auto z = (static_cast<std::uint64_t>(w) << 1) ^ static_cast<std::uint64_t>(w >> 63);
    do {
      std::uint8_t byte = z & 0x7f;
      z >>= 7;
      if (z) byte |= 0x80;
      out.push_back(digits[byte >> 4]);
      out.push_back(digits[byte & 15]);
    } while (z);
  }
  return out;
}

std::size_t CanonicalCodeHash::operator()(const CanonicalCode& c) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t w : c.words) {
    h ^= static_cast<std::uint64_t>(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

CanonicalCode canonical_code(const OneVertexTriangulation& t, Mode mode) {
  const CombMap& m = t.map();
  const int n = m.dart_count();
  const Marking* mk = nullptr;
  if (mode == Mode::labeled) {
    if (!t.marking()) fail(Errc::InvalidInput, "labeled mode needs a homology marking");
    mk = &*t.marking();
  }
  const int rank = mk ? mk->rank : 0;
  const std::size_t words_per = 2 + static_cast<std::size_t>(rank);

  std::vector<std::int64_t> best;
  std::vector<std::int64_t> cur(words_per * static_cast<std::size_t>(n));
  std::vector<int> label(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));

  const int orientations = mode == Mode::iso ? 2 : 1;
  for (int o = 0; o < orientations; ++o) {
    auto nu = [o](int d) { return o == 0 ? CombMap::next(d) : CombMap::prev(d); };
    for (int s = 0; s < n; ++s) {
      std::fill(label.begin(), label.end(), -1);
      int assigned = 0;
      label[static_cast<std::size_t>(s)] = assigned;
      order[static_cast<std::size_t>(assigned++)] = s;
      // <0: already smaller than best, 0: equal prefix, >0: larger (abort)
      int cmp = best.empty() ? -1 : 0;
      std::size_t w = 0;
      for (int i = 0; i < n && cmp <= 0; ++i) {
        const int d = order[static_cast<std::size_t>(i)];
        for (int nb : {nu(d), m.twin(d)}) {
          if (label[static_cast<std::size_t>(nb)] < 0) {
            label[static_cast<std::size_t>(nb)] = assigned;
            order[static_cast<std::size_t>(assigned++)] = nb;
          }
        }
        cur[w++] = label[static_cast<std::size_t>(nu(d))];
        cur[w++] = label[static_cast<std::size_t>(m.twin(d))];
        for (int k = 0; k < rank; ++k) cur[w++] = mk->of(d)[k];
        if (cmp == 0) {
          for (std::size_t j = w - words_per; j < w && cmp == 0; ++j) {
            if (cur[j] != best[j]) cmp = cur[j] < best[j] ? -1 : 1;
          }
        }
      }
      if (cmp < 0 && assigned == n) best = cur;
    }
  }
  return CanonicalCode{std::move(best)};
}

std::vector<OneVertexTriangulation> FlipPath::states() const {
  std::vector<OneVertexTriangulation> out{start};
  for (EdgeId e : moves) out.push_back(flip(out.back(), e));
  return out;
}

OneVertexTriangulation FlipPath::end() const {
  OneVertexTriangulation t = start;
  for (EdgeId e : moves) t = flip(t, e);
  return t;
}

}  // namespace hypsweep::tri
