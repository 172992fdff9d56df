#include "hypsweep/io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "hypsweep/error.hpp"

namespace hypsweep::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidInput, what); }

void expect_keys(const json& j, const char* what, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) bad(std::string(what) + " must be a JSON object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) bad(std::string(what) + " is missing \"" + k + "\"");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) bad(std::string(what) + " has unknown key \"" + k + "\"");
  }
}

std::int64_t get_int(const json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

double get_real(const json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) bad("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad(p.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) bad("cannot write " + p.string());
  out << text;
  if (!out) bad("write failed for " + p.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ------------------------------------------------------------ triangulation

json to_json(const tri::OneVertexTriangulation& t) {
  json j{{"darts", t.dart_count()}, {"twin", t.map().twins()}};
  if (const auto& m = t.marking()) {
    json rows = json::array();
    for (int d = 0; d < t.dart_count(); ++d) rows.push_back(std::vector<std::int64_t>(m->of(d), m->of(d) + m->rank));
    j["marking"] = {{"rank", m->rank}, {"classes", rows}};
  }
  return j;
}

tri::CombMap comb_map_from_json(const json& j) {
  expect_keys(j, "triangulation", {"darts", "twin"}, {"marking"});
  const std::int64_t n = get_int(j["darts"], "darts");
  if (n <= 0 || n % 3 != 0 || n > (1 << 24)) bad("darts must be a positive multiple of 3");
  const json& tw = j["twin"];
  if (!tw.is_array() || static_cast<std::int64_t>(tw.size()) != n) bad("twin must be an array of length darts");
  std::vector<int> twin;
  for (const auto& v : tw) {
    const std::int64_t d = get_int(v, "twin entry");
    if (d < 0 || d >= n) bad("twin entry out of range");
    twin.push_back(static_cast<int>(d));
  }
  return tri::CombMap(std::move(twin));
}

tri::OneVertexTriangulation triangulation_from_json(const json& j) {
  tri::CombMap map = comb_map_from_json(j);
  if (!j.contains("marking")) return tri::OneVertexTriangulation::from_map(std::move(map));
  const json& mj = j["marking"];
  expect_keys(mj, "marking", {"rank", "classes"});
  tri::Marking m;
  m.rank = static_cast<int>(get_int(mj["rank"], "marking rank"));
  if (m.rank < 0 || m.rank > 4096) bad("marking rank out of range");
  const json& rows = mj["classes"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != map.dart_count()) bad("marking needs one row per dart");
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != m.rank) bad("marking rows must have rank entries");
    for (const auto& v : row) m.classes.push_back(get_int(v, "marking entry"));
  }
  return tri::OneVertexTriangulation::from_map(std::move(map), std::move(m));
}

json to_json(const tri::FlipPath& p) {
  json moves = json::array();
  for (auto e : p.moves) moves.push_back(e.id);
  return {{"start", to_json(p.start)}, {"moves", moves}};
}

tri::FlipPath flip_path_from_json(const json& j) {
  expect_keys(j, "flip path", {"start", "moves"});
  tri::FlipPath p{triangulation_from_json(j["start"]), {}};
  if (!j["moves"].is_array()) bad("moves must be an array");
  for (const auto& v : j["moves"]) {
    const std::int64_t e = get_int(v, "move");
    if (e < 0 || e >= p.start.edge_count()) throw Error(Errc::BadEdgeId, "move " + std::to_string(e) + " out of range");
    p.moves.push_back({static_cast<int>(e)});
  }
  p.states();  // every move must be legal
  return p;
}

// -------------------------------------------------------------- realization

json to_json(const fixtures::Realization& r) {
  json hol = json::object();
  for (std::size_t e = 0; e < r.hol.size(); ++e) {
    const auto& m = r.hol[e].matrix();
    json rows = json::array();
    for (int i = 0; i < 4; ++i) rows.push_back({m[4 * i], m[4 * i + 1], m[4 * i + 2], m[4 * i + 3]});
    hol[std::to_string(e)] = rows;
  }
  const auto& b = r.base.vec();
  return {{"triangulation", to_json(r.tri)}, {"basepoint", {b[0], b[1], b[2], b[3]}}, {"holonomy", hol}};
}

fixtures::Realization realization_from_json(const json& j, const std::filesystem::path& base_dir) {
  expect_keys(j, "realization", {"triangulation", "basepoint", "holonomy"});
  const json& tj = j["triangulation"];
  tri::OneVertexTriangulation t = tj.is_string()
                                      ? triangulation_from_json(read_json_file(base_dir / tj.get<std::string>()))
                                      : triangulation_from_json(tj);
  const json& bj = j["basepoint"];
  if (!bj.is_array() || bj.size() != 4) bad("basepoint must have 4 coordinates");
  hyp::MVec4 b;
  for (std::size_t i = 0; i < 4; ++i) b[i] = get_real(bj[i], "basepoint coordinate");
  if (std::abs(hyp::minkowski(b, b) + 1.0) > 1e-8 || b[0] <= 0.0) bad("basepoint is not on the hyperboloid");
  const json& hj = j["holonomy"];
  if (!hj.is_object()) bad("holonomy must be an object keyed by edge id");
  if (static_cast<int>(hj.size()) != t.edge_count()) bad("holonomy needs exactly one matrix per edge");
  surf::EdgeHolonomy hol(static_cast<std::size_t>(t.edge_count()));
  for (int e = 0; e < t.edge_count(); ++e) {
    const std::string key = std::to_string(e);
    if (!hj.contains(key)) bad("holonomy is missing edge " + key);
    const json& mj = hj[key];
    if (!mj.is_array() || mj.size() != 4) bad("holonomy matrix must be 4x4");
    hyp::Isometry::Matrix m{};
    for (std::size_t r = 0; r < 4; ++r) {
      if (!mj[r].is_array() || mj[r].size() != 4) bad("holonomy matrix must be 4x4");
      for (std::size_t c = 0; c < 4; ++c) m[4 * r + c] = get_real(mj[r][c], "holonomy entry");
    }
    hol[static_cast<std::size_t>(e)] = hyp::Isometry::from_matrix(m, 1e-8);
  }
  return {std::move(t), hyp::HPoint::from_vector(b), std::move(hol)};
}

// ----------------------------------------------------------------- profiles

json to_json(const surf::AreaProfile& p) {
  json samples = json::array();
  for (const auto& s : p.samples) {
    samples.push_back({{"t", s.t},
                       {"area", s.area},
                       {"min_theta", s.min_theta ? json(*s.min_theta) : json(nullptr)},
                       {"triangles", s.triangles}});
  }
  const auto mt = p.min_theta();
  return {{"sup_area", p.sup_area()},
          {"min_theta", mt ? json(*mt) : json(nullptr)},
          {"max_triangles", p.max_triangles()},
          {"samples", samples}};
}

std::string to_csv(const surf::AreaProfile& p) {
  std::ostringstream out;
  out << "t,area,min_theta,triangles\n";
  for (const auto& s : p.samples) {
    out << fmt(s.t) << ',' << fmt(s.area) << ',' << (s.min_theta ? fmt(*s.min_theta) : "") << ',' << s.triangles
        << '\n';
  }
  return out.str();
}

void apply_config_json(const json& j, iso::IsoperimetricProblem& p, iso::OptimizerConfig& cfg) {
  expect_keys(j, "solver config", {},
              {"r", "fraction", "nodes", "seed", "max_iters", "max_outer", "initial_step", "penalty",
               "penalty_growth", "volume_tolerance", "grad_tolerance", "noise", "initial_z"});
  if (j.contains("r")) p.ball.r = get_real(j["r"], "r");
  if (j.contains("fraction")) p.volume_fraction = get_real(j["fraction"], "fraction");
  if (j.contains("nodes")) cfg.n_nodes = static_cast<int>(get_int(j["nodes"], "nodes"));
  if (j.contains("seed")) {
    const std::int64_t s = get_int(j["seed"], "seed");
    if (s < 0) bad("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("max_iters")) cfg.max_iters = static_cast<int>(get_int(j["max_iters"], "max_iters"));
  if (j.contains("max_outer")) cfg.max_outer = static_cast<int>(get_int(j["max_outer"], "max_outer"));
  if (j.contains("initial_step")) cfg.initial_step = get_real(j["initial_step"], "initial_step");
  if (j.contains("penalty")) cfg.penalty = get_real(j["penalty"], "penalty");
  if (j.contains("penalty_growth")) cfg.penalty_growth = get_real(j["penalty_growth"], "penalty_growth");
  if (j.contains("volume_tolerance")) cfg.volume_tolerance = get_real(j["volume_tolerance"], "volume_tolerance");
  if (j.contains("grad_tolerance")) cfg.grad_tolerance = get_real(j["grad_tolerance"], "grad_tolerance");
  if (j.contains("noise")) cfg.noise = get_real(j["noise"], "noise");
  if (j.contains("initial_z")) {
    if (!j["initial_z"].is_array()) bad("initial_z must be an array");
    std::vector<double> z;
    for (const auto& v : j["initial_z"]) z.push_back(get_real(v, "initial_z entry"));
    cfg.initial_z = std::move(z);
  }
}

std::string to_csv(const std::vector<iso::PlaneRow>& rows) {
  std::ostringstream out;
  out << "d,area,volume\n";
  for (const auto& r : rows) out << fmt(r.d) << ',' << fmt(r.area) << ',' << fmt(r.volume) << '\n';
  return out.str();
}

std::string to_csv(const std::vector<iso::CapRow>& rows) {
  std::ostringstream out;
  out << "family,kappa,offset,radius,area,volume,half_volume\n";
  for (const auto& r : rows) {
    out << r.family << ',' << fmt(r.kappa) << ',' << fmt(r.offset) << ',' << fmt(r.radius) << ',' << fmt(r.area)
        << ',' << fmt(r.volume) << ',' << (r.half_volume ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string profile_csv(const iso::ProfileCurve& c) {
  std::ostringstream out;
  out << "rho,z\n";
  for (const auto& n : c.nodes) out << fmt(n.rho) << ',' << fmt(n.z) << '\n';
  return out.str();
}

std::string trace_csv(const std::vector<iso::IterationRecord>& trace) {
  std::ostringstream out;
  out << "iter,area,volume_error,grad_norm,lambda,mu\n";
  for (const auto& r : trace) {
    out << r.iter << ',' << fmt(r.area) << ',' << fmt(r.volume_error) << ',' << fmt(r.grad_norm) << ','
        << fmt(r.lambda) << ',' << fmt(r.mu) << '\n';
  }
  return out.str();
}

}  // namespace hypsweep::io
