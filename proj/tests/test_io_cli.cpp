#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hypsweep/cli.hpp"
#include "hypsweep/error.hpp"
#include "hypsweep/io.hpp"

using namespace hypsweep;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("hypsweep_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidInput;
}

}  // namespace

TEST_SUITE("io_cli") {
  TEST_CASE("triangulation and flip path round trips") {
    std::mt19937_64 rng(5);
    auto t = tri::standard_genus_g(3);
    for (int i = 0; i < 30; ++i) t = tri::flip(t, {static_cast<int>(rng() % 15)});
    const auto back = io::triangulation_from_json(io::to_json(t));
    CHECK(back.map() == t.map());
    CHECK(tri::canonical_code(back, tri::Mode::labeled) == tri::canonical_code(t, tri::Mode::labeled));
    CHECK(io::to_json(back) == io::to_json(t));

    const auto bare = io::triangulation_from_json(io::to_json(t.without_marking()));
    CHECK(bare.map() == t.map());

    const tri::FlipPath p{t, {{1}, {4}, {2}}};
    const auto pb = io::flip_path_from_json(io::to_json(p));
    CHECK(pb.moves == p.moves);
    CHECK(io::to_json(pb) == io::to_json(p));

    json j = io::to_json(t);
    j["extra"] = 1;
    CHECK(code_of([&] { io::triangulation_from_json(j); }) == Errc::InvalidInput);
    j = io::to_json(t);
    j["twin"][0] = 0;
    CHECK(code_of([&] { io::triangulation_from_json(j); }) == Errc::InvalidInput);
    json pj = io::to_json(p);
    pj["moves"].push_back(99);
    CHECK(code_of([&] { io::flip_path_from_json(pj); }) == Errc::BadEdgeId);
  }

  TEST_CASE("realization round trip") {
    std::mt19937_64 rng(6);
    const auto r = fixtures::perturbed_octagon(rng);
    const auto back = io::realization_from_json(io::to_json(r));
    CHECK(std::abs(surf::total_area(back.realize()) - surf::total_area(r.realize())) <= 1e-12);
    json j = io::to_json(r);
    j["holonomy"].erase("0");
    CHECK(code_of([&] { io::realization_from_json(j); }) == Errc::InvalidInput);
    j = io::to_json(r);
    j["basepoint"][0] = 5.0;
    CHECK(code_of([&] { io::realization_from_json(j); }) == Errc::InvalidInput);
  }

  TEST_CASE("solver config is strict") {
    iso::IsoperimetricProblem p;
    iso::OptimizerConfig cfg;
    io::apply_config_json(json{{"r", 2.0}, {"seed", 9}, {"nodes", 32}}, p, cfg);
    CHECK(p.ball.r == 2.0);
    CHECK(cfg.seed == 9);
    CHECK(cfg.n_nodes == 32);
    CHECK(code_of([&] { io::apply_config_json(json{{"radius", 2.0}}, p, cfg); }) == Errc::InvalidInput);
    CHECK(code_of([&] { io::apply_config_json(json{{"r", "two"}}, p, cfg); }) == Errc::InvalidInput);
  }

  TEST_CASE("exit codes") {
    auto ok = run({"bounds", "genus-from-radius", "--r", "2.0"});
    CHECK(ok.code == 0);
    const json j = json::parse(ok.out);
    CHECK(j["bound"]["min_genus"] == 2);
    CHECK(j.contains("formula"));

    auto dom = run({"bounds", "genus-from-radius", "--r", "-1"});
    CHECK(dom.code == 1);
    const json e = json::parse(dom.err);
    CHECK(e["error"] == "NegativeRadius");

    CHECK(run({"bounds", "genus-from-radius"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"tri", "new", "--genus", "x"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"bounds", "volume", "--flips", "10"}).code == 0);
    CHECK(run({"bounds", "radius-from-genus", "--g", "0"}).code == 1);
  }

  TEST_CASE("tri commands and artifacts") {
    TempDir dir;
    const auto t = dir / "t.json";
    const auto f = dir / "f.json";
    REQUIRE(run({"tri", "new", "--genus", "2", "-o", t}).code == 0);
    CHECK(run({"tri", "verify", t}).code == 0);
    REQUIRE(run({"tri", "flip", t, "--edge", "3", "-o", f}).code == 0);
    CHECK(run({"tri", "verify", f}).code == 0);

    auto d = run({"tri", "distance", t, t});
    REQUIRE(d.code == 0);
    CHECK(json::parse(d.out)["distance"] == 0);
    d = run({"tri", "distance", t, f});
    CHECK(json::parse(d.out)["distance"] == 1);
    d = run({"tri", "distance", t, f, "--mode", "iso"});
    CHECK(json::parse(d.out)["distance"].get<int>() <= 1);
    CHECK(run({"tri", "flip", t, "--edge", "20"}).code == 1);
    CHECK(run({"tri", "distance", t, f, "--mode", "nope"}).code == 2);

    json bad = io::read_json_file(t);
    bad["twin"][0] = 0;
    io::write_text_file(dir / "bad.json", io::dump(bad));
    const auto v = run({"tri", "verify", dir / "bad.json"});
    CHECK(v.code == 1);
    CHECK(json::parse(v.out)["ok"] == false);

    CHECK(run({"tri", "verify", dir / "missing.json"}).code == 1);

    // thread count does not change results
    const auto b1 = run({"--threads", "1", "tri", "ball", t, "--depth", "2"});
    const auto b4 = run({"--threads", "4", "tri", "ball", t, "--depth", "2"});
    REQUIRE(b1.code == 0);
    CHECK(b1.out == b4.out);
    CHECK(json::parse(b1.out)["layer_sizes"][0] == 1);
  }

  TEST_CASE("surface commands") {
    TempDir dir;
    const auto oct = fixtures::octagon_genus2();
    io::write_text_file(dir / "oct.json", io::dump(io::to_json(oct)));
    io::write_text_file(dir / "path.json", io::dump(io::to_json(tri::FlipPath{oct.tri, {{0}, {3}, {7}}})));
    const auto r = run({"surface", "realize", dir / "oct.json"});
    REQUIRE(r.code == 0);
    const json rj = json::parse(r.out);
    CHECK(rj["gauss_bonnet_residual"].get<double>() <= 1e-8);
    CHECK(std::abs(rj["total_area"].get<double>() - 4.0 * M_PI) <= 1e-8);

    const auto p = run({"surface", "profile", dir / "oct.json", dir / "path.json", "--samples", "20", "-o",
                        dir / "prof.csv"});
    REQUIRE(p.code == 0);
    const std::string csv = slurp(dir / "prof.csv");
    CHECK(csv.rfind("t,area,min_theta,triangles\n", 0) == 0);
    // a slide and a flip family per move, sharing their endpoints
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 6 * 20 - 5);
    CHECK(json::parse(p.out)["sup_area"].get<double>() <= 6.0 * M_PI + 1e-8);

    // a path that does not start at the realized triangulation
    io::write_text_file(dir / "other.json",
                        io::dump(io::to_json(tri::FlipPath{tri::flip(oct.tri, {1}), {{0}}})));
    CHECK(run({"surface", "profile", dir / "oct.json", dir / "other.json"}).code == 1);
  }

  TEST_CASE("iso commands: determinism and artifacts") {
    TempDir dir;
    const std::vector<std::string> args{"iso", "solve", "--r", "0.5", "--nodes", "16", "--seed", "4"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const json j = json::parse(a.out);
    CHECK(j["converged"] == true);
    CHECK(j["within_one_percent"] == true);

    io::write_text_file(dir / "cfg.json", io::dump({{"r", 0.5}, {"nodes", 16}, {"seed", 4}}));
    const auto c = run({"iso", "solve", "--config", dir / "cfg.json", "-o", dir / "p.csv", "--trace", dir / "t.csv"});
    REQUIRE(c.code == 0);
    CHECK(c.out == a.out);
    CHECK(slurp(dir / "p.csv").rfind("rho,z\n", 0) == 0);
    CHECK_FALSE(slurp(dir / "t.csv").empty());

    io::write_text_file(dir / "bad.json", io::dump({{"r", 0.5}, {"typo", 1}}));
    CHECK(run({"iso", "solve", "--config", dir / "bad.json"}).code == 1);
    CHECK(run({"iso", "solve", "--fraction", "1.5"}).code == 1);

    const auto sp = run({"iso", "scan-planes", "--r", "1", "-n", "5"});
    REQUIRE(sp.code == 0);
    CHECK(json::parse(sp.out)["rows"].size() == 5);
    REQUIRE(run({"iso", "scan-planes", "--r", "1", "-n", "5", "-o", dir / "planes.csv"}).code == 0);
    CHECK(slurp(dir / "planes.csv").rfind("d,area,volume\n", 0) == 0);

    const auto sc = run({"iso", "scan-caps", "--r", "1", "-n", "4"});
    REQUIRE(sc.code == 0);
    const json cj = json::parse(sc.out);
    CHECK(cj["min_half_volume"]["family"] == "umbilic");
    CHECK(cj["min_half_volume"]["kappa"] == 0.0);
    CHECK(run({"--threads", "1", "iso", "scan-caps", "--r", "1", "-n", "4"}).out == sc.out);
  }
}
