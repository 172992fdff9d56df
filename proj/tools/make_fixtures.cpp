// Writes the JSON fixtures under data/: standard triangulations, the genus-2
// octagon realization and a short flip path from it.

#include <filesystem>
#include <iostream>

#include "hypsweep/fixtures.hpp"
#include "hypsweep/io.hpp"

using namespace hypsweep;

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);
  try {
    for (int g = 1; g <= 3; ++g) {
      io::write_text_file(dir / ("genus" + std::to_string(g) + ".json"), io::dump(io::to_json(tri::standard_genus_g(g))));
    }
    const auto oct = fixtures::octagon_genus2();
    io::write_text_file(dir / "octagon_genus2.json", io::dump(io::to_json(oct)));
    const tri::FlipPath path{oct.tri, {{0}, {3}, {7}}};
    path.states();
    io::write_text_file(dir / "octagon_path3.json", io::dump(io::to_json(path)));
    io::write_text_file(dir / "torus_axis.json", io::dump(io::to_json(fixtures::torus_axis(0.7, 1.1))));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
