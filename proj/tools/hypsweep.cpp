#include <iostream>

#include "hypsweep/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hypsweep::cli::run(args, std::cout, std::cerr);
}
