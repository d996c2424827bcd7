#include <iostream>
#include <string>
#include <vector>

#include "gsynth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gsynth::cli::run(args, std::cout, std::cerr);
}
