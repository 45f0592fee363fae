#include <iostream>

#include "stressmat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stressmat::cli::run(args, std::cout, std::cerr);
}
