#include <iostream>
#include <string>
#include <vector>

#include "braillecam/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return braillecam::run_cli(args, std::cout, std::cerr);
}
