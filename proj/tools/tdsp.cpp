#include <iostream>
#include <string>
#include <vector>

#include "tdsp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tdsp::run_cli(args, std::cout, std::cerr);
}
