#include <iostream>
#include <string>
#include <vector>

#include "anticip/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return anticip::run_cli(args, std::cout, std::cerr);
}
