#include <iostream>
#include <string>
#include <vector>

#include "fpencil/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fpencil::cli::dispatch(args, std::cout, std::cerr);
}
