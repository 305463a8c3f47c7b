#include <iostream>
#include <string>
#include <vector>

#include "mojikit/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mojikit::run_cli(args, std::cout, std::cerr);
}
