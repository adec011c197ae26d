#include <string>
#include <vector>

#include "harnack/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return harnack::run_cli(args);
}
