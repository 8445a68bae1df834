#include <vector>

#include "improper/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return improper::run_cli(args);
}
