#include <string>
#include <vector>

#include "bigibbs/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bigibbs::run_command(args);
}
