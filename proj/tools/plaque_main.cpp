#include <cstdio>
#include <string>
#include <vector>

#include "plaque/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  plaque::cli::RunResult result = plaque::cli::dispatch(args);
  if (!result.out.empty()) std::fwrite(result.out.data(), 1, result.out.size(), stdout);
  if (!result.err.empty()) std::fwrite(result.err.data(), 1, result.err.size(), stderr);
  return result.exit_code;
}
