#pragma once

#include <string>
#include <vector>

namespace plaque::cli {

struct RunResult {
  int exit_code;    // 0 success, 1 engine error, 2 usage error
  std::string out;  // primary document (JSON, or CSV for curve dumps)
  std::string err;  // usage/diagnostic text
};

// Full CLI entry point, separated from main() so tests and the acceptance
// suite can byte-compare documents in process.
RunResult dispatch(const std::vector<std::string>& args);

}  // namespace plaque::cli
