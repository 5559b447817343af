#pragma once

#include <stdexcept>
#include <string>

namespace plaque {

// Engine errors that surface to callers (and as exit code 1 in the CLI).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

}  // namespace plaque
