#pragma once
// Library-wide error type. Every failure carries a stable machine-readable
// kind string next to the human message so callers can dispatch on it.

#include <stdexcept>
#include <string>
#include <utility>

namespace streett {

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace streett
