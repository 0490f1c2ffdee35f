#pragma once

#include <stdexcept>
#include <string>

namespace ccnlab {

/// Raised on contract violations (bad dimensions, invalid configs, empty arms,
/// diverged training). Everything the library throws derives from this.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

inline void require_dims(long expected, long actual, const char* what) {
  if (expected != actual) {
    throw Error(std::string(what) + ": dimension mismatch, expected " + std::to_string(expected) +
                ", got " + std::to_string(actual));
  }
}

}  // namespace ccnlab
