// Error taxonomy shared across the library.
//
// ValidationError: malformed input (bad matrix file, inconsistent arguments).
// GuardError: a size guard on an exact/enumerative routine was violated.
// The CLI maps these to exit codes 2 and 3 respectively.
#pragma once

#include <stdexcept>
#include <string>

namespace permsmc {

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

// Throws GuardError unless n <= limit; `what` names the routine being guarded.
inline void check_size_guard(int n, int limit, const char* what) {
  if (n > limit) {
    throw GuardError(std::string(what) + ": n = " + std::to_string(n) +
                     " exceeds the supported limit " + std::to_string(limit));
  }
}

}  // namespace permsmc
