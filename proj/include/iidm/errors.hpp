#pragma once

#include <stdexcept>
#include <string>

namespace iidm {

// Bad input: malformed documents, out-of-range parameters, algorithm and
// instance mismatches. `path` is a JSON pointer when one applies.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what, std::string path = "")
      : std::runtime_error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A broken internal invariant (degree preservation, capacity, LP
// feasibility re-check, ...).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

#define IIDM_CHECK(cond, msg)                                              \
  do {                                                                     \
    if (!(cond)) throw ::iidm::InternalError(std::string(msg) + " [" #cond \
                                             "]");                         \
  } while (0)

}  // namespace iidm
