#pragma once

#include <stdexcept>
#include <string>

namespace izone {

// Domain error raised by any module; the CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace izone
