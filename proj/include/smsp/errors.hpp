#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smsp {

/// Control points whose x-coordinates are not nondecreasing.
class InvalidCurve : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fewer than three points, or all points collinear.
class DegenerateDomain : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The rejection loop hit its cap without a separating cut.
class CutFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  explicit IoError(const std::string& what)
      : std::runtime_error(what), offset_(0) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace smsp
