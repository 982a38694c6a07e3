#pragma once

#include <stdexcept>
#include <string>

namespace nwa {

/// Array or series dimensions disagree with the grid they are used on.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter violates its documented range.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nwa
