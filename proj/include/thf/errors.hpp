#pragma once

#include <stdexcept>
#include <string>

namespace thf {

// Malformed input: bad measure data, out-of-range parameters, schema violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A coefficient sequence does not cover the indices an operation needs.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace thf
