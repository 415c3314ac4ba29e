#pragma once

#include <stdexcept>
#include <string>

namespace cylev {

/// Raised when an adaptive numerical routine cannot reach its tolerance
/// within its budget. Never swallowed: callers either propagate it or
/// attach context and rethrow.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested criterion has no implementation for the given driver family.
class UnsupportedCriterion : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cylev
