#pragma once

#include <stdexcept>
#include <string>

namespace chronofit {

// Input data violates an operation's precondition (bad file, short series,
// domain violation). The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical procedure broke down or produced an inadmissible result
// (optimizer failure, degenerate recursion, non-stationary fit). Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chronofit
