#pragma once

#include <stdexcept>
#include <string>

namespace pushbutton {

// A configuration or argument that violates a documented precondition.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Field evaluated at a source position (r = 0) or another undefined point.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A sample or call whose timestamp runs backwards.
class TimeOrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoPeakError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoPeriodError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pushbutton
