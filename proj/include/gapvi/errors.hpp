#pragma once

#include <stdexcept>
#include <string>

namespace gapvi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative scheme (Dykstra projection, backtracking) ran out of budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// A point handed to a gap evaluation lies outside the feasible set.
class InfeasiblePoint : public Error {
 public:
  using Error::Error;
};

class BadParameters : public Error {
 public:
  using Error::Error;
};

class DegenerateRegion : public Error {
 public:
  using Error::Error;
};

class NoSamplesInLevelSet : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class PathEnumerationOverflow : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace gapvi
