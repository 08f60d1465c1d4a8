#pragma once

#include <stdexcept>
#include <string>

namespace qns {

// Caller supplied something outside an operation's contract.
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A construction (sequence, domain) violated one of its defining constraints.
class ConstructionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Two routes that must agree did not; always a bug in this library.
class InternalError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

}  // namespace qns
