#pragma once

#include <stdexcept>
#include <string>

namespace iaco {

/// Invalid problem, solution, parameter or command.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation not permitted in the session's current state.
class SessionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace iaco
