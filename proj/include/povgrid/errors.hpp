// povgrid/errors.hpp - exception hierarchy shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace povgrid {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid world/experiment configuration (bad dimensions, priors, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Argument outside the operation's domain (bad POV offset, empty action set, ...).
struct DomainError : Error {
    using Error::Error;
};

// An inadmissible move was requested; policies must never trigger this.
struct MovementError : Error {
    using Error::Error;
};

// Observation impossible under the belief's support: the belief and the
// world were built from mismatched configs.
struct InconsistencyError : Error {
    using Error::Error;
};

// Tensor shape mismatch in the neural stack.
struct ShapeError : Error {
    using Error::Error;
};

// Operation called out of order (backward before forward).
struct StateError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace povgrid
