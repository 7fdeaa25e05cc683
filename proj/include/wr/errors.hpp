#pragma once

#include <stdexcept>
#include <string>

namespace wr {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Point too close to a non-periodic chart boundary for the requested stencil.
struct MarginError : Error {
    using Error::Error;
};

// Metric (or other matrix) is singular or too ill-conditioned to invert.
struct DegeneracyError : Error {
    using Error::Error;
};

// A quantity that must be constant (or must vanish) exceeded its tolerance.
struct ViolationError : Error {
    double spread;
    ViolationError(const std::string& msg, double s) : Error(msg), spread(s) {}
};

// Requested configuration is outside what the library implements.
struct CapabilityError : Error {
    using Error::Error;
};

// Input violates a documented domain restriction (e.g. u <= 0 inside).
struct DomainError : Error {
    using Error::Error;
};

// An operation's stated precondition does not hold.
struct PreconditionError : Error {
    using Error::Error;
};

// ODE integration could not proceed (step-size underflow, blow-up).
struct IntegrationError : Error {
    double location;
    IntegrationError(const std::string& msg, double t) : Error(msg), location(t) {}
};

// A construction produced an object violating its own invariants.
struct ConstructionError : Error {
    using Error::Error;
};

} // namespace wr
