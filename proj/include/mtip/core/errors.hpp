#pragma once

#include <stdexcept>
#include <string>

namespace mtip {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented constraint.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The delay cannot be represented as a whole number of integrator steps.
class InvalidDelay : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// The state left the finite range (|h| > 1e6 or NaN/inf).
class NonFiniteState : public Error {
public:
    NonFiniteState(double t, double h)
        : Error("NonFiniteState: state h=" + std::to_string(h) + " at t=" + std::to_string(t)),
          time_(t), value_(h) {}

    double time() const noexcept { return time_; }
    double value() const noexcept { return value_; }

private:
    double time_;
    double value_;
};

class SeriesTooShort : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class IncommensurateSampling : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InsufficientData : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

}  // namespace mtip
