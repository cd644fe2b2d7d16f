#pragma once

#include <stdexcept>
#include <string>

namespace ptwell {

/// Input violates an operation's preconditions.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A complex effective charge or energy where a real one was required.
class BrokenSymmetry : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative or dense numerical routine did not converge.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ptwell
