#pragma once

#include <stdexcept>
#include <string>

namespace riskcap {

// Precondition violated by the caller (bad dimensions, out-of-range levels, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Training or evaluation produced a non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Total sample weight does not reach past the 1 - alpha tail.
class InsufficientTail : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace riskcap
