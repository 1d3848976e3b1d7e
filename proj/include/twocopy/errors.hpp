#pragma once

#include <stdexcept>
#include <string>

namespace twocopy {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

enum class StateErrorKind { WrongShape, NotHermitian, TraceNotOne, NotPositive, NotNormalized };

const char* to_string(StateErrorKind kind);

class InvalidStateError : public Error {
public:
    InvalidStateError(StateErrorKind kind, const std::string& what)
        : Error(what), kind_(kind) {}
    StateErrorKind kind() const { return kind_; }

private:
    StateErrorKind kind_;
};

/// Post-selection outcome with (numerically) vanishing probability.
class NoSignalError : public Error {
public:
    NoSignalError(int outcome, double probability)
        : Error("no signal for outcome " + std::to_string(outcome) +
                " (post-selection probability " + std::to_string(probability) + ")"),
          outcome_(outcome),
          probability_(probability) {}
    int outcome() const { return outcome_; }
    double probability() const { return probability_; }

private:
    int outcome_;
    double probability_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace twocopy
