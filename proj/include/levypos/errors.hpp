#pragma once

#include <stdexcept>
#include <string>

namespace levypos {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (h > 1, t <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Quadrature, bisection or sampling failure. Carries the interval being worked on.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double lo, double hi)
        : Error(what + " on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
          lo_(lo), hi_(hi) {}
    explicit NumericError(const std::string& what) : Error(what) {}

    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed input document or command line.
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace levypos
