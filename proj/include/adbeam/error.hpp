#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adbeam {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A function was evaluated outside the set where it is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller broke a documented precondition (sizes, ranges).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Requested time step exceeds the explicit stability bound.
class StabilityError : public Error {
public:
    StabilityError(double dt, double limit);
    double dt() const noexcept { return dt_; }
    double limit() const noexcept { return limit_; }

private:
    double dt_;
    double limit_;
};

/// The state became non-finite during time stepping.
class NumericalFailure : public Error {
public:
    explicit NumericalFailure(double time);
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Invalid run configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::size_t line = 0);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace adbeam
