#pragma once

#include <stdexcept>
#include <string>

namespace rmtlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid distribution or numeric parameter.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Incompatible matrix/vector dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain (e.g. Im z <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller violated a documented precondition (e.g. unsorted eigenvalues).
class ContractError : public Error {
public:
    using Error::Error;
};

class DecompositionError : public Error {
public:
    using Error::Error;
};

/// Truncated variable has no variance left.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// An identity was requested where an eigenvalue (or singular value) of the
/// minor sits too close to the target for the formula to be trustworthy.
class NearCollisionError : public Error {
public:
    NearCollisionError(const std::string& what, double gap)
        : Error(what), gap_(gap) {}
    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

/// Configuration could not be parsed or validated. `line` is 0 when the
/// failure is not tied to a source position; `field` is empty for parse errors.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string field = {}, int line = 0)
        : Error(what), field_(std::move(field)), line_(line) {}
    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

class ExperimentError : public Error {
public:
    using Error::Error;
};

}  // namespace rmtlab
