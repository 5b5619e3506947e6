#pragma once

#include <stdexcept>
#include <string>

namespace qfriction {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-range argument.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Permittivity evaluated exactly at the static pole of a Drude model.
class StaticPole : public DomainError {
public:
    using DomainError::DomainError;
};

/// Reflection coefficient evaluated on the surface-mode pole (epsilon = -1).
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Trajectory reached or crossed the surface.
class SurfaceContact : public DomainError {
public:
    using DomainError::DomainError;
};

class FitError : public Error {
public:
    using Error::Error;
};

/// Invalid user configuration. `field()` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace qfriction
