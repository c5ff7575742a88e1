#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swarmdoppler {

/// Parameter or grid invariant violated. `field()` names the offending key.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Configuration text could not be parsed or did not match the schema.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the domain an operation supports (envelope, parity, lag range...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative numerical procedure did not reach its tolerance.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Allocation failed part-way through a long-running job.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::size_t completed)
        : std::runtime_error(what), completed_(completed) {}

    std::size_t completed() const noexcept { return completed_; }

private:
    std::size_t completed_;
};

}  // namespace swarmdoppler
