#pragma once

#include <stdexcept>
#include <string>

namespace hetnet {

// Argument outside the mathematical domain of a model function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Configuration text that could not be parsed at all.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what), byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

// A configuration field is missing or violates its invariant.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// More users than the network can host on exclusive subcarriers.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad command-line usage, e.g. an unknown preset name.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bracketing failed to find a sign change of the hover stationarity condition.
class NoRootError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hetnet
