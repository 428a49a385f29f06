#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drgen {

/// Base of every error raised by the library. `kind()` is a short stable tag
/// used by the CLI when printing structured error messages.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message) : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& message)
        : Error("parse", path + (line ? ":" + std::to_string(line) : std::string()) + ": " + message), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid configuration value. `field` is the dotted path of the offending key.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : Error("config", "field '" + field + "': " + message), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& message) : Error("structure", message) {}
};

/// Raised when a per-frame randomization constraint cannot be satisfied.
class ScenarioError : public Error {
public:
    ScenarioError(const std::string& constraint, const std::string& message)
        : Error("scenario", constraint + ": " + message), constraint_(constraint) {}
    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string constraint_;
};

class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& message) : Error("argument", message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io", message) {}
};

}  // namespace drgen
