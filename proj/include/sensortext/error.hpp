#pragma once

#include <stdexcept>
#include <string>

namespace sensortext {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric argument is outside its valid range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Input violates an operation's precondition (e.g. too few points).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed serialized data (tokens, JSON documents, replies).
class FormatError : public Error {
public:
    using Error::Error;
};

/// A template references a placeholder that has no binding.
class TemplateError : public Error {
public:
    TemplateError(const std::string& placeholder, const std::string& what)
        : Error(what), placeholder_(placeholder) {}

    const std::string& placeholder() const noexcept { return placeholder_; }

private:
    std::string placeholder_;
};

/// Invalid configuration (dataset configs, template banks, judge settings).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Parse failure inside a file, carrying its location.
class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, const std::string& message)
        : Error(file + ":" + std::to_string(line) + ": " + message),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

}  // namespace sensortext
