#pragma once

#include <stdexcept>
#include <string>

namespace iidseval {

/// Base class for every error raised by the library. Callers that only need
/// to report a failure can catch this and print what().
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data (CSV, taxonomy, JSON) that cannot be interpreted.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A configuration value outside its allowed range.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace iidseval
