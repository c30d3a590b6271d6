#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace infoact {

/// Process exit codes used by the command-line front end.
enum class ExitCode : int {
    ok = 0,
    usage = 2,
    parse = 3,
    validation = 4,
    budget_exceeded = 5,
    assertion_failed = 6,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return ExitCode::usage; }
};

/// Positioned syntax error in a problem file.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }
    ExitCode exit_code() const noexcept override { return ExitCode::parse; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

class ValidationError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::validation; }
};

/// The belief-tree node cap was hit; the problem is beyond exact enumeration.
class TreeBudgetExceeded : public Error {
public:
    explicit TreeBudgetExceeded(std::size_t cap)
        : Error("reachable belief tree exceeds node cap of " + std::to_string(cap)) {}
    ExitCode exit_code() const noexcept override { return ExitCode::budget_exceeded; }
};

class StateBlowup : public Error {
public:
    explicit StateBlowup(std::size_t cap)
        : Error("reachable state count exceeds cap of " + std::to_string(cap)) {}
    ExitCode exit_code() const noexcept override { return ExitCode::budget_exceeded; }
};

/// The observation has (numerically) zero probability under the belief and action.
class ZeroProbabilityObservation : public Error {
public:
    using Error::Error;
};

/// The action's observation function emits the same symbol in every state.
class NotObservationBearing : public Error {
public:
    using Error::Error;
};

class AssertionFailure : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::assertion_failed; }
};

} // namespace infoact
