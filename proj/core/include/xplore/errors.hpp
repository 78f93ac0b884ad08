#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>

namespace xplore {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A relation id (or relation path step) that the catalog cannot resolve.
/// line and column are 0 when the failure has no source position.
class ResolutionError : public Error {
 public:
  explicit ResolutionError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Operator preconditions violated or a function failed on an item.
class EvalError : public Error {
 public:
  explicit EvalError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Unknown state reference, unbound name, namespace clash inside a session.
class SessionError : public Error {
 public:
  using Error::Error;
};

/// Lexical or syntax error in DSL or grammar text. Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column,
             std::set<std::string> expected = {})
      : Error(format(message, line, column)),
        message_(message),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::set<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
  std::set<std::string> expected_;
};

/// Malformed dataset input; line is the offending input line (1-based).
class LoadError : public Error {
 public:
  LoadError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Malformed grammar or tactical profile, or an analysis bound exceeded.
class GrammarError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public GrammarError {
 public:
  using GrammarError::GrammarError;
};

}  // namespace xplore
