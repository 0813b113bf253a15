#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ctaparse {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates an invariant of its type (ill-sorted transition,
/// non-monotone word tuple, undeclared state, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based, 0 when unknown.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The parser's preconditions do not hold for the automaton.
class ApplicabilityError : public Error {
 public:
  enum class Kind { not_final_state_normalized, monadic_cycle };

  ApplicabilityError(Kind kind, std::vector<std::string> states, const std::string& what)
      : Error(what), kind_(kind), states_(std::move(states)) {}
  Kind kind() const noexcept { return kind_; }
  const std::vector<std::string>& states() const noexcept { return states_; }

 private:
  Kind kind_;
  std::vector<std::string> states_;
};

/// The result set of a parse would exceed the configured cap.
class ResultTooLarge : public Error {
 public:
  ResultTooLarge(std::size_t cap, const std::string& what) : Error(what), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

/// An internal invariant broke; signals a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctaparse
