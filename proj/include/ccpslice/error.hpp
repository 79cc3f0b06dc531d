#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ccpslice {

struct SourcePos {
  int line = 0;
  int column = 0;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed program, constraint or trace text.
class SyntaxError : public Error {
 public:
  SyntaxError(SourcePos pos, const std::string& message)
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Well-formed program that violates a static rule (arity, closure, guardedness, ...).
class StaticError : public Error {
 public:
  StaticError(SourcePos pos, const std::string& message)
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// A caller broke an operation's precondition (e.g. stepping a disabled process).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A marking criterion does not resolve against the final store.
class CriterionError : public Error {
 public:
  CriterionError(const std::string& message, std::vector<std::string> available)
      : Error(message), available_(std::move(available)) {}
  const std::vector<std::string>& available() const { return available_; }

 private:
  std::vector<std::string> available_;
};

/// A tcc time-unit did not reach quiescence within the step budget.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace ccpslice
