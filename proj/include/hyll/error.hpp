#ifndef HYLL_ERROR_HPP
#define HYLL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace hyll {

enum class ErrorKind {
  NotGround,
  Parse,
  Arity,
  UndeclaredPredicate,
  Model,
  RuleNotApplicable,
  AmbiguousPrincipal,
  UnificationFailed,
  OpenGoals,
  UnresolvedMetavariable,
  NotFound,
  NotDuplicated,
  RelocationUnsupported,
  UnboundedBoundedQuantifier,
  Certificate,
  Oracle,
  Session,
  Io,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Syntax error with a 1-based position and the tokens that would have been
// accepted there.
class ParseError : public Error {
 public:
  ParseError(int line, int column, std::vector<std::string> expected, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
  std::string detail_;
};

}  // namespace hyll

#endif
