#include "hyll/error.hpp"

namespace hyll {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotGround: return "NotGround";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Arity: return "ArityMismatch";
    case ErrorKind::UndeclaredPredicate: return "UndeclaredPredicate";
    case ErrorKind::Model: return "ModelError";
    case ErrorKind::RuleNotApplicable: return "RuleNotApplicable";
    case ErrorKind::AmbiguousPrincipal: return "AmbiguousPrincipal";
    case ErrorKind::UnificationFailed: return "UnificationFailed";
    case ErrorKind::OpenGoals: return "OpenGoals";
    case ErrorKind::UnresolvedMetavariable: return "UnresolvedMetavariable";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::NotDuplicated: return "NotDuplicated";
    case ErrorKind::RelocationUnsupported: return "RelocationUnsupported";
    case ErrorKind::UnboundedBoundedQuantifier: return "UnboundedBoundedQuantifier";
    case ErrorKind::Certificate: return "CertificateError";
    case ErrorKind::Oracle: return "OracleError";
    case ErrorKind::Session: return "SessionError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

namespace {

std::string render(int line, int column, const std::vector<std::string>& expected, const std::string& msg) {
  std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + msg;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

}  // namespace

ParseError::ParseError(int line, int column, std::vector<std::string> expected, const std::string& msg)
    : Error(ErrorKind::Parse, render(line, column, expected, msg)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      detail_(msg) {}

}  // namespace hyll
