#pragma once

#include <stdexcept>
#include <string>

namespace quiver {

enum class ErrorCode {
  lex_error,
  parse_error,
  duplicate_type,
  unknown_supertype,
  supertype_cycle,
  unknown_type,
  unknown_node,
  type_error,
  unbound_identifier,
  unresolved_alias,
  duplicate_truncation,
  missing_parameter,
  malformed_header,
  dangling_edge,
  bad_kind,
  io_error,
  internal,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::lex_error: return "LexError";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::duplicate_type: return "DuplicateType";
    case ErrorCode::unknown_supertype: return "UnknownSupertype";
    case ErrorCode::supertype_cycle: return "SupertypeCycle";
    case ErrorCode::unknown_type: return "UnknownType";
    case ErrorCode::unknown_node: return "UnknownNode";
    case ErrorCode::type_error: return "TypeError";
    case ErrorCode::unbound_identifier: return "UnboundIdentifier";
    case ErrorCode::unresolved_alias: return "UnresolvedAlias";
    case ErrorCode::duplicate_truncation: return "DuplicateTruncation";
    case ErrorCode::missing_parameter: return "MissingParameter";
    case ErrorCode::malformed_header: return "MalformedHeader";
    case ErrorCode::dangling_edge: return "DanglingEdge";
    case ErrorCode::bad_kind: return "BadKind";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::internal: return "InternalError";
  }
  return "Error";
}

// All engine failures are reported through this one exception type. `line`
// and `column` are 1-based and zero when the error has no source position.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, int line = 0, int column = 0)
      : std::runtime_error(format(code, message, line, column)),
        code_(code),
        line_(line),
        column_(column) {}

  ErrorCode code() const { return code_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(ErrorCode code, const std::string& message, int line, int column) {
    std::string out = error_code_name(code);
    out += ": ";
    out += message;
    if (line > 0) {
      out += " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
    }
    return out;
  }

  ErrorCode code_;
  int line_;
  int column_;
};

}  // namespace quiver
