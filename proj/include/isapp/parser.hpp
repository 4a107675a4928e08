#pragma once

#include <stdexcept>
#include <string>

#include "isapp/ast.hpp"

namespace isapp {

struct ParseError : std::runtime_error {
  SourceLoc loc;
  ParseError(const std::string& msg, SourceLoc where)
      : std::runtime_error(msg + " (line " + std::to_string(where.line) +
                           ", col " + std::to_string(where.col) + ")"),
        loc(where) {}
};

// Parses the concrete .sm syntax. Section lines (alphabet, blank, op,
// registers, stacks) are line-oriented; function and main bodies are
// free-form inside braces. '#' starts a comment running to end of line.
// Throws ParseError on syntax errors, duplicate declarations, unknown
// identifiers and arity mismatches.
Program parse_program(const std::string& source);

}  // namespace isapp
