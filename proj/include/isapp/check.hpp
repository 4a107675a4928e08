#pragma once

#include <string>
#include <vector>

#include "isapp/ast.hpp"

namespace isapp {

struct Diagnostic {
  std::string message;
  SourceLoc loc;
};

// Static rules beyond the grammar: the loop stack must not occur anywhere
// in the loop body (including as a call actual), the call graph must be
// acyclic, operator/function arities must match, and predicates may only
// appear where booleans are expected (and never in letter positions).
// Empty result means well-formed.
std::vector<Diagnostic> check_wellformed(const Program& p);

}  // namespace isapp
