#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isapp/ast.hpp"
#include "isapp/matrix.hpp"

namespace isapp {

struct CertifyOptions {
  Combiner combiner = Combiner::Plus;
  bool trace = false;
};

// Per-loop record kept when tracing: the body certificate, its closure
// and the merged loop certificate.
struct LoopTrace {
  SourceLoc loc;
  std::string stack;
  Mat body;
  Mat closure;
  Mat merged;
};

// Why a loop was refused: some closure diagonal entry reached A or M,
// i.e. one iteration can already grow that stack beyond coefficient 1.
struct RejectionDiagnostic {
  SourceLoc loop_loc;
  std::string stack;    // loop counter
  int index = 0;        // offending diagonal position, 0-based
  Val value = Val::A;
  Mat closure;
  StackSpace space;     // scope of the rejected loop (function or program)
  std::string render() const { return render(space); }
  std::string render(const StackSpace& space) const;
};

struct CertifyError : std::runtime_error {
  RejectionDiagnostic diag;
  explicit CertifyError(RejectionDiagnostic d);
};

struct FunctionCertificate {
  std::string name;
  StackSpace space;  // formals then locals; constants index last
  Mat matrix;
  int returned_col = 0;
};

struct Certificate {
  StackSpace space;  // declared program stacks
  Mat matrix;
  Combiner combiner = Combiner::Plus;
  std::map<std::string, FunctionCertificate> functions;
  std::vector<LoopTrace> traces;
};

struct CertifyOutcome {
  std::optional<Certificate> certificate;
  std::optional<RejectionDiagnostic> rejection;
  bool accepted() const { return certificate.has_value(); }
};

// Derives the least certificate for the whole program (functions are
// certified on demand and memoized). Throws CertifyError when a loop is
// rejected; programs are assumed well-formed (see check_wellformed).
Certificate certify_program(const Program& p, CertifyOptions opts = {});

// Same, but reports rejection as a value instead of throwing.
CertifyOutcome try_certify(const Program& p, CertifyOptions opts = {});

// Certificate of one function in its own stack space.
FunctionCertificate certify_function(const Program& p, const std::string& name,
                                     CertifyOptions opts = {});

// Certificate of a single command over an explicit stack space, with
// access to the program's functions. Exposed for tests and tooling.
Mat certify_command_in(const Program& p, const Command& c,
                       const StackSpace& space, CertifyOptions opts = {});

// Validates a user-supplied (possibly weakened) matrix: every entry must
// dominate the computed least certificate.
bool certificate_admits(const Program& p, const Mat& claimed,
                        CertifyOptions opts = {});

// Human-readable grid with stack-name headers ("c" marks constants).
std::string render_grid(const Mat& m, const StackSpace& space);

}  // namespace isapp
