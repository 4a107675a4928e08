#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace isapp {

struct SourceLoc {
  int line = 0;
  int col = 0;
  bool operator==(const SourceLoc&) const = default;
};

// ---------------------------------------------------------------------------
// Expressions evaluate to letters; boolean expressions steer branching.
// All identifiers stay as names; scopes are resolved against the program
// (or the enclosing function) by the parser, checker, certifier and
// interpreter as needed.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind { Letter, Register, OpApply, Top };
  Kind kind;
  std::string name;  // letter / register / operator / stack (Top)
  std::vector<ExprPtr> args;
  SourceLoc loc;
};

struct BoolExpr;
using BoolExprPtr = std::unique_ptr<BoolExpr>;

struct BoolExpr {
  enum class Kind { True, False, PredApply, Rand, IsEmpty };
  Kind kind;
  std::string name;  // predicate / stack (IsEmpty)
  std::vector<ExprPtr> args;
  SourceLoc loc;
};

struct Command;
using CommandPtr = std::unique_ptr<Command>;

struct Command {
  enum class Kind {
    Skip,
    AssignReg,      // target := expr
    CopyStack,      // target := source
    AssignLiteral,  // target := <letters...>   (top first)
    AssignCall,     // target := source(call_args...)
    Pop,            // pop(target)
    Push,           // push(expr, target)
    Seq,            // a ; b
    If,             // if cond { a } else { b }
    Loop            // loop target { a }
  };
  Kind kind;
  SourceLoc loc;
  std::string target;
  std::string source;
  std::vector<std::string> letters;
  std::vector<std::string> call_args;
  ExprPtr expr;
  BoolExprPtr cond;
  CommandPtr a;
  CommandPtr b;
};

ExprPtr make_letter(std::string name);
ExprPtr make_register_ref(std::string name);
ExprPtr make_top(std::string stack);
ExprPtr make_op_apply(std::string op, std::vector<ExprPtr> args);
BoolExprPtr make_bool_const(bool v);
BoolExprPtr make_rand();
BoolExprPtr make_is_empty(std::string stack);
BoolExprPtr make_pred_apply(std::string op, std::vector<ExprPtr> args);
CommandPtr make_skip();
CommandPtr make_assign_reg(std::string reg, ExprPtr e);
CommandPtr make_copy_stack(std::string dst, std::string src);
CommandPtr make_assign_literal(std::string dst, std::vector<std::string> ls);
CommandPtr make_assign_call(std::string dst, std::string fn,
                            std::vector<std::string> args);
CommandPtr make_pop(std::string stack);
CommandPtr make_push(ExprPtr e, std::string stack);
CommandPtr make_seq(CommandPtr a, CommandPtr b);
CommandPtr make_if(BoolExprPtr cond, CommandPtr t, CommandPtr e);
CommandPtr make_loop(std::string stack, CommandPtr body);

// ---------------------------------------------------------------------------

struct OperatorDef {
  std::string name;
  int arity = 0;
  // total table: letter tuple -> letter
  std::map<std::vector<std::string>, std::string> table;
  bool is_predicate = false;  // codomain within {true, false}
  SourceLoc loc;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> formals;
  std::string returned;  // formal or local stack
  CommandPtr body;
  // non-formal stacks used by the body, in first-occurrence order
  std::vector<std::string> locals;
  SourceLoc loc;
};

struct Program {
  std::vector<std::string> alphabet;  // contains true and false
  std::optional<std::string> blank;   // letter read from an empty stack
  std::vector<OperatorDef> ops;
  std::vector<std::string> registers;
  std::vector<std::string> stacks;
  std::vector<FunctionDef> functions;
  CommandPtr main;

  const OperatorDef* find_op(const std::string& name) const;
  const FunctionDef* find_function(const std::string& name) const;
  bool has_letter(const std::string& name) const;
  bool has_register(const std::string& name) const;
  bool has_stack(const std::string& name) const;
};

// Ordered stack namespace; row/column order of certificates and the
// stack layout of machine states both come from here.
struct StackSpace {
  std::vector<std::string> names;
  int dim() const { return static_cast<int>(names.size()) + 1; }
  int index_of(const std::string& name) const;  // -1 when absent
};

StackSpace program_space(const Program& p);
StackSpace function_space(const FunctionDef& f);

// Stacks referenced anywhere in c (targets, sources, call actuals, tops,
// isEmpty), in first-occurrence order.
std::vector<std::string> stacks_used(const Command& c);
bool stack_occurs(const Command& c, const std::string& name);
void collect_calls(const Command& c, std::vector<const Command*>& out);

// Deep structural equality (the printer round-trip oracle).
bool equals(const Expr& a, const Expr& b);
bool equals(const BoolExpr& a, const BoolExpr& b);
bool equals(const Command& a, const Command& b);
bool equals(const Program& a, const Program& b);

ExprPtr clone(const Expr& e);
BoolExprPtr clone(const BoolExpr& b);
CommandPtr clone(const Command& c);

// Canonical concrete syntax; parse(to_source(p)) reproduces p.
std::string to_source(const Program& p);
std::string to_source(const Command& c, int indent = 0);
std::string to_source(const Expr& e);
std::string to_source(const BoolExpr& b);

}  // namespace isapp
