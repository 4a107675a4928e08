#include "isapp/check.hpp"

#include <map>
#include <set>

namespace isapp {
namespace {

struct Checker {
  const Program& p;
  std::vector<Diagnostic> diags;

  void report(std::string msg, SourceLoc loc) {
    diags.push_back(Diagnostic{std::move(msg), loc});
  }

  void check_expr(const Expr& e, bool letter_position) {
    if (e.kind == Expr::Kind::OpApply) {
      const OperatorDef* op = p.find_op(e.name);
      if (!op) {
        report("unknown operator '" + e.name + "'", e.loc);
      } else {
        if (op->is_predicate && letter_position)
          report("predicate '" + e.name +
                     "' used where a letter expression is expected",
                 e.loc);
        if (static_cast<int>(e.args.size()) != op->arity)
          report("operator '" + e.name + "' expects " +
                     std::to_string(op->arity) + " argument(s)",
                 e.loc);
      }
    }
    for (const auto& a : e.args) check_expr(*a, true);
  }

  void check_bool(const BoolExpr& b) {
    if (b.kind == BoolExpr::Kind::PredApply) {
      const OperatorDef* op = p.find_op(b.name);
      if (!op) {
        report("unknown operator '" + b.name + "'", b.loc);
      } else {
        if (!op->is_predicate)
          report("operator '" + b.name +
                     "' is not a predicate but is used as a condition",
                 b.loc);
        if (static_cast<int>(b.args.size()) != op->arity)
          report("operator '" + b.name + "' expects " +
                     std::to_string(op->arity) + " argument(s)",
                 b.loc);
      }
    }
    for (const auto& a : b.args) check_expr(*a, true);
  }

  void check_cmd(const Command& c) {
    switch (c.kind) {
      case Command::Kind::AssignReg: check_expr(*c.expr, true); break;
      case Command::Kind::Push: check_expr(*c.expr, true); break;
      case Command::Kind::AssignCall: {
        const FunctionDef* f = p.find_function(c.source);
        if (!f) {
          report("unknown function '" + c.source + "'", c.loc);
        } else if (f->formals.size() != c.call_args.size()) {
          report("function '" + c.source + "' expects " +
                     std::to_string(f->formals.size()) + " argument(s)",
                 c.loc);
        }
        break;
      }
      case Command::Kind::Seq:
        check_cmd(*c.a);
        check_cmd(*c.b);
        break;
      case Command::Kind::If:
        check_bool(*c.cond);
        check_cmd(*c.a);
        check_cmd(*c.b);
        break;
      case Command::Kind::Loop:
        if (stack_occurs(*c.a, c.target))
          report("loop stack '" + c.target + "' occurs in the loop body",
                 c.loc);
        check_cmd(*c.a);
        break;
      default: break;
    }
  }

  // depth-first search for a cycle in the call graph
  void check_recursion() {
    std::map<std::string, std::vector<std::string>> callees;
    for (const auto& f : p.functions) {
      std::vector<const Command*> calls;
      collect_calls(*f.body, calls);
      for (const Command* c : calls) callees[f.name].push_back(c->source);
    }
    std::set<std::string> done;
    for (const auto& f : p.functions) {
      if (done.count(f.name)) continue;
      std::vector<std::string> path;
      std::set<std::string> on_path;
      if (dfs(f.name, callees, done, path, on_path)) return;
    }
  }

  bool dfs(const std::string& name,
           std::map<std::string, std::vector<std::string>>& callees,
           std::set<std::string>& done, std::vector<std::string>& path,
           std::set<std::string>& on_path) {
    path.push_back(name);
    on_path.insert(name);
    for (const auto& callee : callees[name]) {
      if (on_path.count(callee)) {
        std::string cycle;
        bool in_cycle = false;
        for (const auto& n : path) {
          if (n == callee) in_cycle = true;
          if (in_cycle) cycle += n + " -> ";
        }
        cycle += callee;
        const FunctionDef* f = p.find_function(name);
        report("recursive call cycle: " + cycle,
               f ? f->loc : SourceLoc{});
        return true;
      }
      if (!done.count(callee) &&
          dfs(callee, callees, done, path, on_path))
        return true;
    }
    on_path.erase(name);
    path.pop_back();
    done.insert(name);
    return false;
  }
};

}  // namespace

std::vector<Diagnostic> check_wellformed(const Program& p) {
  Checker c{p, {}};
  for (const auto& f : p.functions) c.check_cmd(*f.body);
  if (p.main) c.check_cmd(*p.main);
  c.check_recursion();
  return std::move(c.diags);
}

}  // namespace isapp
