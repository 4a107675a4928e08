#include "isapp/ast.hpp"

#include <algorithm>
#include <sstream>

namespace isapp {

ExprPtr make_letter(std::string name) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::Letter;
  e->name = std::move(name);
  return e;
}

ExprPtr make_register_ref(std::string name) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::Register;
  e->name = std::move(name);
  return e;
}

ExprPtr make_top(std::string stack) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::Top;
  e->name = std::move(stack);
  return e;
}

ExprPtr make_op_apply(std::string op, std::vector<ExprPtr> args) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::OpApply;
  e->name = std::move(op);
  e->args = std::move(args);
  return e;
}

BoolExprPtr make_bool_const(bool v) {
  auto b = std::make_unique<BoolExpr>();
  b->kind = v ? BoolExpr::Kind::True : BoolExpr::Kind::False;
  return b;
}

BoolExprPtr make_rand() {
  auto b = std::make_unique<BoolExpr>();
  b->kind = BoolExpr::Kind::Rand;
  return b;
}

BoolExprPtr make_is_empty(std::string stack) {
  auto b = std::make_unique<BoolExpr>();
  b->kind = BoolExpr::Kind::IsEmpty;
  b->name = std::move(stack);
  return b;
}

BoolExprPtr make_pred_apply(std::string op, std::vector<ExprPtr> args) {
  auto b = std::make_unique<BoolExpr>();
  b->kind = BoolExpr::Kind::PredApply;
  b->name = std::move(op);
  b->args = std::move(args);
  return b;
}

static CommandPtr new_cmd(Command::Kind k) {
  auto c = std::make_unique<Command>();
  c->kind = k;
  return c;
}

CommandPtr make_skip() { return new_cmd(Command::Kind::Skip); }

CommandPtr make_assign_reg(std::string reg, ExprPtr e) {
  auto c = new_cmd(Command::Kind::AssignReg);
  c->target = std::move(reg);
  c->expr = std::move(e);
  return c;
}

CommandPtr make_copy_stack(std::string dst, std::string src) {
  auto c = new_cmd(Command::Kind::CopyStack);
  c->target = std::move(dst);
  c->source = std::move(src);
  return c;
}

CommandPtr make_assign_literal(std::string dst, std::vector<std::string> ls) {
  auto c = new_cmd(Command::Kind::AssignLiteral);
  c->target = std::move(dst);
  c->letters = std::move(ls);
  return c;
}

CommandPtr make_assign_call(std::string dst, std::string fn,
                            std::vector<std::string> args) {
  auto c = new_cmd(Command::Kind::AssignCall);
  c->target = std::move(dst);
  c->source = std::move(fn);
  c->call_args = std::move(args);
  return c;
}

CommandPtr make_pop(std::string stack) {
  auto c = new_cmd(Command::Kind::Pop);
  c->target = std::move(stack);
  return c;
}

CommandPtr make_push(ExprPtr e, std::string stack) {
  auto c = new_cmd(Command::Kind::Push);
  c->target = std::move(stack);
  c->expr = std::move(e);
  return c;
}

CommandPtr make_seq(CommandPtr a, CommandPtr b) {
  auto c = new_cmd(Command::Kind::Seq);
  c->a = std::move(a);
  c->b = std::move(b);
  return c;
}

CommandPtr make_if(BoolExprPtr cond, CommandPtr t, CommandPtr e) {
  auto c = new_cmd(Command::Kind::If);
  c->cond = std::move(cond);
  c->a = std::move(t);
  c->b = std::move(e);
  return c;
}

CommandPtr make_loop(std::string stack, CommandPtr body) {
  auto c = new_cmd(Command::Kind::Loop);
  c->target = std::move(stack);
  c->a = std::move(body);
  return c;
}

const OperatorDef* Program::find_op(const std::string& name) const {
  for (const auto& o : ops)
    if (o.name == name) return &o;
  return nullptr;
}

const FunctionDef* Program::find_function(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

bool Program::has_letter(const std::string& name) const {
  return std::find(alphabet.begin(), alphabet.end(), name) != alphabet.end();
}

bool Program::has_register(const std::string& name) const {
  return std::find(registers.begin(), registers.end(), name) !=
         registers.end();
}

bool Program::has_stack(const std::string& name) const {
  return std::find(stacks.begin(), stacks.end(), name) != stacks.end();
}

int StackSpace::index_of(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

StackSpace program_space(const Program& p) { return StackSpace{p.stacks}; }

StackSpace function_space(const FunctionDef& f) {
  StackSpace s{f.formals};
  s.names.insert(s.names.end(), f.locals.begin(), f.locals.end());
  return s;
}

static void add_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

static void stacks_in_expr(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::Top) add_unique(out, e.name);
  for (const auto& a : e.args) stacks_in_expr(*a, out);
}

static void stacks_in_bool(const BoolExpr& b, std::vector<std::string>& out) {
  if (b.kind == BoolExpr::Kind::IsEmpty) add_unique(out, b.name);
  for (const auto& a : b.args) stacks_in_expr(*a, out);
}

static void stacks_in_cmd(const Command& c, std::vector<std::string>& out) {
  switch (c.kind) {
    case Command::Kind::Skip: break;
    case Command::Kind::AssignReg: stacks_in_expr(*c.expr, out); break;
    case Command::Kind::CopyStack:
      add_unique(out, c.target);
      add_unique(out, c.source);
      break;
    case Command::Kind::AssignLiteral: add_unique(out, c.target); break;
    case Command::Kind::AssignCall:
      add_unique(out, c.target);
      for (const auto& a : c.call_args) add_unique(out, a);
      break;
    case Command::Kind::Pop: add_unique(out, c.target); break;
    case Command::Kind::Push:
      stacks_in_expr(*c.expr, out);
      add_unique(out, c.target);
      break;
    case Command::Kind::Seq:
      stacks_in_cmd(*c.a, out);
      stacks_in_cmd(*c.b, out);
      break;
    case Command::Kind::If:
      stacks_in_bool(*c.cond, out);
      stacks_in_cmd(*c.a, out);
      stacks_in_cmd(*c.b, out);
      break;
    case Command::Kind::Loop:
      add_unique(out, c.target);
      stacks_in_cmd(*c.a, out);
      break;
  }
}

std::vector<std::string> stacks_used(const Command& c) {
  std::vector<std::string> out;
  stacks_in_cmd(c, out);
  return out;
}

bool stack_occurs(const Command& c, const std::string& name) {
  auto used = stacks_used(c);
  return std::find(used.begin(), used.end(), name) != used.end();
}

void collect_calls(const Command& c, std::vector<const Command*>& out) {
  switch (c.kind) {
    case Command::Kind::AssignCall: out.push_back(&c); break;
    case Command::Kind::Seq:
    case Command::Kind::If:
      collect_calls(*c.a, out);
      collect_calls(*c.b, out);
      break;
    case Command::Kind::Loop: collect_calls(*c.a, out); break;
    default: break;
  }
}

// --------------------------------- equality --------------------------------

bool equals(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size())
    return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!equals(*a.args[i], *b.args[i])) return false;
  return true;
}

bool equals(const BoolExpr& a, const BoolExpr& b) {
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size())
    return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!equals(*a.args[i], *b.args[i])) return false;
  return true;
}

static bool opt_equals(const Command* a, const Command* b) {
  if (!a || !b) return a == b;
  return equals(*a, *b);
}

bool equals(const Command& a, const Command& b) {
  if (a.kind != b.kind || a.target != b.target || a.source != b.source ||
      a.letters != b.letters || a.call_args != b.call_args)
    return false;
  if ((a.expr == nullptr) != (b.expr == nullptr)) return false;
  if (a.expr && !equals(*a.expr, *b.expr)) return false;
  if ((a.cond == nullptr) != (b.cond == nullptr)) return false;
  if (a.cond && !equals(*a.cond, *b.cond)) return false;
  return opt_equals(a.a.get(), b.a.get()) && opt_equals(a.b.get(), b.b.get());
}

bool equals(const Program& a, const Program& b) {
  if (a.alphabet != b.alphabet || a.blank != b.blank ||
      a.registers != b.registers || a.stacks != b.stacks)
    return false;
  if (a.ops.size() != b.ops.size()) return false;
  for (size_t i = 0; i < a.ops.size(); ++i) {
    const auto& x = a.ops[i];
    const auto& y = b.ops[i];
    if (x.name != y.name || x.arity != y.arity || x.table != y.table)
      return false;
  }
  if (a.functions.size() != b.functions.size()) return false;
  for (size_t i = 0; i < a.functions.size(); ++i) {
    const auto& x = a.functions[i];
    const auto& y = b.functions[i];
    if (x.name != y.name || x.formals != y.formals ||
        x.returned != y.returned || x.locals != y.locals)
      return false;
    if (!equals(*x.body, *y.body)) return false;
  }
  if ((a.main == nullptr) != (b.main == nullptr)) return false;
  return !a.main || equals(*a.main, *b.main);
}

// ---------------------------------- clone ----------------------------------

ExprPtr clone(const Expr& e) {
  auto r = std::make_unique<Expr>();
  r->kind = e.kind;
  r->name = e.name;
  r->loc = e.loc;
  for (const auto& a : e.args) r->args.push_back(clone(*a));
  return r;
}

BoolExprPtr clone(const BoolExpr& b) {
  auto r = std::make_unique<BoolExpr>();
  r->kind = b.kind;
  r->name = b.name;
  r->loc = b.loc;
  for (const auto& a : b.args) r->args.push_back(clone(*a));
  return r;
}

CommandPtr clone(const Command& c) {
  auto r = std::make_unique<Command>();
  r->kind = c.kind;
  r->loc = c.loc;
  r->target = c.target;
  r->source = c.source;
  r->letters = c.letters;
  r->call_args = c.call_args;
  if (c.expr) r->expr = clone(*c.expr);
  if (c.cond) r->cond = clone(*c.cond);
  if (c.a) r->a = clone(*c.a);
  if (c.b) r->b = clone(*c.b);
  return r;
}

// --------------------------------- printing --------------------------------

std::string to_source(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Letter:
    case Expr::Kind::Register: return e.name;
    case Expr::Kind::Top: return "top(" + e.name + ")";
    case Expr::Kind::OpApply: {
      std::string s = e.name + "(";
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) s += ", ";
        s += to_source(*e.args[i]);
      }
      return s + ")";
    }
  }
  return {};
}

std::string to_source(const BoolExpr& b) {
  switch (b.kind) {
    case BoolExpr::Kind::True: return "true";
    case BoolExpr::Kind::False: return "false";
    case BoolExpr::Kind::Rand: return "rand()";
    case BoolExpr::Kind::IsEmpty: return "isEmpty(" + b.name + ")";
    case BoolExpr::Kind::PredApply: {
      std::string s = b.name + "(";
      for (size_t i = 0; i < b.args.size(); ++i) {
        if (i) s += ", ";
        s += to_source(*b.args[i]);
      }
      return s + ")";
    }
  }
  return {};
}

static void print_cmd(const Command& c, int indent, std::ostringstream& os);

static void print_block(const Command& c, int indent, std::ostringstream& os) {
  // flatten sequences so bodies print one command per line
  if (c.kind == Command::Kind::Seq) {
    print_block(*c.a, indent, os);
    os << ";\n";
    print_block(*c.b, indent, os);
  } else {
    print_cmd(c, indent, os);
  }
}

static void print_cmd(const Command& c, int indent, std::ostringstream& os) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  switch (c.kind) {
    case Command::Kind::Skip: os << pad << "skip"; break;
    case Command::Kind::AssignReg:
      os << pad << c.target << " := " << to_source(*c.expr);
      break;
    case Command::Kind::CopyStack:
      os << pad << c.target << " := " << c.source;
      break;
    case Command::Kind::AssignLiteral: {
      os << pad << c.target << " := <";
      for (size_t i = 0; i < c.letters.size(); ++i) {
        if (i) os << ", ";
        os << c.letters[i];
      }
      os << ">";
      break;
    }
    case Command::Kind::AssignCall: {
      os << pad << c.target << " := " << c.source << "(";
      for (size_t i = 0; i < c.call_args.size(); ++i) {
        if (i) os << ", ";
        os << c.call_args[i];
      }
      os << ")";
      break;
    }
    case Command::Kind::Pop: os << pad << "pop(" << c.target << ")"; break;
    case Command::Kind::Push:
      os << pad << "push(" << to_source(*c.expr) << ", " << c.target << ")";
      break;
    case Command::Kind::Seq:
      print_block(c, indent, os);
      break;
    case Command::Kind::If:
      os << pad << "if " << to_source(*c.cond) << " {\n";
      print_block(*c.a, indent + 1, os);
      os << "\n" << pad << "} else {\n";
      print_block(*c.b, indent + 1, os);
      os << "\n" << pad << "}";
      break;
    case Command::Kind::Loop:
      os << pad << "loop " << c.target << " {\n";
      print_block(*c.a, indent + 1, os);
      os << "\n" << pad << "}";
      break;
  }
}

std::string to_source(const Command& c, int indent) {
  std::ostringstream os;
  print_cmd(c, indent, os);
  return os.str();
}

static std::string words_line(const std::vector<std::string>& ws) {
  std::string s;
  for (size_t i = 0; i < ws.size(); ++i) {
    if (i) s += ' ';
    s += ws[i];
  }
  return s;
}

std::string to_source(const Program& p) {
  std::ostringstream os;
  os << "alphabet: " << words_line(p.alphabet) << "\n";
  if (p.blank) os << "blank: " << *p.blank << "\n";
  for (const auto& op : p.ops) {
    os << "op " << op.name << "/" << op.arity << ":";
    for (const auto& [in, out] : op.table) {
      os << " ";
      for (size_t i = 0; i < in.size(); ++i) {
        if (i) os << ",";
        os << in[i];
      }
      os << "->" << out;
    }
    os << "\n";
  }
  if (!p.registers.empty())
    os << "registers: " << words_line(p.registers) << "\n";
  os << "stacks: " << words_line(p.stacks) << "\n";
  for (const auto& f : p.functions) {
    os << "function " << f.name << "(";
    for (size_t i = 0; i < f.formals.size(); ++i) {
      if (i) os << ", ";
      os << f.formals[i];
    }
    os << ") {\n";
    std::ostringstream body;
    print_block(*f.body, 1, body);
    os << body.str() << "\n} returns " << f.returned << "\n";
  }
  os << "main {\n";
  std::ostringstream body;
  print_block(*p.main, 1, body);
  os << body.str() << "\n}\n";
  return os.str();
}

}  // namespace isapp
