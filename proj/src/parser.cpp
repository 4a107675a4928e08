#include "isapp/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace isapp {
namespace {

enum class Tok {
  Word,
  ColonEq,
  Colon,
  Semi,
  Comma,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Lt,
  Gt,
  Arrow,
  Slash,
  End
};

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string t, int l, int c) {
    out.push_back(Token{k, std::move(t), SourceLoc{l, c}});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int l = line, co = col;
    if (word_char(c)) {
      size_t j = i;
      while (j < src.size() && word_char(src[j])) ++j;
      push(Tok::Word, src.substr(i, j - i), l, co);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two(':', '=')) {
      push(Tok::ColonEq, ":=", l, co);
      i += 2;
      col += 2;
      continue;
    }
    if (two('-', '>')) {
      push(Tok::Arrow, "->", l, co);
      i += 2;
      col += 2;
      continue;
    }
    Tok k;
    switch (c) {
      case ':': k = Tok::Colon; break;
      case ';': k = Tok::Semi; break;
      case ',': k = Tok::Comma; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      case '/': k = Tok::Slash; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         SourceLoc{l, co});
    }
    push(k, std::string(1, c), l, co);
    ++i;
    ++col;
  }
  push(Tok::End, "", line, col);
  return out;
}

const std::set<std::string> kReserved = {
    "alphabet", "blank", "op",   "registers", "stacks", "function",
    "main",     "returns", "skip", "if",        "else",   "loop",
    "push",     "pop",     "top",  "isEmpty",   "rand"};

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  Program prog;
  // scope while parsing a body; null means main scope
  FunctionDef* fn = nullptr;

  const Token& peek(int ahead = 0) const {
    size_t p = pos + static_cast<size_t>(ahead);
    return p < toks.size() ? toks[p] : toks.back();
  }
  Token next() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw ParseError(msg, t.loc);
  }
  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what, peek());
    return next();
  }
  std::string expect_word(const std::string& what) {
    return expect(Tok::Word, what).text;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }

  // ---- name bookkeeping -----------------------------------------------

  void check_fresh_name(const std::string& n, const Token& t) {
    if (kReserved.count(n)) fail("'" + n + "' is a reserved word", t);
    if (prog.has_letter(n) || prog.has_register(n) || prog.has_stack(n) ||
        prog.find_op(n) || prog.find_function(n))
      fail("duplicate declaration of '" + n + "'", t);
  }

  bool is_scope_stack(const std::string& n) const {
    if (fn) {
      const auto& fs = fn->formals;
      if (std::find(fs.begin(), fs.end(), n) != fs.end()) return true;
      const auto& ls = fn->locals;
      return std::find(ls.begin(), ls.end(), n) != ls.end();
    }
    return prog.has_stack(n);
  }

  // Stack-name positions inside a function body auto-declare locals.
  std::string resolve_stack(const Token& t) {
    const std::string& n = t.text;
    if (kReserved.count(n)) fail("'" + n + "' is a reserved word", t);
    if (is_scope_stack(n)) return n;
    if (fn) {
      if (prog.has_letter(n) || prog.has_register(n) || prog.find_op(n) ||
          prog.find_function(n))
        fail("'" + n + "' is not a stack", t);
      fn->locals.push_back(n);
      return n;
    }
    fail("unknown stack '" + n + "'", t);
  }

  // ---- expressions ------------------------------------------------------

  ExprPtr parse_expr() {
    Token t = expect(Tok::Word, "expression");
    if (t.text == "top") {
      expect(Tok::LParen, "'('");
      std::string s = resolve_stack(expect(Tok::Word, "stack name"));
      expect(Tok::RParen, "')'");
      auto e = make_top(s);
      e->loc = t.loc;
      return e;
    }
    if (peek().kind == Tok::LParen) {
      const OperatorDef* op = prog.find_op(t.text);
      if (!op) {
        if (prog.find_function(t.text))
          fail("function '" + t.text + "' cannot be used in an expression", t);
        fail("unknown operator '" + t.text + "'", t);
      }
      auto args = parse_expr_args();
      if (static_cast<int>(args.size()) != op->arity)
        fail("operator '" + t.text + "' expects " +
                 std::to_string(op->arity) + " argument(s)",
             t);
      auto e = make_op_apply(t.text, std::move(args));
      e->loc = t.loc;
      return e;
    }
    if (prog.has_letter(t.text)) {
      auto e = make_letter(t.text);
      e->loc = t.loc;
      return e;
    }
    if (prog.has_register(t.text)) {
      auto e = make_register_ref(t.text);
      e->loc = t.loc;
      return e;
    }
    fail("unknown identifier '" + t.text + "'", t);
  }

  std::vector<ExprPtr> parse_expr_args() {
    expect(Tok::LParen, "'('");
    std::vector<ExprPtr> args;
    if (peek().kind != Tok::RParen) {
      args.push_back(parse_expr());
      while (accept(Tok::Comma)) args.push_back(parse_expr());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  BoolExprPtr parse_bool() {
    Token t = expect(Tok::Word, "boolean expression");
    if (t.text == "true" || t.text == "false") {
      auto b = make_bool_const(t.text == "true");
      b->loc = t.loc;
      return b;
    }
    if (t.text == "rand") {
      expect(Tok::LParen, "'('");
      expect(Tok::RParen, "')'");
      auto b = make_rand();
      b->loc = t.loc;
      return b;
    }
    if (t.text == "isEmpty") {
      expect(Tok::LParen, "'('");
      std::string s = resolve_stack(expect(Tok::Word, "stack name"));
      expect(Tok::RParen, "')'");
      auto b = make_is_empty(s);
      b->loc = t.loc;
      return b;
    }
    if (peek().kind == Tok::LParen) {
      const OperatorDef* op = prog.find_op(t.text);
      if (!op) fail("unknown operator '" + t.text + "'", t);
      auto args = parse_expr_args();
      if (static_cast<int>(args.size()) != op->arity)
        fail("operator '" + t.text + "' expects " +
                 std::to_string(op->arity) + " argument(s)",
             t);
      auto b = make_pred_apply(t.text, std::move(args));
      b->loc = t.loc;
      return b;
    }
    fail("expected a boolean expression", t);
  }

  // ---- commands -----------------------------------------------------------

  CommandPtr parse_block() {
    expect(Tok::LBrace, "'{'");
    if (accept(Tok::RBrace)) {
      auto c = make_skip();
      c->loc = peek().loc;
      return c;
    }
    CommandPtr c = parse_cmd_seq();
    expect(Tok::RBrace, "'}'");
    return c;
  }

  CommandPtr parse_cmd_seq() {
    CommandPtr first = parse_command();
    if (accept(Tok::Semi)) {
      if (peek().kind == Tok::RBrace) return first;  // trailing ';'
      SourceLoc loc = first->loc;
      auto rest = parse_cmd_seq();
      auto s = make_seq(std::move(first), std::move(rest));
      s->loc = loc;
      return s;
    }
    return first;
  }

  CommandPtr parse_command() {
    Token t = peek();
    if (t.kind != Tok::Word) fail("expected a command", t);
    if (t.text == "skip") {
      next();
      auto c = make_skip();
      c->loc = t.loc;
      return c;
    }
    if (t.text == "pop") {
      next();
      expect(Tok::LParen, "'('");
      std::string s = resolve_stack(expect(Tok::Word, "stack name"));
      expect(Tok::RParen, "')'");
      auto c = make_pop(s);
      c->loc = t.loc;
      return c;
    }
    if (t.text == "push") {
      next();
      expect(Tok::LParen, "'('");
      auto e = parse_expr();
      expect(Tok::Comma, "','");
      std::string s = resolve_stack(expect(Tok::Word, "stack name"));
      expect(Tok::RParen, "')'");
      auto c = make_push(std::move(e), s);
      c->loc = t.loc;
      return c;
    }
    if (t.text == "if") {
      next();
      auto cond = parse_bool();
      auto then_c = parse_block();
      Token e = expect(Tok::Word, "'else'");
      if (e.text != "else") fail("expected 'else'", e);
      auto else_c = parse_block();
      auto c = make_if(std::move(cond), std::move(then_c), std::move(else_c));
      c->loc = t.loc;
      return c;
    }
    if (t.text == "loop") {
      next();
      std::string s = resolve_stack(expect(Tok::Word, "stack name"));
      auto body = parse_block();
      auto c = make_loop(s, std::move(body));
      c->loc = t.loc;
      return c;
    }
    // assignment: register := expr | stack := stack/literal/call
    next();
    expect(Tok::ColonEq, "':='");
    if (prog.has_register(t.text)) {
      auto c = make_assign_reg(t.text, parse_expr());
      c->loc = t.loc;
      return c;
    }
    std::string dst = resolve_stack(t);
    if (accept(Tok::Lt)) {
      std::vector<std::string> letters;
      if (peek().kind != Tok::Gt) {
        do {
          Token lt = expect(Tok::Word, "letter");
          if (!prog.has_letter(lt.text))
            fail("unknown letter '" + lt.text + "'", lt);
          letters.push_back(lt.text);
        } while (accept(Tok::Comma));
      }
      expect(Tok::Gt, "'>'");
      auto c = make_assign_literal(dst, std::move(letters));
      c->loc = t.loc;
      return c;
    }
    Token rhs = expect(Tok::Word, "stack, literal or call");
    if (peek().kind == Tok::LParen) {
      const FunctionDef* callee = prog.find_function(rhs.text);
      if (!callee && fn && fn->name == rhs.text) callee = fn;
      if (!callee) fail("unknown function '" + rhs.text + "'", rhs);
      next();  // '('
      std::vector<std::string> args;
      if (peek().kind != Tok::RParen) {
        do args.push_back(resolve_stack(expect(Tok::Word, "stack name")));
        while (accept(Tok::Comma));
      }
      expect(Tok::RParen, "')'");
      if (args.size() != callee->formals.size())
        fail("function '" + rhs.text + "' expects " +
                 std::to_string(callee->formals.size()) + " argument(s)",
             rhs);
      auto c = make_assign_call(dst, rhs.text, std::move(args));
      c->loc = t.loc;
      return c;
    }
    auto c = make_copy_stack(dst, resolve_stack(rhs));
    c->loc = t.loc;
    return c;
  }

  // ---- sections -------------------------------------------------------

  // words on the same physical line as the section keyword
  std::vector<Token> rest_of_line(int line) {
    std::vector<Token> ws;
    while (peek().kind == Tok::Word && peek().loc.line == line)
      ws.push_back(next());
    return ws;
  }

  void parse_alphabet(const Token& kw) {
    expect(Tok::Colon, "':'");
    for (auto& t : rest_of_line(kw.loc.line)) {
      if (t.text != "true" && t.text != "false") check_fresh_name(t.text, t);
      if (prog.has_letter(t.text))
        fail("duplicate letter '" + t.text + "'", t);
      prog.alphabet.push_back(t.text);
    }
    if (!prog.has_letter("true") || !prog.has_letter("false"))
      fail("alphabet must contain 'true' and 'false'", kw);
  }

  void parse_blank(const Token& kw) {
    expect(Tok::Colon, "':'");
    Token t = expect(Tok::Word, "letter");
    if (t.loc.line != kw.loc.line) fail("blank letter must follow on the same line", t);
    if (!prog.has_letter(t.text)) fail("unknown letter '" + t.text + "'", t);
    if (prog.blank) fail("duplicate blank section", kw);
    prog.blank = t.text;
  }

  void parse_op(const Token& kw) {
    OperatorDef op;
    Token name = expect(Tok::Word, "operator name");
    check_fresh_name(name.text, name);
    op.name = name.text;
    op.loc = name.loc;
    expect(Tok::Slash, "'/'");
    Token ar = expect(Tok::Word, "arity");
    for (char c : ar.text)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail("arity must be a number", ar);
    op.arity = std::stoi(ar.text);
    expect(Tok::Colon, "':'");
    // entries run to end of line: in1,in2->out ...
    unsigned long long expected = 1;
    for (int i = 0; i < op.arity; ++i) {
      expected *= prog.alphabet.size();
      if (expected > 1000000ull)
        fail("operator table too large", name);
    }
    while (peek().loc.line == kw.loc.line &&
           (peek().kind == Tok::Word || peek().kind == Tok::Arrow)) {
      std::vector<std::string> inputs;
      while (peek().kind == Tok::Word) {
        Token in = next();
        if (!prog.has_letter(in.text))
          fail("unknown letter '" + in.text + "'", in);
        inputs.push_back(in.text);
        if (!accept(Tok::Comma)) break;
      }
      Token arrow = expect(Tok::Arrow, "'->'");
      Token out = expect(Tok::Word, "letter");
      if (out.loc.line != kw.loc.line) fail("operator entry split across lines", out);
      if (!prog.has_letter(out.text))
        fail("unknown letter '" + out.text + "'", out);
      if (static_cast<int>(inputs.size()) != op.arity)
        fail("entry arity mismatch for operator '" + op.name + "'", arrow);
      if (op.table.count(inputs))
        fail("duplicate table entry for operator '" + op.name + "'", arrow);
      op.table[inputs] = out.text;
    }
    if (op.table.size() != expected)
      fail("operator table for '" + op.name + "' is not total (" +
               std::to_string(op.table.size()) + " of " +
               std::to_string(expected) + " entries)",
           name);
    op.is_predicate = true;
    for (const auto& [k, v] : op.table)
      if (v != "true" && v != "false") op.is_predicate = false;
    prog.ops.push_back(std::move(op));
  }

  void parse_name_list(const Token& kw, std::vector<std::string>& out) {
    expect(Tok::Colon, "':'");
    for (auto& t : rest_of_line(kw.loc.line)) {
      check_fresh_name(t.text, t);
      out.push_back(t.text);
    }
  }

  void parse_function(const Token& kw) {
    FunctionDef f;
    Token name = expect(Tok::Word, "function name");
    check_fresh_name(name.text, name);
    f.name = name.text;
    f.loc = kw.loc;
    expect(Tok::LParen, "'('");
    if (peek().kind != Tok::RParen) {
      do {
        Token p = expect(Tok::Word, "parameter name");
        if (kReserved.count(p.text))
          fail("'" + p.text + "' is a reserved word", p);
        if (prog.has_letter(p.text) || prog.has_register(p.text) ||
            prog.find_op(p.text) || prog.find_function(p.text))
          fail("parameter '" + p.text + "' clashes with another name", p);
        if (std::find(f.formals.begin(), f.formals.end(), p.text) !=
            f.formals.end())
          fail("duplicate parameter '" + p.text + "'", p);
        f.formals.push_back(p.text);
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    fn = &f;
    f.body = parse_block();
    fn = nullptr;
    Token r = expect(Tok::Word, "'returns'");
    if (r.text != "returns") fail("expected 'returns'", r);
    Token rs = expect(Tok::Word, "stack name");
    bool known =
        std::find(f.formals.begin(), f.formals.end(), rs.text) !=
            f.formals.end() ||
        std::find(f.locals.begin(), f.locals.end(), rs.text) != f.locals.end();
    if (!known)
      fail("returned stack '" + rs.text + "' is not used by the function", rs);
    f.returned = rs.text;
    prog.functions.push_back(std::move(f));
  }

  Program run() {
    Token first = peek();
    if (first.kind != Tok::Word || first.text != "alphabet")
      fail("program must start with an alphabet section", first);
    next();
    parse_alphabet(first);
    bool saw_stacks = false, saw_regs = false, saw_main = false;
    while (peek().kind != Tok::End) {
      Token kw = expect(Tok::Word, "section keyword");
      if (kw.text == "blank") {
        parse_blank(kw);
      } else if (kw.text == "op") {
        parse_op(kw);
      } else if (kw.text == "registers") {
        if (saw_regs) fail("duplicate registers section", kw);
        saw_regs = true;
        parse_name_list(kw, prog.registers);
      } else if (kw.text == "stacks") {
        if (saw_stacks) fail("duplicate stacks section", kw);
        saw_stacks = true;
        parse_name_list(kw, prog.stacks);
        if (prog.stacks.empty()) fail("stacks section is empty", kw);
      } else if (kw.text == "function") {
        if (!saw_stacks) fail("stacks must be declared before functions", kw);
        parse_function(kw);
      } else if (kw.text == "main") {
        if (!saw_stacks) fail("stacks must be declared before main", kw);
        if (saw_main) fail("duplicate main section", kw);
        saw_main = true;
        prog.main = parse_block();
      } else {
        fail("unknown section '" + kw.text + "'", kw);
      }
    }
    if (!saw_main) fail("missing main section", first);
    return std::move(prog);
  }
};

}  // namespace

Program parse_program(const std::string& source) {
  Parser p;
  p.toks = lex(source);
  return p.run();
}

}  // namespace isapp
