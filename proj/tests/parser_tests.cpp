#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "isapp/ast.hpp"
#include "isapp/check.hpp"
#include "isapp/parser.hpp"
#include "test_util.hpp"

using namespace isapp;
using namespace testutil;

namespace {

// Expects a ParseError whose message contains `needle`.
void expect_parse_error(const std::string& src, const std::string& needle) {
  try {
    parse_program(src);
    FAIL("expected a parse error containing: ", needle);
  } catch (const ParseError& e) {
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                  "wanted: ", needle, "; got: ", std::string(e.what()));
  }
}

bool has_diag(const std::vector<Diagnostic>& ds, const std::string& needle) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) {
    return d.message.find(needle) != std::string::npos;
  });
}

// ---------------------------------------------------------------------------
// Random program generator for the printer/parser round-trip. Uses fixed
// declarations and fresh names so the reparsed AST is structurally
// identical (including the inferred locals of the one function).
// ---------------------------------------------------------------------------

struct Gen {
  std::mt19937_64 g;
  std::vector<std::string> letters = {"true", "false", "a", "b"};
  std::vector<std::string> regs = {"r1", "r2"};

  explicit Gen(std::uint64_t seed) : g(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(g); }
  const std::string& any(const std::vector<std::string>& v) {
    return v[static_cast<size_t>(pick(static_cast<int>(v.size())))];
  }

  ExprPtr expr(const std::vector<std::string>& stacks, int depth) {
    switch (pick(depth > 0 ? 4 : 3)) {
      case 0: return make_letter(any(letters));
      case 1: return make_register_ref(any(regs));
      case 2: return make_top(any(stacks));
      default: {
        std::vector<ExprPtr> args;
        args.push_back(expr(stacks, depth - 1));
        args.push_back(expr(stacks, depth - 1));
        return make_op_apply("f2", std::move(args));
      }
    }
  }

  BoolExprPtr boolexpr(const std::vector<std::string>& stacks, int depth) {
    switch (pick(5)) {
      case 0: return make_bool_const(true);
      case 1: return make_bool_const(false);
      case 2: return make_rand();
      case 3: return make_is_empty(any(stacks));
      default: {
        std::vector<ExprPtr> args;
        args.push_back(expr(stacks, depth));
        return make_pred_apply("isp", std::move(args));
      }
    }
  }

  CommandPtr cmd(const std::vector<std::string>& stacks, int depth,
                 bool allow_calls) {
    switch (pick(depth > 0 ? 9 : 6)) {
      case 0: return make_skip();
      case 1: return make_assign_reg(any(regs), expr(stacks, depth));
      case 2: return make_copy_stack(any(stacks), any(stacks));
      case 3: {
        std::vector<std::string> ls;
        for (int i = pick(4); i > 0; --i) ls.push_back(any(letters));
        return make_assign_literal(any(stacks), std::move(ls));
      }
      case 4: return make_pop(any(stacks));
      case 5: return make_push(expr(stacks, depth), any(stacks));
      case 6: {
        // The parser nests sequences to the right, so keep the left
        // side a plain command to generate only canonical shapes.
        CommandPtr left;
        do {
          left = cmd(stacks, depth - 1, allow_calls);
        } while (left->kind == Command::Kind::Seq);
        return make_seq(std::move(left), cmd(stacks, depth - 1, allow_calls));
      }
      case 7:
        return make_if(boolexpr(stacks, depth - 1),
                       cmd(stacks, depth - 1, allow_calls),
                       cmd(stacks, depth - 1, allow_calls));
      default:
        if (allow_calls && pick(2) == 0)
          return make_assign_call(any(stacks), "g", {any(stacks), any(stacks)});
        return make_loop(any(stacks), cmd(stacks, depth - 1, allow_calls));
    }
  }
};

Program random_program(std::uint64_t seed) {
  Gen gen(seed);
  Program p;
  p.alphabet = gen.letters;
  if (gen.pick(2) == 0) p.blank = "a";

  OperatorDef f2;
  f2.name = "f2";
  f2.arity = 2;
  for (const auto& l1 : gen.letters)
    for (const auto& l2 : gen.letters)
      f2.table[{l1, l2}] = gen.any(gen.letters);
  f2.table[{"a", "a"}] = "a";  // keep the codomain outside {true,false}
  f2.is_predicate = false;
  p.ops.push_back(std::move(f2));

  OperatorDef isp;
  isp.name = "isp";
  isp.arity = 1;
  for (const auto& l : gen.letters)
    isp.table[{l}] = gen.pick(2) == 0 ? "true" : "false";
  isp.is_predicate = true;
  p.ops.push_back(std::move(isp));

  p.registers = gen.regs;
  p.stacks = {"S1", "S2"};

  FunctionDef f;
  f.name = "g";
  f.formals = {"F1", "F2"};
  f.body = gen.cmd({"F1", "F2", "NL1"}, 3, /*allow_calls=*/false);
  for (const auto& s : stacks_used(*f.body))
    if (s != "F1" && s != "F2") f.locals.push_back(s);
  f.returned =
      !f.locals.empty() && gen.pick(2) == 0 ? f.locals.front() : "F1";
  p.functions.push_back(std::move(f));

  p.main = gen.cmd({"S1", "S2"}, 4, /*allow_calls=*/true);
  return p;
}

}  // namespace

TEST_SUITE("parser") {

TEST_CASE("addition fixture parses into the expected shape") {
  Program p = parse_program(slurp(program_path("addition.sm")));
  CHECK(p.alphabet == std::vector<std::string>{"true", "false", "a", "b"});
  CHECK(p.stacks == std::vector<std::string>{"S1", "S2"});
  REQUIRE(p.functions.size() == 1);
  const FunctionDef& f = p.functions[0];
  CHECK(f.name == "addition");
  CHECK(f.formals == std::vector<std::string>{"A1", "A2"});
  CHECK(f.locals == std::vector<std::string>{"A3"});
  CHECK(f.returned == "A1");
  REQUIRE(p.main);
  CHECK(p.main->kind == Command::Kind::AssignCall);
  CHECK(p.main->target == "S1");
  CHECK(p.main->source == "addition");
  CHECK(p.main->call_args == std::vector<std::string>{"S1", "S2"});
}

TEST_CASE("stack spaces put constants last") {
  Program p = parse_program(slurp(program_path("multiplication.sm")));
  StackSpace sp = program_space(p);
  CHECK(sp.names == std::vector<std::string>{"S1", "S2", "S3"});
  CHECK(sp.dim() == 4);
  CHECK(sp.index_of("S2") == 1);
  CHECK(sp.index_of("nope") == -1);
  StackSpace fs = function_space(p.functions.at(0));
  CHECK(fs.names == std::vector<std::string>{"M1", "M2", "M3"});
}

TEST_CASE("comments, trailing semicolons and empty literals parse") {
  Program p = parse_program(
      "alphabet: true false a   # letters\n"
      "blank: a\n"
      "stacks: S1\n"
      "main {\n"
      "  S1 := <>;   # reset\n"
      "  push(a, S1);\n"
      "}\n");
  CHECK(p.blank == "a");
  CHECK(p.main->kind == Command::Kind::Seq);
  CHECK(p.main->a->letters.empty());
}

TEST_CASE("all bundled programs parse, are well-formed, and round-trip") {
  const char* names[] = {
      "addition.sm",      "multconst.sm",         "multiplication.sm",
      "mult_call.sm",     "subtraction.sm",       "doubling.sm",
      "mulzero.sm",       "coin_push.sm",         "two_coins.sm",
      "decide_always_empty.sm", "decide_coin.sm", "decide_always_push.sm"};
  for (const char* name : names) {
    CAPTURE(name);
    Program p = parse_program(slurp(program_path(name)));
    CHECK(check_wellformed(p).empty());
    std::string printed = to_source(p);
    Program q = parse_program(printed);
    CHECK(equals(p, q));
    CHECK(to_source(q) == printed);
  }
}

TEST_CASE("random programs survive the print/parse round-trip") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CAPTURE(seed);
    Program p = random_program(seed);
    std::string printed = to_source(p);
    Program q;
    REQUIRE_NOTHROW(q = parse_program(printed));
    if (!equals(p, q)) {
      MESSAGE("p locals: ", p.functions[0].locals.size(),
              " q locals: ", q.functions[0].locals.size(),
              " p ret: ", p.functions[0].returned,
              " q ret: ", q.functions[0].returned,
              " fn equal: ", equals(*p.functions[0].body, *q.functions[0].body),
              " main equal: ", equals(*p.main, *q.main));
      MESSAGE("source:\n", printed);
    }
    CHECK(equals(p, q));
    CHECK(to_source(q) == printed);
  }
}

TEST_CASE("clone produces structurally equal commands") {
  Program p = random_program(77);
  CommandPtr c = clone(*p.main);
  CHECK(equals(*c, *p.main));
}

TEST_CASE("parse errors") {
  expect_parse_error("stacks: S1\nmain { skip }\n",
                     "program must start with an alphabet section");
  expect_parse_error("alphabet: a b\nmain { skip }\n",
                     "alphabet must contain 'true' and 'false'");
  expect_parse_error("alphabet: true false\nstacks: S1\n",
                     "missing main section");
  expect_parse_error(
      "alphabet: true false\nstacks: loop\nmain { skip }\n",
      "reserved word");
  expect_parse_error(
      "alphabet: true false a\nstacks: S1 S1\nmain { skip }\n",
      "duplicate declaration");
  expect_parse_error(
      "alphabet: true false a\nstacks: S1\nmain { push(a, S9) }\n",
      "unknown stack 'S9'");
  expect_parse_error(
      "alphabet: true false a\nstacks: S1\nmain { if rand { skip } else { skip } }\n",
      "expected");  // rand requires ()
  expect_parse_error(
      "alphabet: true false a\nop f/1: a->a\nstacks: S1\nmain { skip }\n",
      "not total");
  expect_parse_error(
      "alphabet: true false a\n"
      "op f/2: a,a->a a,true->a a,false->a true,a->a true,true->a true,false->a "
      "false,a->a false,true->a false,false->a\n"
      "stacks: S1\nmain { push(f(a), S1) }\n",
      "expects 2 argument(s)");
  expect_parse_error(
      "alphabet: true false a\nstacks: S1\nmain { S1 := h(S1) }\n",
      "unknown function 'h'");
  expect_parse_error("alphabet: true false a\nstacks: S1\nmain { S1 := <b> }\n",
                     "unknown letter 'b'");
  expect_parse_error("alphabet: true false a\nstacks: S1\nmain { push(b, S1) }\n",
                     "unknown identifier 'b'");
}

TEST_CASE("parse error positions are reported") {
  try {
    parse_program("alphabet: true false a\nstacks: S1\nmain { push(a, S9) }\n");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.loc.line == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("well-formedness: loop stack must not occur in the body") {
  Program direct = parse_program(
      "alphabet: true false a\nstacks: S1\n"
      "main { loop S1 { push(a, S1) } }\n");
  CHECK(has_diag(check_wellformed(direct), "loop stack 'S1' occurs"));

  Program via_call = parse_program(
      "alphabet: true false a\nstacks: S1 S2\n"
      "function g(F1, F2) { push(a, F1) } returns F1\n"
      "main { loop S1 { S2 := g(S1, S2) } }\n");
  CHECK(has_diag(check_wellformed(via_call), "loop stack 'S1' occurs"));

  // ... but a callee's private use of its own formals is not an occurrence
  Program clean = parse_program(
      "alphabet: true false a\nstacks: S1 S2\n"
      "function g(F1, F2) { loop F2 { push(a, F1) } } returns F1\n"
      "main { loop S1 { S2 := g(S2, S2) } }\n");
  CHECK(check_wellformed(clean).empty());
}

TEST_CASE("well-formedness: recursion is rejected") {
  Program direct = parse_program(
      "alphabet: true false a\nstacks: S1\n"
      "function g(F1) { F1 := g(F1) } returns F1\n"
      "main { S1 := g(S1) }\n");
  CHECK(has_diag(check_wellformed(direct), "recursive call cycle: g -> g"));

  // mutual recursion cannot be written in source (no forward references),
  // so build the two functions directly
  Program p;
  p.alphabet = {"true", "false"};
  p.stacks = {"S1"};
  FunctionDef a;
  a.name = "a";
  a.formals = {"F1"};
  a.returned = "F1";
  a.body = make_assign_call("F1", "b", {"F1"});
  FunctionDef b;
  b.name = "b";
  b.formals = {"F1"};
  b.returned = "F1";
  b.body = make_assign_call("F1", "a", {"F1"});
  p.functions.push_back(std::move(a));
  p.functions.push_back(std::move(b));
  p.main = make_skip();
  CHECK(has_diag(check_wellformed(p), "recursive call cycle: a -> b -> a"));
}

TEST_CASE("well-formedness: predicates vs letter operators") {
  const std::string preamble =
      "alphabet: true false a\n"
      "op isp/1: a->true true->false false->false\n"
      "op mk/1: a->a true->a false->a\n"
      "stacks: S1\n";
  Program pred_as_expr =
      parse_program(preamble + "main { push(isp(a), S1) }\n");
  CHECK(has_diag(check_wellformed(pred_as_expr),
                 "predicate 'isp' used where a letter expression is expected"));

  Program op_as_cond =
      parse_program(preamble + "main { if mk(a) { skip } else { skip } }\n");
  CHECK(has_diag(check_wellformed(op_as_cond),
                 "operator 'mk' is not a predicate but is used as a condition"));

  Program fine = parse_program(
      preamble + "main { if isp(top(S1)) { push(mk(a), S1) } else { skip } }\n");
  // top-of-empty is a runtime concern, not a static one
  CHECK(check_wellformed(fine).empty());
}

TEST_CASE("well-formedness: arity re-checked on hand-built programs") {
  Program p;
  p.alphabet = {"true", "false", "a"};
  OperatorDef op;
  op.name = "f";
  op.arity = 2;
  p.ops.push_back(std::move(op));
  p.stacks = {"S1"};
  std::vector<ExprPtr> args;
  args.push_back(make_letter("a"));
  p.main = make_push(make_op_apply("f", std::move(args)), "S1");
  CHECK(has_diag(check_wellformed(p), "operator 'f' expects 2 argument(s)"));

  Program q;
  q.alphabet = {"true", "false"};
  q.stacks = {"S1"};
  std::vector<ExprPtr> args2;
  args2.push_back(make_letter("true"));
  q.main = make_push(make_op_apply("nosuch", std::move(args2)), "S1");
  CHECK(has_diag(check_wellformed(q), "unknown operator 'nosuch'"));

  Program r;
  r.alphabet = {"true", "false"};
  r.stacks = {"S1"};
  FunctionDef g;
  g.name = "g";
  g.formals = {"F1", "F2"};
  g.returned = "F1";
  g.body = make_skip();
  r.functions.push_back(std::move(g));
  r.main = make_assign_call("S1", "g", {"S1"});
  CHECK(has_diag(check_wellformed(r), "function 'g' expects 2 argument(s)"));
}

TEST_CASE("stacks_used reports first occurrences in order") {
  Program p = parse_program(
      "alphabet: true false a\nstacks: S1 S2 S3\n"
      "main { push(top(S2), S1); loop S3 { pop(S2) } }\n");
  CHECK(stacks_used(*p.main) == std::vector<std::string>{"S2", "S1", "S3"});
  CHECK(stack_occurs(*p.main, "S3"));
  CHECK(!stack_occurs(*p.main, "S9"));
}

}  // TEST_SUITE
