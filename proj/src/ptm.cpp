#include "isapp/ptm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "isapp/certifier.hpp"

namespace isapp {

bool PTMDescription::is_accepting(const std::string& q) const {
  return std::find(accepting.begin(), accepting.end(), q) != accepting.end();
}

namespace {

using TransTable = std::map<std::pair<std::string, std::string>, PTMAction>;

[[noreturn]] void bad(const std::string& msg) {
  throw std::runtime_error("ptm: " + msg);
}

// keywords of the target language; machine names must avoid them because
// states and tape symbols become program letters
const std::set<std::string> kLangKeywords = {
    "alphabet", "blank",   "op",   "registers", "stacks", "function",
    "main",     "returns", "skip", "if",        "else",   "loop",
    "push",     "pop",     "top",  "isEmpty",   "rand"};

// fixed identifiers the encoder claims in the emitted program
const std::vector<std::string> kEmittedNames = {
    "tape_l", "tape_h", "tape_r", "len",      "clk",
    "tmp",    "out",    "r_state", "eq",      "addition",
    "multiplication"};

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Move parse_move(const std::string& w, int lineno) {
  if (w == "L") return Move::Left;
  if (w == "S") return Move::Stay;
  if (w == "R") return Move::Right;
  bad("line " + std::to_string(lineno) + ": move must be L, S or R, got '" +
      w + "'");
}

int clock_exponent(const PowerProduct& pp) {
  return pp.empty() ? 0 : pp.begin()->second;
}

void validate_description(const PTMDescription& m) {
  if (m.states.empty()) bad("machine has no states");
  if (m.tape_alphabet.empty()) bad("machine has an empty tape alphabet");
  std::set<std::string> seen;
  for (const auto& q : m.states)
    if (!seen.insert(q).second) bad("duplicate state '" + q + "'");
  seen.clear();
  for (const auto& s : m.tape_alphabet)
    if (!seen.insert(s).second) bad("duplicate tape symbol '" + s + "'");
  if (!contains(m.tape_alphabet, m.blank))
    bad("blank symbol '" + m.blank + "' is not in the tape alphabet");
  if (!contains(m.states, m.initial))
    bad("initial state '" + m.initial + "' is not declared");
  for (const auto& q : m.accepting)
    if (!contains(m.states, q))
      bad("accepting state '" + q + "' is not declared");
  auto check_table = [&](const TransTable& t, const char* name) {
    for (const auto& q : m.states)
      for (const auto& s : m.tape_alphabet) {
        auto it = t.find({q, s});
        if (it == t.end())
          bad(std::string(name) + " has no entry for (" + q + ", " + s + ")");
        if (!contains(m.states, it->second.state))
          bad(std::string(name) + " targets undeclared state '" +
              it->second.state + "'");
        if (!contains(m.tape_alphabet, it->second.symbol))
          bad(std::string(name) + " writes undeclared symbol '" +
              it->second.symbol + "'");
      }
    if (t.size() != m.states.size() * m.tape_alphabet.size())
      bad(std::string(name) + " has entries outside states x alphabet");
  };
  check_table(m.delta0, "delta0");
  check_table(m.delta1, "delta1");
  for (const auto& [pp, c] : m.clock.terms) {
    (void)c;
    for (const auto& [v, e] : pp) {
      (void)e;
      if (v != 0) bad("the clock polynomial may use only X1");
    }
  }
}

CommandPtr seq_of(std::vector<CommandPtr> cs) {
  if (cs.empty()) return make_skip();
  CommandPtr r = std::move(cs.back());
  cs.pop_back();
  while (!cs.empty()) {
    r = make_seq(std::move(cs.back()), std::move(r));
    cs.pop_back();
  }
  return r;
}

BoolExprPtr eq_check(ExprPtr lhs, const std::string& letter) {
  std::vector<ExprPtr> args;
  args.push_back(std::move(lhs));
  args.push_back(make_letter(letter));
  return make_pred_apply("eq", std::move(args));
}

// write symbol, set state, perform the move
CommandPtr leaf_cmd(const PTMAction& a) {
  std::vector<CommandPtr> cs;
  cs.push_back(make_assign_literal("tape_h", {a.symbol}));
  cs.push_back(make_assign_reg("r_state", make_letter(a.state)));
  if (a.move == Move::Right) cs.push_back(emit_move_right());
  if (a.move == Move::Left) cs.push_back(emit_move_left());
  return seq_of(std::move(cs));
}

// per-state dispatch on the head symbol; the last symbol needs no test
CommandPtr sym_dispatch(const PTMDescription& m, const TransTable& t,
                        const std::string& q, size_t si) {
  const std::string& s = m.tape_alphabet[si];
  CommandPtr hit = leaf_cmd(t.at({q, s}));
  if (si + 1 == m.tape_alphabet.size()) return hit;
  return make_if(eq_check(make_top("tape_h"), s), std::move(hit),
                 sym_dispatch(m, t, q, si + 1));
}

CommandPtr state_dispatch(const PTMDescription& m, const TransTable& t,
                          size_t qi) {
  CommandPtr hit = sym_dispatch(m, t, m.states[qi], 0);
  if (qi + 1 == m.states.size()) return hit;
  return make_if(eq_check(make_register_ref("r_state"), m.states[qi]),
                 std::move(hit), state_dispatch(m, t, qi + 1));
}

CommandPtr accept_chain(const PTMDescription& m, size_t i) {
  if (i == m.accepting.size()) return make_skip();
  return make_if(eq_check(make_register_ref("r_state"), m.accepting[i]),
                 make_assign_literal("out", {}), accept_chain(m, i + 1));
}

FunctionDef make_addition_fn() {
  FunctionDef f;
  f.name = "addition";
  f.formals = {"A1", "A2"};
  f.returned = "A1";
  f.locals = {"A3"};
  std::vector<CommandPtr> loop_body;
  loop_body.push_back(make_push(make_top("A3"), "A1"));
  loop_body.push_back(make_pop("A3"));
  std::vector<CommandPtr> body;
  body.push_back(make_copy_stack("A3", "A2"));
  body.push_back(make_loop("A2", seq_of(std::move(loop_body))));
  f.body = seq_of(std::move(body));
  return f;
}

FunctionDef make_multiplication_fn() {
  FunctionDef f;
  f.name = "multiplication";
  f.formals = {"M1", "M2"};
  f.returned = "M3";
  f.locals = {"M3"};
  std::vector<CommandPtr> body;
  body.push_back(make_assign_literal("M3", {}));
  body.push_back(
      make_loop("M2", make_loop("M1", make_push(make_letter("true"), "M3"))));
  f.body = seq_of(std::move(body));
  return f;
}

FunctionDef make_scale_fn(unsigned long long c) {
  FunctionDef f;
  f.name = "scale_" + std::to_string(c);
  f.formals = {"B1"};
  f.returned = "B2";
  f.locals = {"B2"};
  std::vector<CommandPtr> pushes;
  for (unsigned long long i = 0; i < c; ++i)
    pushes.push_back(make_push(make_letter("true"), "B2"));
  std::vector<CommandPtr> body;
  body.push_back(make_assign_literal("B2", {}));
  body.push_back(make_loop("B1", seq_of(std::move(pushes))));
  f.body = seq_of(std::move(body));
  return f;
}

std::uint64_t clock_steps(const PTMDescription& m, size_t input_len) {
  return poly_eval(m.clock, {static_cast<unsigned long long>(input_len)});
}

}  // namespace

PTMDescription parse_ptm(const std::string& source) {
  PTMDescription m;
  bool have_states = false, have_alpha = false, have_blank = false;
  bool have_init = false, have_acc = false, have_clock = false;
  std::istringstream is(source);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      bad("line " + std::to_string(lineno) + ": expected 'section: ...'");
    std::string key = trim(line.substr(0, colon));
    std::string rest = line.substr(colon + 1);
    if (key == "states") {
      m.states = split_words(rest);
      have_states = true;
    } else if (key == "tape_alphabet") {
      m.tape_alphabet = split_words(rest);
      have_alpha = true;
    } else if (key == "blank") {
      auto ws = split_words(rest);
      if (ws.size() != 1)
        bad("line " + std::to_string(lineno) + ": blank wants one symbol");
      m.blank = ws[0];
      have_blank = true;
    } else if (key == "initial") {
      auto ws = split_words(rest);
      if (ws.size() != 1)
        bad("line " + std::to_string(lineno) + ": initial wants one state");
      m.initial = ws[0];
      have_init = true;
    } else if (key == "accepting") {
      m.accepting = split_words(rest);
      have_acc = true;
    } else if (key == "delta0" || key == "delta1") {
      auto ws = split_words(rest);
      if (ws.size() != 6 || ws[2] != "->")
        bad("line " + std::to_string(lineno) +
            ": expected 'q s -> q s L|S|R'");
      PTMAction a{ws[3], ws[4], parse_move(ws[5], lineno)};
      auto& t = key == "delta0" ? m.delta0 : m.delta1;
      if (!t.emplace(std::make_pair(ws[0], ws[1]), a).second)
        bad("line " + std::to_string(lineno) + ": duplicate " + key +
            " entry for (" + ws[0] + ", " + ws[1] + ")");
    } else if (key == "clock") {
      m.clock = parse_poly(rest);
      have_clock = true;
    } else {
      bad("line " + std::to_string(lineno) + ": unknown section '" + key +
          "'");
    }
  }
  if (!have_states) bad("missing section 'states'");
  if (!have_alpha) bad("missing section 'tape_alphabet'");
  if (!have_blank) bad("missing section 'blank'");
  if (!have_init) bad("missing section 'initial'");
  if (!have_acc) bad("missing section 'accepting'");
  if (!have_clock) bad("missing section 'clock'");
  validate_description(m);
  return m;
}

PTMDescription load_ptm(const std::string& path) {
  std::ifstream f(path);
  if (!f) bad("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_ptm(buf.str());
}

CommandPtr emit_move_right() {
  std::vector<CommandPtr> cs;
  cs.push_back(make_push(make_top("tape_h"), "tape_l"));
  cs.push_back(make_assign_literal("tape_h", {}));
  cs.push_back(make_push(make_top("tape_r"), "tape_h"));
  cs.push_back(make_pop("tape_r"));
  return seq_of(std::move(cs));
}

CommandPtr emit_move_left() {
  std::vector<CommandPtr> cs;
  cs.push_back(make_push(make_top("tape_h"), "tape_r"));
  cs.push_back(make_assign_literal("tape_h", {}));
  cs.push_back(make_push(make_top("tape_l"), "tape_h"));
  cs.push_back(make_pop("tape_l"));
  return seq_of(std::move(cs));
}

CommandPtr emit_delta(const PTMDescription& m) {
  validate_description(m);
  return make_if(make_rand(), state_dispatch(m, m.delta0, 0),
                 state_dispatch(m, m.delta1, 0));
}

Program encode(const PTMDescription& m,
               const std::vector<std::string>& input) {
  validate_description(m);
  for (const auto& s : input)
    if (!contains(m.tape_alphabet, s))
      bad("input symbol '" + s + "' is not in the tape alphabet");

  std::set<std::string> reserved(kEmittedNames.begin(), kEmittedNames.end());
  bool need_addition = !m.clock.terms.empty();
  bool need_mult = false;
  std::set<unsigned long long> scales;
  for (const auto& [pp, c] : m.clock.terms) {
    int e = clock_exponent(pp);
    if (c > 4096) bad("clock coefficient " + std::to_string(c) + " too large");
    if (e > 16) bad("clock degree " + std::to_string(e) + " too large");
    if (e >= 2) need_mult = true;
    if (e >= 1 && c >= 2) {
      scales.insert(c);
      reserved.insert("scale_" + std::to_string(c));
    }
  }
  auto check_name = [&](const std::string& n, const char* what) {
    if (n.empty()) bad(std::string(what) + " name is empty");
    for (char ch : n)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
        bad(std::string(what) + " '" + n + "' is not a valid identifier");
    if (kLangKeywords.count(n))
      bad(std::string(what) + " '" + n + "' is a language keyword");
    if (reserved.count(n))
      bad(std::string(what) + " '" + n + "' collides with an emitted name");
  };
  for (const auto& q : m.states) check_name(q, "state");
  for (const auto& s : m.tape_alphabet) check_name(s, "tape symbol");

  Program p;
  p.alphabet = {"true", "false"};
  auto add_letter = [&](const std::string& l) {
    if (!contains(p.alphabet, l)) p.alphabet.push_back(l);
  };
  for (const auto& s : m.tape_alphabet) add_letter(s);
  for (const auto& q : m.states) add_letter(q);
  if (p.alphabet.size() > 64)
    bad("alphabet needs " + std::to_string(p.alphabet.size()) +
        " letters; the budget is 64");
  p.blank = m.blank;

  OperatorDef eq;
  eq.name = "eq";
  eq.arity = 2;
  eq.is_predicate = true;
  for (const auto& x : p.alphabet)
    for (const auto& y : p.alphabet)
      eq.table[{x, y}] = x == y ? "true" : "false";
  p.ops.push_back(std::move(eq));

  p.registers = {"r_state"};
  p.stacks = {"tape_l", "tape_h", "tape_r", "len", "clk", "tmp", "out"};

  if (need_addition) p.functions.push_back(make_addition_fn());
  if (need_mult) p.functions.push_back(make_multiplication_fn());
  for (auto c : scales) p.functions.push_back(make_scale_fn(c));

  const size_t n = input.size();
  std::vector<CommandPtr> cmds;
  cmds.push_back(make_assign_literal(
      "tape_h", n ? std::vector<std::string>{input[0]}
                  : std::vector<std::string>{}));
  cmds.push_back(make_assign_literal(
      "tape_r",
      std::vector<std::string>(input.begin() + (n ? 1 : 0), input.end())));
  cmds.push_back(make_assign_reg("r_state", make_letter(m.initial)));
  if (n) {
    // unary input length: one push per cell right of the head, one more
    // for the head cell itself
    cmds.push_back(make_loop("tape_r", make_push(make_letter("true"), "len")));
    cmds.push_back(make_push(make_letter("true"), "len"));
  }
  for (const auto& [pp, c] : m.clock.terms) {
    int e = clock_exponent(pp);
    if (e == 0) {
      cmds.push_back(make_assign_literal(
          "tmp", std::vector<std::string>(static_cast<size_t>(c), "true")));
    } else {
      cmds.push_back(make_copy_stack("tmp", "len"));
      for (int i = 1; i < e; ++i)
        cmds.push_back(
            make_assign_call("tmp", "multiplication", {"tmp", "len"}));
      if (c >= 2)
        cmds.push_back(
            make_assign_call("tmp", "scale_" + std::to_string(c), {"tmp"}));
    }
    cmds.push_back(make_assign_call("clk", "addition", {"clk", "tmp"}));
  }
  cmds.push_back(make_loop("clk", emit_delta(m)));
  cmds.push_back(make_assign_literal("out", {"true"}));
  if (!m.accepting.empty()) cmds.push_back(accept_chain(m, 0));
  p.main = seq_of(std::move(cmds));
  return p;
}

std::vector<std::string> parse_tape(const PTMDescription& m,
                                    const std::string& text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  if (text.find(',') != std::string::npos) {
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, ',')) {
      cur = trim(cur);
      if (cur.empty()) bad("empty symbol in tape '" + text + "'");
      out.push_back(cur);
    }
  } else if (contains(m.tape_alphabet, text)) {
    out.push_back(text);
  } else {
    for (char ch : text) out.emplace_back(1, ch);
  }
  for (const auto& s : out)
    if (!contains(m.tape_alphabet, s))
      bad("tape symbol '" + s + "' is not in the tape alphabet");
  return out;
}

DirectRun simulate_direct(const PTMDescription& m,
                          const std::vector<std::string>& input,
                          BitSource& bits) {
  validate_description(m);
  for (const auto& s : input)
    if (!contains(m.tape_alphabet, s))
      bad("input symbol '" + s + "' is not in the tape alphabet");
  std::map<long long, std::string> cells;
  for (size_t i = 0; i < input.size(); ++i)
    cells[static_cast<long long>(i)] = input[i];
  long long h = 0;
  long long lo = 0;
  long long hi = std::max<long long>(0, static_cast<long long>(input.size()) - 1);
  std::string q = m.initial;
  const std::uint64_t k = clock_steps(m, input.size());
  for (std::uint64_t step = 0; step < k; ++step) {
    const TransTable& t = bits.flip() == 0 ? m.delta0 : m.delta1;
    auto cell = cells.find(h);
    const std::string sym = cell == cells.end() ? m.blank : cell->second;
    const PTMAction& a = t.at({q, sym});
    cells[h] = a.symbol;
    q = a.state;
    if (a.move == Move::Right) ++h;
    if (a.move == Move::Left) --h;
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  DirectRun r;
  r.state = q;
  r.steps = k;
  r.accepted = m.is_accepting(q);
  for (long long i = lo; i <= hi; ++i) {
    auto cell = cells.find(i);
    r.tape.push_back(cell == cells.end() ? m.blank : cell->second);
  }
  r.head = static_cast<int>(h - lo);
  return r;
}

Rat direct_accept_probability(const PTMDescription& m,
                              const std::vector<std::string>& input) {
  const std::uint64_t k = clock_steps(m, input.size());
  if (k > 24)
    bad("clock of " + std::to_string(k) +
        " steps is too large for exact enumeration");
  long long accepted = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
    std::vector<int> coin(static_cast<size_t>(k));
    for (std::uint64_t j = 0; j < k; ++j)
      coin[static_cast<size_t>(j)] = static_cast<int>((mask >> j) & 1);
    FixedBits bits(std::move(coin));
    if (simulate_direct(m, input, bits).accepted) ++accepted;
  }
  return Rat(accepted, 1LL << k);
}

DifferentialReport differential_test(const PTMDescription& m,
                                     const std::vector<std::string>& input,
                                     int flip_budget) {
  DifferentialReport rep;
  rep.steps = clock_steps(m, input.size());
  rep.direct_accept = direct_accept_probability(m, input);
  Program prog = encode(m, input);
  rep.encoded_certifies = try_certify(prog).accepted();
  Interp in(prog);
  Distribution d = in.distribution(in.initial_state(), flip_budget);
  const int out_idx = program_space(prog).index_of("out");
  Rat acc(0);
  for (const auto& [st, pr] : d)
    if (st.stacks[static_cast<size_t>(out_idx)].empty()) acc += pr;
  rep.encoded_accept = acc;
  rep.distributions_equal = rep.encoded_accept == rep.direct_accept;
  return rep;
}

}  // namespace isapp
