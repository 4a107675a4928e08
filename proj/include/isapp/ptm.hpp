#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "isapp/ast.hpp"
#include "isapp/interp.hpp"
#include "isapp/multipoly.hpp"
#include "isapp/rational.hpp"

namespace isapp {

enum class Move { Left, Stay, Right };

struct PTMAction {
  std::string state;
  std::string symbol;
  Move move = Move::Stay;
  bool operator==(const PTMAction&) const = default;
};

// Single-tape machine that flips a fair coin every step to choose between
// the two transition tables and always runs exactly clock(input length)
// steps before its state decides acceptance.
struct PTMDescription {
  std::vector<std::string> states;
  std::vector<std::string> tape_alphabet;
  std::string blank;
  std::string initial;
  std::vector<std::string> accepting;
  // (state, read symbol) -> action; both tables must be total
  std::map<std::pair<std::string, std::string>, PTMAction> delta0, delta1;
  Polynomial clock;  // single variable X1 = input length

  bool is_accepting(const std::string& q) const;
};

// File format, one entry per line, '#' comments:
//   states: q0 q1
//   tape_alphabet: 0 1 _
//   blank: _
//   initial: q0
//   accepting: q1
//   delta0: q0 0 -> q1 1 R       (one line per (state, symbol); move L|S|R)
//   delta1: q0 0 -> q0 0 S
//   clock: X1^2 + 3
// Throws std::runtime_error on malformed or incomplete descriptions.
PTMDescription parse_ptm(const std::string& source);
PTMDescription load_ptm(const std::string& path);

// Head movement over the three tape stacks (tape_l top = cell just left
// of the head, tape_h = the cell under the head, tape_r top = cell just
// right of it). Four-command sequences; reading past explored tape gets
// the blank letter via top-of-empty.
CommandPtr emit_move_right();
CommandPtr emit_move_left();

// One machine step: branch on rand between the two tables, then dispatch
// on the state register and the symbol under the head with nested ifs.
// Every leaf writes the new symbol, updates the state register and moves.
CommandPtr emit_delta(const PTMDescription& m);

// Full program: tape setup for the given input, unary input length, the
// clock stack built with the arithmetic helper functions, the clocked
// dispatch loop, and an accept marker — the `out` stack ends empty iff
// the machine halted in an accepting state. The result always certifies.
// Throws std::runtime_error on name collisions with emitted identifiers,
// alphabets over the 64-letter budget, or inputs outside the alphabet.
Program encode(const PTMDescription& m,
               const std::vector<std::string>& input);

// Splits "0,1,0" on commas; otherwise per character when every character
// is a tape symbol; a bare symbol name stands alone. Throws on unknowns.
std::vector<std::string> parse_tape(const PTMDescription& m,
                                    const std::string& text);

struct DirectRun {
  std::string state;
  std::vector<std::string> tape;  // visited window, cells left to right
  int head = 0;                   // index into tape
  std::uint64_t steps = 0;
  bool accepted = false;
};

// Reference simulation: one coin per step, bit 0 picks delta0, for
// exactly clock(|input|) steps.
DirectRun simulate_direct(const PTMDescription& m,
                          const std::vector<std::string>& input,
                          BitSource& bits);

// Exact acceptance mass by enumerating every coin string of the clocked
// length (capped at 24 flips).
Rat direct_accept_probability(const PTMDescription& m,
                              const std::vector<std::string>& input);

struct DifferentialReport {
  std::uint64_t steps = 0;
  Rat direct_accept;
  Rat encoded_accept;
  bool distributions_equal = false;
  bool encoded_certifies = false;
  bool ok() const { return distributions_equal && encoded_certifies; }
};

// Encodes the machine, computes both acceptance masses exactly, compares
// them, and certifies the encoded program under the plus combiner.
DifferentialReport differential_test(const PTMDescription& m,
                                     const std::vector<std::string>& input,
                                     int flip_budget);

}  // namespace isapp
