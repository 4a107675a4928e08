#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "isapp/ast.hpp"
#include "isapp/rational.hpp"

namespace isapp {

struct EvalError : std::runtime_error {
  enum class Kind { TopOfEmpty, BudgetExceeded };
  Kind kind;
  EvalError(Kind k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
};

// Stacks laid out in the order of the governing StackSpace; index 0 of a
// stack vector is its top. Registers are global and keyed by name.
struct MachineState {
  std::vector<std::vector<std::string>> stacks;
  std::map<std::string, std::string> regs;
  auto operator<=>(const MachineState&) const = default;
};

struct RunStats {
  std::uint64_t commands = 0;
  std::uint64_t flips = 0;
  std::uint64_t loop_iterations = 0;
};

struct RunResult {
  MachineState state;
  std::uint64_t flips = 0;
  // 2^-flips; only valid for runs short enough to fit (flips <= 62)
  Rat probability() const;
};

// One fair bit per call.
struct BitSource {
  virtual ~BitSource() = default;
  virtual int flip() = 0;
};

struct Prng final : BitSource {
  std::mt19937_64 gen;
  explicit Prng(std::uint64_t seed) : gen(seed) {}
  int flip() override { return static_cast<int>(gen() & 1); }
};

// Replays a fixed bit string; flips past the end read 0.
struct FixedBits final : BitSource {
  std::vector<int> bits;
  std::size_t next = 0;
  explicit FixedBits(std::vector<int> b) : bits(std::move(b)) {}
  int flip() override {
    return next < bits.size() ? bits[next++] : 0;
  }
};

std::uint64_t splitmix64(std::uint64_t x);
// Stream i of a root seed; lets batches of runs fan out deterministically.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

using Distribution = std::map<MachineState, Rat>;

struct MajorityResult {
  bool accept = false;
  Rat empty_mass;
  Rat nonempty_mass;
};

class Interp {
 public:
  explicit Interp(const Program& p) : prog_(p) {}

  // Declared stacks empty, every register initialized to "false".
  MachineState initial_state() const;

  RunResult run(const MachineState& init, std::uint64_t seed,
                RunStats* stats = nullptr) const;
  RunResult run_command(const Command& c, const StackSpace& space,
                        MachineState state, BitSource& bits,
                        RunStats* stats = nullptr) const;

  // Exact output distribution by exhaustive branching on rand, merging
  // equal states as it goes. Throws EvalError::BudgetExceeded when any
  // path wants more than flip_budget coins.
  Distribution distribution(const MachineState& init,
                            int flip_budget = 24) const;
  Distribution distribution_command(const Command& c, const StackSpace& space,
                                    const MachineState& init,
                                    int flip_budget = 24) const;

  // Majority acceptance: all stacks preloaded with n fill letters; accept
  // iff the output stack is empty with probability >= 1/2.
  MajorityResult decide_majority(int n, const std::string& output_stack = "",
                                 const std::string& fill = "true",
                                 int flip_budget = 24) const;

  const Program& program() const { return prog_; }

 private:
  const Program& prog_;
};

}  // namespace isapp
