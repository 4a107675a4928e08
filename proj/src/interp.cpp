#include "isapp/interp.hpp"

#include <utility>

namespace isapp {

Rat RunResult::probability() const {
  if (flips > 62) throw std::overflow_error("path probability underflows");
  return Rat(1, 1LL << flips);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(root + 0x9E3779B97F4A7C15ull * (index + 1));
}

namespace {

[[noreturn]] void top_of_empty(const std::string& stack) {
  throw EvalError(EvalError::Kind::TopOfEmpty,
                  "top of empty stack '" + stack + "' (no blank letter)");
}

struct Machine {
  const Program& prog;

  const std::vector<std::string>& stack_of(const StackSpace& space,
                                           MachineState& st,
                                           const std::string& name) const {
    return st.stacks[static_cast<size_t>(space.index_of(name))];
  }

  std::vector<std::string>& stack_mut(const StackSpace& space,
                                      MachineState& st,
                                      const std::string& name) const {
    return st.stacks[static_cast<size_t>(space.index_of(name))];
  }

  std::string top(const StackSpace& space, MachineState& st,
                  const std::string& name) const {
    auto& s = stack_mut(space, st, name);
    if (s.empty()) {
      if (prog.blank) return *prog.blank;
      top_of_empty(name);
    }
    return s.front();
  }

  std::string eval_expr(const Expr& e, const StackSpace& space,
                        MachineState& st) const {
    switch (e.kind) {
      case Expr::Kind::Letter: return e.name;
      case Expr::Kind::Register: {
        auto it = st.regs.find(e.name);
        if (it == st.regs.end())
          throw std::runtime_error("unknown register '" + e.name + "'");
        return it->second;
      }
      case Expr::Kind::Top: return top(space, st, e.name);
      case Expr::Kind::OpApply: {
        const OperatorDef* op = prog.find_op(e.name);
        if (!op) throw std::runtime_error("unknown operator '" + e.name + "'");
        std::vector<std::string> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args)
          args.push_back(eval_expr(*a, space, st));
        auto it = op->table.find(args);
        if (it == op->table.end())
          throw std::runtime_error("operator table miss for '" + e.name + "'");
        return it->second;
      }
    }
    throw std::logic_error("unhandled expression kind");
  }

  // boolean evaluation apart from rand, which callers branch on
  bool eval_bool_det(const BoolExpr& b, const StackSpace& space,
                     MachineState& st) const {
    switch (b.kind) {
      case BoolExpr::Kind::True: return true;
      case BoolExpr::Kind::False: return false;
      case BoolExpr::Kind::IsEmpty:
        return stack_mut(space, st, b.name).empty();
      case BoolExpr::Kind::PredApply: {
        const OperatorDef* op = prog.find_op(b.name);
        if (!op) throw std::runtime_error("unknown operator '" + b.name + "'");
        std::vector<std::string> args;
        args.reserve(b.args.size());
        for (const auto& a : b.args)
          args.push_back(eval_expr(*a, space, st));
        auto it = op->table.find(args);
        if (it == op->table.end())
          throw std::runtime_error("operator table miss for '" + b.name + "'");
        return it->second == "true";
      }
      case BoolExpr::Kind::Rand:
        throw std::logic_error("rand must be branched by the caller");
    }
    throw std::logic_error("unhandled boolean kind");
  }

  // ---- sampled execution ------------------------------------------------

  void exec(const Command& c, const StackSpace& space, MachineState& st,
            BitSource& bits, RunStats& stats) const {
    ++stats.commands;
    switch (c.kind) {
      case Command::Kind::Skip: return;
      case Command::Kind::AssignReg:
        st.regs[c.target] = eval_expr(*c.expr, space, st);
        return;
      case Command::Kind::CopyStack: {
        auto src = stack_of(space, st, c.source);
        stack_mut(space, st, c.target) = std::move(src);
        return;
      }
      case Command::Kind::AssignLiteral:
        stack_mut(space, st, c.target) = c.letters;
        return;
      case Command::Kind::Pop: {
        auto& s = stack_mut(space, st, c.target);
        if (!s.empty()) s.erase(s.begin());
        return;
      }
      case Command::Kind::Push: {
        std::string v = eval_expr(*c.expr, space, st);
        auto& s = stack_mut(space, st, c.target);
        s.insert(s.begin(), std::move(v));
        return;
      }
      case Command::Kind::Seq:
        exec(*c.a, space, st, bits, stats);
        exec(*c.b, space, st, bits, stats);
        return;
      case Command::Kind::If: {
        bool v;
        if (c.cond->kind == BoolExpr::Kind::Rand) {
          ++stats.flips;
          v = bits.flip() == 0;  // bit 0 reads as true
        } else {
          v = eval_bool_det(*c.cond, space, st);
        }
        exec(v ? *c.a : *c.b, space, st, bits, stats);
        return;
      }
      case Command::Kind::Loop: {
        // iteration count snapshots the stack size at entry
        size_t n = stack_of(space, st, c.target).size();
        for (size_t i = 0; i < n; ++i) {
          ++stats.loop_iterations;
          exec(*c.a, space, st, bits, stats);
        }
        return;
      }
      case Command::Kind::AssignCall: {
        const FunctionDef* f = prog.find_function(c.source);
        if (!f) throw std::runtime_error("unknown function '" + c.source + "'");
        StackSpace fspace = function_space(*f);
        MachineState frame;
        frame.stacks.resize(fspace.names.size());
        for (size_t q = 0; q < f->formals.size(); ++q)
          frame.stacks[q] = stack_of(space, st, c.call_args[q]);
        frame.regs = std::move(st.regs);
        exec(*f->body, fspace, frame, bits, stats);
        st.regs = std::move(frame.regs);
        stack_mut(space, st, c.target) =
            std::move(frame.stacks[static_cast<size_t>(
                fspace.index_of(f->returned))]);
        return;
      }
    }
  }

  // ---- exact distribution -------------------------------------------------

  // paths keyed by (resulting state, flips consumed so far)
  using PathMap = std::map<std::pair<MachineState, int>, unsigned long long>;

  static void add_paths(PathMap& into, PathMap&& from,
                        unsigned long long mult) {
    for (auto& [key, count] : from) into[key] += count * mult;
  }

  PathMap dist(const Command& c, const StackSpace& space, MachineState st,
               int flips, int budget) const {
    switch (c.kind) {
      case Command::Kind::Skip:
      case Command::Kind::AssignReg:
      case Command::Kind::CopyStack:
      case Command::Kind::AssignLiteral:
      case Command::Kind::Pop:
      case Command::Kind::Push: {
        RunStats stats;
        Prng unused(0);
        exec(c, space, st, unused, stats);
        PathMap out;
        out[{std::move(st), flips}] = 1;
        return out;
      }
      case Command::Kind::Seq: {
        PathMap mid = dist(*c.a, space, std::move(st), flips, budget);
        PathMap out;
        for (auto& [key, count] : mid)
          add_paths(out, dist(*c.b, space, key.first, key.second, budget),
                    count);
        return out;
      }
      case Command::Kind::If: {
        if (c.cond->kind == BoolExpr::Kind::Rand) {
          if (flips >= budget)
            throw EvalError(EvalError::Kind::BudgetExceeded,
                            "flip budget of " + std::to_string(budget) +
                                " exceeded during enumeration");
          PathMap out = dist(*c.a, space, st, flips + 1, budget);
          add_paths(out, dist(*c.b, space, std::move(st), flips + 1, budget),
                    1);
          return out;
        }
        bool v = eval_bool_det(*c.cond, space, st);
        return dist(v ? *c.a : *c.b, space, std::move(st), flips, budget);
      }
      case Command::Kind::Loop: {
        size_t n = stack_of(space, st, c.target).size();
        PathMap cur;
        cur[{std::move(st), flips}] = 1;
        for (size_t i = 0; i < n; ++i) {
          PathMap next;
          for (auto& [key, count] : cur)
            add_paths(next, dist(*c.a, space, key.first, key.second, budget),
                      count);
          cur = std::move(next);
        }
        return cur;
      }
      case Command::Kind::AssignCall: {
        const FunctionDef* f = prog.find_function(c.source);
        if (!f) throw std::runtime_error("unknown function '" + c.source + "'");
        StackSpace fspace = function_space(*f);
        MachineState frame;
        frame.stacks.resize(fspace.names.size());
        for (size_t q = 0; q < f->formals.size(); ++q)
          frame.stacks[q] = stack_of(space, st, c.call_args[q]);
        frame.regs = st.regs;
        int ret = fspace.index_of(f->returned);
        PathMap inner = dist(*f->body, fspace, std::move(frame), flips, budget);
        PathMap out;
        for (auto& [key, count] : inner) {
          MachineState caller = st;
          caller.regs = key.first.regs;
          caller.stacks[static_cast<size_t>(space.index_of(c.target))] =
              key.first.stacks[static_cast<size_t>(ret)];
          out[{std::move(caller), key.second}] += count;
        }
        return out;
      }
    }
    throw std::logic_error("unhandled command kind");
  }
};

Distribution paths_to_distribution(Machine::PathMap&& paths) {
  Distribution d;
  for (auto& [key, count] : paths)
    d[key.first] += Rat(static_cast<long long>(count), 1LL << key.second);
  Rat total(0);
  for (const auto& [st, p] : d) {
    if (p <= Rat(0)) throw std::logic_error("nonpositive probability");
    total += p;
  }
  if (total != Rat(1))
    throw std::logic_error("distribution does not sum to 1");
  return d;
}

void check_budget(int budget) {
  if (budget < 1 || budget > 48)
    throw std::invalid_argument("flip budget must be between 1 and 48");
}

}  // namespace

MachineState Interp::initial_state() const {
  MachineState st;
  st.stacks.resize(prog_.stacks.size());
  for (const auto& r : prog_.registers) st.regs[r] = "false";
  return st;
}

RunResult Interp::run(const MachineState& init, std::uint64_t seed,
                      RunStats* stats) const {
  Prng bits(seed);
  return run_command(*prog_.main, program_space(prog_), init, bits, stats);
}

RunResult Interp::run_command(const Command& c, const StackSpace& space,
                              MachineState state, BitSource& bits,
                              RunStats* stats) const {
  Machine m{prog_};
  RunStats local;
  m.exec(c, space, state, bits, local);
  if (stats) *stats = local;
  return RunResult{std::move(state), local.flips};
}

Distribution Interp::distribution(const MachineState& init,
                                  int flip_budget) const {
  return distribution_command(*prog_.main, program_space(prog_), init,
                              flip_budget);
}

Distribution Interp::distribution_command(const Command& c,
                                          const StackSpace& space,
                                          const MachineState& init,
                                          int flip_budget) const {
  check_budget(flip_budget);
  Machine m{prog_};
  return paths_to_distribution(m.dist(c, space, init, 0, flip_budget));
}

MajorityResult Interp::decide_majority(int n, const std::string& output_stack,
                                       const std::string& fill,
                                       int flip_budget) const {
  if (prog_.stacks.empty()) throw std::runtime_error("program has no stacks");
  std::string out = output_stack.empty() ? prog_.stacks.front() : output_stack;
  StackSpace space = program_space(prog_);
  int out_idx = space.index_of(out);
  if (out_idx < 0)
    throw std::runtime_error("unknown output stack '" + out + "'");
  if (!prog_.has_letter(fill))
    throw std::runtime_error("unknown fill letter '" + fill + "'");
  MachineState init = initial_state();
  for (auto& s : init.stacks)
    s.assign(static_cast<size_t>(n), fill);
  Distribution d = distribution(init, flip_budget);
  Rat empty(0);
  for (const auto& [st, p] : d)
    if (st.stacks[static_cast<size_t>(out_idx)].empty()) empty += p;
  Rat nonempty = Rat(1) - empty;
  return MajorityResult{empty >= nonempty, empty, nonempty};
}

}  // namespace isapp
